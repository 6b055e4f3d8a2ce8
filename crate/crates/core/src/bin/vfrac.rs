fn main() {
    std::process::exit(vfrac::cli::main_with(std::env::args_os()));
}
