//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an operator fails (or `verify` finds a
//! failing property), 2 on a usage error. Reports go to stdout or `--out`;
//! diagnostics go to stderr. `VFRAC_SEED` is accepted and ignored, since
//! every suite is deterministic.

mod args;
mod report;
mod run;

pub use args::{parse_args, Format, RunSpec, Task, UsageError};
pub use report::{format_float, render_csv, render_json, to_json_line, ReportRecord, CSV_HEADER};
pub use run::{run, Outcome, GREEN_BOUNDARY_NOTE, GREEN_TOLERANCE, MIXED_TOLERANCE};

/// Environment variable reserved for seeding randomized suites.
pub const SEED_VAR: &str = "VFRAC_SEED";

pub fn render(records: &[ReportRecord], format: Format) -> String {
    match format {
        Format::Json => render_json(records),
        Format::Csv => render_csv(records),
    }
}

/// Parse, run and emit; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = std::env::var_os(SEED_VAR);
    let spec = match parse_args(argv) {
        Ok(spec) => spec,
        Err(e) => {
            e.print();
            return e.exit_code();
        }
    };
    let outcome = run(&spec);
    for rec in outcome.records.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "{}: {}: {}",
            rec.operator,
            rec.error.as_deref().unwrap_or_default(),
            rec.message.as_deref().unwrap_or_default()
        );
    }
    let text = render(&outcome.records, spec.format);
    match &spec.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    outcome.exit_code
}
