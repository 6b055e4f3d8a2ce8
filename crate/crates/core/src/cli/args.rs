//! Argument parsing into a validated [`RunSpec`].

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::exec::Exec;
use crate::limit::LimitConfig;
use crate::quadrature::QuadratureConfig;
use crate::registry::{MapSelector, PlanarField, ScalarFn};
use crate::special_functions::ParameterSet;
use crate::vector_field::MixedOrders;

#[derive(Parser, Debug)]
#[command(name = "vfrac", version, about = "Truncated V-fractional derivatives, integrals and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    tolerances: ToleranceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// gamma, as `re` or `re,im`
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    beta: String,
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    rho: String,
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    delta: String,
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    q: f64,
    /// truncation index i of the series
    #[arg(long = "trunc", visible_alias = "trunc-i", global = true, default_value_t = 2)]
    trunc: usize,
    /// derivative order in (0, 1]
    #[arg(long, global = true, default_value_t = 0.5, allow_hyphen_values = true)]
    alpha: f64,
}

#[derive(Args, Debug)]
struct ToleranceArgs {
    #[arg(long, global = true)]
    eps_base: Option<f64>,
    #[arg(long, global = true)]
    eps_levels: Option<usize>,
    #[arg(long, global = true)]
    richardson_order: Option<usize>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    #[arg(long, global = true)]
    nodes_per_panel: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// evaluate batches on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the truncated Mittag-Leffler function, H and C at z
    EvalMl {
        /// `re` or `re,im`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// V-derivative of a scalar built-in at one or more points
    Deriv {
        #[arg(long)]
        f: String,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<f64>,
    },
    /// V-integral of a scalar built-in over [a, t]
    Integrate {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// V-partial of a scalar field along one axis
    Partial {
        #[arg(long)]
        f: String,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        /// 1-based axis
        #[arg(long, default_value_t = 1)]
        axis: usize,
    },
    /// V-Jacobian of a vector map (components separated by ';')
    Jacobian {
        #[arg(long)]
        f: String,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
    },
    /// Both nestings of the mixed V-partial and their difference
    MixedCheck {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// order of the s-partial (defaults to alpha)
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
    },
    /// Both sides of the weighted Green identity on a rectangle
    GreenCheck {
        /// x0,x1,y0,y1
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        rect: Vec<f64>,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Run the full property suite
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What to run.
#[derive(Debug, Clone)]
pub enum Task {
    EvalMl { z: Complex64 },
    Deriv { selector: String, f: ScalarFn, ts: Vec<f64> },
    Integrate { selector: String, f: ScalarFn, a: f64, t: f64 },
    Partial { selector: String, f: MapSelector, at: Vec<f64>, axis: usize },
    Jacobian { selector: String, f: MapSelector, at: Vec<f64> },
    MixedCheck { selector: String, f: PlanarField, t: f64, s: f64, orders: MixedOrders },
    GreenCheck { f_selector: String, g_selector: String, f: PlanarField, g: PlanarField, rect: [f64; 4] },
    Verify,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::EvalMl { .. } => "eval-ml",
            Task::Deriv { .. } => "deriv",
            Task::Integrate { .. } => "integrate",
            Task::Partial { .. } => "partial",
            Task::Jacobian { .. } => "jacobian",
            Task::MixedCheck { .. } => "mixed-check",
            Task::GreenCheck { .. } => "green-check",
            Task::Verify => "verify",
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub task: Task,
    pub params: ParameterSet,
    pub limit: LimitConfig,
    pub quad: QuadratureConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub mode: Exec,
}

/// Rejected command line; exits with code 2 (or 0 for `--help`/`--version`).
#[derive(Debug)]
pub enum UsageError {
    Clap(clap::Error),
    Invalid(String),
}

impl UsageError {
    pub fn exit_code(&self) -> i32 {
        match self {
            UsageError::Clap(e) => e.exit_code(),
            UsageError::Invalid(_) => 2,
        }
    }

    /// Print the message; help and version text go to stdout, errors to stderr.
    pub fn print(&self) {
        match self {
            UsageError::Clap(e) => {
                let _ = e.print();
            }
            UsageError::Invalid(msg) => eprintln!("error: {msg}"),
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageError::Clap(e) => write!(f, "{e}"),
            UsageError::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for UsageError {}

fn invalid(msg: impl Into<String>) -> UsageError {
    UsageError::Invalid(msg.into())
}

fn parse_complex(name: &str, s: &str) -> Result<Complex64, UsageError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| invalid(format!("--{name}: '{s}' is not a number or re,im pair")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(invalid(format!("--{name}: '{s}' is not a number or re,im pair"))),
    }
}

fn finite(name: &str, v: f64) -> Result<f64, UsageError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("--{name} must be finite")))
    }
}

fn finite_all(name: &str, vs: &[f64]) -> Result<(), UsageError> {
    vs.iter().try_for_each(|&v| finite(name, v).map(|_| ()))
}

/// Parse `argv` (including the program name) into a [`RunSpec`].
pub fn parse_args<I, T>(argv: I) -> Result<RunSpec, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(UsageError::Clap)?;
    let pa = &cli.params;
    let params = ParameterSet::new(
        parse_complex("gamma", &pa.gamma)?,
        parse_complex("beta", &pa.beta)?,
        parse_complex("rho", &pa.rho)?,
        parse_complex("delta", &pa.delta)?,
        pa.p,
        pa.q,
        pa.trunc,
        pa.alpha,
    )
    .map_err(|e| invalid(e.to_string()))?;

    let defaults = LimitConfig::default();
    let tol = &cli.tolerances;
    let limit = LimitConfig {
        eps_base: tol.eps_base.unwrap_or(defaults.eps_base),
        eps_levels: tol.eps_levels.unwrap_or(defaults.eps_levels),
        richardson_order: tol.richardson_order.unwrap_or(defaults.richardson_order),
    };
    limit.validate().map_err(|e| invalid(e.to_string()))?;
    let qd = QuadratureConfig::default();
    let quad = QuadratureConfig {
        abs_tol: tol.abs_tol.unwrap_or(qd.abs_tol),
        rel_tol: tol.rel_tol.unwrap_or(qd.rel_tol),
        max_subdivisions: tol.max_subdivisions.unwrap_or(qd.max_subdivisions),
        nodes_per_panel: tol.nodes_per_panel.unwrap_or(qd.nodes_per_panel),
    };
    quad.validate().map_err(|e| invalid(e.to_string()))?;

    let sel_err = |e: crate::registry::SelectorError| invalid(e.to_string());
    let task = match cli.command {
        Command::EvalMl { z } => Task::EvalMl { z: parse_complex("z", &z)? },
        Command::Deriv { f, t } => {
            finite_all("t", &t)?;
            Task::Deriv { f: ScalarFn::parse(&f).map_err(sel_err)?, selector: f, ts: t }
        }
        Command::Integrate { f, a, t } => Task::Integrate {
            f: ScalarFn::parse(&f).map_err(sel_err)?,
            selector: f,
            a: finite("a", a)?,
            t: finite("t", t)?,
        },
        Command::Partial { f, at, axis } => {
            finite_all("at", &at)?;
            if axis == 0 || axis > at.len() {
                return Err(invalid(format!("--axis {axis} out of range 1..={}", at.len())));
            }
            let map = MapSelector::parse(&f, at.len()).map_err(sel_err)?;
            if map.components().len() != 1 {
                return Err(invalid("partial needs a single scalar field"));
            }
            Task::Partial { f: map, selector: f, at, axis: axis - 1 }
        }
        Command::Jacobian { f, at } => {
            finite_all("at", &at)?;
            Task::Jacobian { f: MapSelector::parse(&f, at.len()).map_err(sel_err)?, selector: f, at }
        }
        Command::MixedCheck { f, t, s, kappa } => {
            let orders = MixedOrders::new(params.alpha(), kappa.unwrap_or(params.alpha()))
                .map_err(|e| invalid(e.to_string()))?;
            Task::MixedCheck {
                f: PlanarField::parse(&f).map_err(sel_err)?,
                selector: f,
                t: finite("t", t)?,
                s: finite("s", s)?,
                orders,
            }
        }
        Command::GreenCheck { rect, f, g } => {
            let rect: [f64; 4] =
                rect.try_into().map_err(|_| invalid("--rect needs exactly four values x0,x1,y0,y1"))?;
            finite_all("rect", &rect)?;
            if !(rect[0] < rect[1] && rect[2] < rect[3]) {
                return Err(invalid("--rect needs x0 < x1 and y0 < y1"));
            }
            Task::GreenCheck {
                f: PlanarField::parse(&f).map_err(sel_err)?,
                g: PlanarField::parse(&g).map_err(sel_err)?,
                f_selector: f,
                g_selector: g,
                rect,
            }
        }
        Command::Verify => Task::Verify,
    };
    let mode = if cli.output.sequential { Exec::Sequential } else { Exec::Auto };
    Ok(RunSpec { task, params, limit, quad, format: cli.output.format, out: cli.output.out, mode })
}
