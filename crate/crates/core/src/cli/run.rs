//! Execution of a parsed [`RunSpec`].

use std::time::Instant;

use num_complex::Complex64;

use super::args::{RunSpec, Task};
use super::report::ReportRecord;
use crate::error::Result;
use crate::exec;
use crate::finite_diff;
use crate::multivariable::{jacobian_factorized, v_jacobian, v_partial, Point};
use crate::registry::PlanarField;
use crate::scalar_calculus::{v_derivative_closed, v_derivative_limit, v_derivative_numeric, v_integral};
use crate::special_functions::{coefficient_c, TruncatedSeries};
use crate::suite;
use crate::vector_field::{
    green_check, mixed_partial_closed, mixed_partial_limit, Field2, Nesting, Region2D,
};

/// Tolerance on `|∂^α_t ∂^κ_s f − ∂^κ_s ∂^α_t f| / (1 + |value|)`.
pub const MIXED_TOLERANCE: f64 = 1e-4;
/// Tolerance on `|lhs − rhs| / (1 + |lhs|)` for the Green identity.
pub const GREEN_TOLERANCE: f64 = 1e-6;

/// Boundary form used by `green-check`, echoed in every report.
pub const GREEN_BOUNDARY_NOTE: &str = "boundary side evaluated as (1/C) * closed integral of \
    [f x^(alpha-1) dx + g y^(alpha-1) dy] with a plus sign; no alpha-1 order operator is applied";

/// Records in output order and the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub records: Vec<ReportRecord>,
    pub exit_code: i32,
}

fn num(v: f64) -> String {
    v.to_string()
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}

fn list(vs: &[f64]) -> String {
    vs.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")
}

fn param_inputs(spec: &RunSpec) -> Vec<(String, String)> {
    let p = &spec.params;
    vec![
        ("gamma".into(), complex(p.gamma())),
        ("beta".into(), complex(p.beta())),
        ("rho".into(), complex(p.rho())),
        ("delta".into(), complex(p.delta())),
        ("p".into(), num(p.p())),
        ("q".into(), num(p.q())),
        ("trunc_i".into(), p.trunc_i().to_string()),
        ("alpha".into(), num(p.alpha())),
    ]
}

fn inputs(spec: &RunSpec, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = extra.iter().map(|(k, s)| (k.to_string(), s.clone())).collect();
    v.extend(param_inputs(spec));
    v
}

/// Evaluate `body`, stamping the wall time and converting an error into a
/// failed record built on `base`.
fn timed<F>(base: ReportRecord, body: F) -> ReportRecord
where
    F: FnOnce(ReportRecord) -> Result<ReportRecord>,
{
    let start = Instant::now();
    let mut rec = match body(base.clone()) {
        Ok(r) => r,
        Err(e) => base.failed(&e),
    };
    rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

/// Classical `∂²f/∂t∂s` from the exact `∂f/∂s`.
fn mixed_classical(f: &PlanarField, t: f64, s: f64) -> f64 {
    finite_diff::derivative(|u| f.dy(u, s), t)
}

pub fn run(spec: &RunSpec) -> Outcome {
    let records = match &spec.task {
        Task::EvalMl { z } => {
            let base = ReportRecord::new("eval-ml", inputs(spec, &[("z", complex(*z))]));
            vec![timed(base, |rec| {
                let series = TruncatedSeries::new(&spec.params)?;
                let e = series.ml(*z)?;
                let h = series.h(*z)?;
                let c = coefficient_c(&spec.params)?;
                Ok(rec
                    .value("ml_re", e.re)
                    .value("ml_im", e.im)
                    .value("h_re", h.re)
                    .value("h_im", h.im)
                    .value("c_re", c.re)
                    .value("c_im", c.im))
            })]
        }
        Task::Deriv { selector, f, ts } => exec::map(spec.mode, ts, |&t| {
            let base = ReportRecord::new("deriv", inputs(spec, &[("f", selector.clone()), ("t", num(t))]));
            timed(base, |rec| {
                let lim = v_derivative_limit(|x| f.value(x), t, &spec.params, &spec.limit)?;
                let closed = v_derivative_closed(|x| f.deriv(x), t, &spec.params)?;
                let numeric = v_derivative_numeric(|x| f.value(x), t, &spec.params)?;
                let mut rec = rec.value("limit", lim.value).value("closed", closed).value("numeric", numeric);
                rec.error_estimate = Some(lim.error);
                Ok(rec)
            })
        }),
        Task::Integrate { selector, f, a, t } => {
            let base = ReportRecord::new(
                "integrate",
                inputs(spec, &[("f", selector.clone()), ("a", num(*a)), ("t", num(*t))]),
            );
            vec![timed(base, |rec| {
                let q = v_integral(|x| f.value(x), *a, *t, &spec.params, &spec.quad)?;
                let mut rec = rec.value("integral", q.value);
                rec.error_estimate = Some(q.error);
                Ok(rec)
            })]
        }
        Task::Partial { selector, f, at, axis } => {
            let base = ReportRecord::new(
                "partial",
                inputs(spec, &[("f", selector.clone()), ("at", list(at)), ("axis", (axis + 1).to_string())]),
            );
            vec![timed(base, |rec| {
                let est = v_partial(f, &Point::new(at.clone())?, *axis, &spec.params, &spec.limit)?;
                let mut rec = rec.value("partial", est.value);
                rec.error_estimate = Some(est.error);
                Ok(rec)
            })]
        }
        Task::Jacobian { selector, f, at } => {
            let base = ReportRecord::new("jacobian", inputs(spec, &[("f", selector.clone()), ("at", list(at))]));
            vec![timed(base, |mut rec| {
                let a = Point::new(at.clone())?;
                let j = v_jacobian(f, &a, &spec.params, &spec.limit, spec.mode)?;
                let fact = jacobian_factorized(f, &a, &spec.params)?;
                for r in 0..j.entries.nrows() {
                    for c in 0..j.entries.ncols() {
                        rec = rec.value(&format!("J[{},{}]", r + 1, c + 1), j.entries[(r, c)]);
                    }
                }
                rec.error_estimate = Some(j.errors.amax());
                rec.residual = Some(suite::matrix_gap(&j.entries, &fact));
                Ok(rec)
            })]
        }
        Task::MixedCheck { selector, f, t, s, orders } => {
            let mut base = ReportRecord::new(
                "mixed-check",
                inputs(
                    spec,
                    &[
                        ("f", selector.clone()),
                        ("t", num(*t)),
                        ("s", num(*s)),
                        ("kappa", num(orders.kappa())),
                    ],
                ),
            );
            base.pass = Some(false);
            vec![timed(base, |rec| {
                let ts = mixed_partial_limit(f, *t, *s, *orders, Nesting::SThenT, &spec.params, &spec.limit)?;
                let st = mixed_partial_limit(f, *t, *s, *orders, Nesting::TThenS, &spec.params, &spec.limit)?;
                let closed = mixed_partial_closed(|u, v| mixed_classical(f, u, v), *t, *s, *orders, &spec.params)?;
                let residual = (ts.value - st.value).abs();
                let mut rec = rec
                    .value("s_then_t", ts.value)
                    .value("t_then_s", st.value)
                    .value("closed", closed)
                    .checked(residual, MIXED_TOLERANCE * (1.0 + ts.value.abs()));
                rec.error_estimate = Some(ts.error.max(st.error));
                Ok(rec)
            })]
        }
        Task::GreenCheck { f_selector, g_selector, f, g, rect } => {
            let mut base = ReportRecord::new(
                "green-check",
                inputs(spec, &[("f", f_selector.clone()), ("g", g_selector.clone()), ("rect", list(rect))]),
            );
            base.message = Some(GREEN_BOUNDARY_NOTE.to_string());
            base.pass = Some(false);
            vec![timed(base, |rec| {
                let region = Region2D::rect(rect[0], rect[1], rect[2], rect[3])?;
                let rep = green_check(f, g, &region, &spec.params, &spec.quad, spec.mode)?;
                let mut rec = rec
                    .value("lhs", rep.lhs)
                    .value("lhs_weighted", rep.lhs_weighted)
                    .value("rhs", rep.rhs)
                    .value("form_gap", rep.form_gap)
                    .checked(rep.residual, GREEN_TOLERANCE * (1.0 + rep.lhs.abs()));
                rec.error_estimate = Some(rep.quadrature_error);
                Ok(rec)
            })]
        }
        Task::Verify => suite::run_all(spec.mode)
            .into_iter()
            .map(|o| {
                let mut rec = ReportRecord::new(
                    "verify",
                    vec![
                        ("module".into(), o.module.into()),
                        ("property".into(), o.name.into()),
                        ("cases".into(), o.cases.to_string()),
                    ],
                )
                .value("worst", o.worst)
                .checked(o.worst, o.tolerance);
                rec.pass = Some(o.pass);
                if let Some(err) = o.error {
                    let (kind, msg) = err.split_once(": ").unwrap_or((err.as_str(), ""));
                    rec.error = Some(kind.to_string());
                    rec.message = Some(msg.to_string());
                }
                rec.wall_ms = o.wall_ms;
                rec
            })
            .collect(),
    };
    let failed = records.iter().any(|r| r.error.is_some())
        || (matches!(spec.task, Task::Verify) && records.iter().any(|r| r.pass != Some(true)));
    let exit_code = i32::from(failed);
    Outcome { records, exit_code }
}
