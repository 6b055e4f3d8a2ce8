//! The property suite run by `vfrac verify`.
//!
//! Each property sweeps a fixed corpus and reports its worst normalized
//! residual against a tolerance. Properties are evaluated through [`Exec`]
//! and returned in declaration order.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::exec::{self, Exec};
use crate::limit::{self, LimitConfig};
use crate::multivariable::{
    chain_rule_multi, jacobian_factorized, linear_map_residual, scalar_field, v_jacobian, v_partial, vector_map,
    LinearMap, Point,
};
use crate::quadrature::{integrate_adaptive, integrate_weighted, Interval, QuadratureConfig};
use crate::registry::PlanarField;
use crate::scalar_calculus::{
    chain_rule, fundamental_check, power_rule, v_derivative_closed, v_derivative_limit,
};
use crate::special_functions::{
    coefficient_c_real, log_gamma, log_gamma_real, pochhammer_gen, truncated_h, ParameterSet, TruncatedSeries,
};
use crate::vector_field::{
    commutativity_check, green_check, green_lhs, green_rhs, mixed_partial_closed, mixed_partial_limit, GreenForm,
    MixedOrders, Nesting, Region2D,
};

/// Outcome of one property over its corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub module: &'static str,
    pub name: &'static str,
    /// Worst normalized residual over the corpus.
    pub worst: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub pass: bool,
    /// First operator error, if any case failed to evaluate.
    pub error: Option<String>,
    pub wall_ms: f64,
}

struct Tally {
    worst: f64,
    cases: usize,
    error: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, cases: 0, error: None }
    }

    fn record(&mut self, metric: f64) {
        self.cases += 1;
        if metric.is_nan() {
            self.worst = f64::INFINITY;
        } else {
            self.worst = self.worst.max(metric);
        }
    }

    fn check(&mut self, r: Result<f64>) {
        match r {
            Ok(m) => self.record(m),
            Err(e) => {
                self.cases += 1;
                if self.error.is_none() {
                    self.error = Some(format!("{}: {e}", e.kind()));
                }
            }
        }
    }

    fn finish(self, module: &'static str, name: &'static str, tolerance: f64) -> PropertyOutcome {
        let pass = self.error.is_none() && self.worst <= tolerance;
        PropertyOutcome {
            module,
            name,
            worst: self.worst,
            tolerance,
            cases: self.cases,
            pass,
            error: self.error,
            wall_ms: 0.0,
        }
    }
}

/// `|a - b| / |b|`, or `|a|` when `b` is zero.
pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// `|a - b| / (1 + |b|)`.
pub fn rel1(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Worst entrywise relative gap between two matrices. Entries below `1e-4`
/// of the largest reference entry are compared against that floor instead,
/// so finite-difference noise on structural zeros is not magnified.
pub fn matrix_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let floor = 1e-4 * b.amax();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = (x - y).abs();
            let s = y.abs().max(floor);
            if s == 0.0 { d } else { d / s }
        })
        .fold(0.0, f64::max)
}

type Scalar = fn(f64) -> f64;

/// Smooth one-variable test map with its derivative.
#[derive(Clone, Copy)]
pub struct Sample {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub df: fn(f64) -> f64,
}

pub const SCALAR_CORPUS: [Sample; 7] = [
    Sample { name: "t^2", f: |t| t * t, df: |t| 2.0 * t },
    Sample { name: "t^3", f: |t| t * t * t, df: |t| 3.0 * t * t },
    Sample { name: "1-2t+t^4/2", f: |t| 1.0 - 2.0 * t + 0.5 * t.powi(4), df: |t| -2.0 + 2.0 * t.powi(3) },
    Sample { name: "sin", f: f64::sin, df: f64::cos },
    Sample { name: "cos", f: f64::cos, df: |t| -t.sin() },
    Sample { name: "exp", f: f64::exp, df: f64::exp },
    Sample { name: "ln", f: f64::ln, df: |t| 1.0 / t },
];

pub const T_GRID: [f64; 3] = [0.5, 1.0, 2.0];
pub const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Fixed real parameter draws `(γ, β, ρ, δ, p, q, trunc_i)`.
pub const PARAM_DRAWS: [(f64, f64, f64, f64, f64, f64, usize); 3] = [
    (1.2, 0.8, 1.5, 1.1, 1.0, 1.3, 3),
    (0.7, 1.4, 1.1, 2.0, 0.5, 1.0, 4),
    (2.0, 0.5, 0.6, 0.9, 1.5, 2.5, 2),
];

pub fn draw(k: usize, alpha: f64) -> ParameterSet {
    let (g, b, r, d, p, q, i) = PARAM_DRAWS[k];
    ParameterSet::real(g, b, r, d, p, q, i, alpha).expect("fixed draws satisfy the constraints")
}

fn unit(alpha: f64, trunc: usize) -> ParameterSet {
    ParameterSet::unit(alpha, trunc).expect("unit parameters are valid")
}

type Property = fn(Exec) -> PropertyOutcome;

const PROPERTIES: [Property; 32] = [
    sf_h_at_zero,
    sf_truncation_consistency,
    sf_pochhammer_zero,
    sf_no_overflow,
    sf_linear_coefficient,
    sf_log_gamma_identities,
    quad_additivity,
    quad_substitution,
    quad_linearity,
    scalar_closed_form,
    scalar_linearity,
    scalar_product,
    scalar_quotient,
    scalar_constants,
    scalar_power_rule,
    scalar_chain_rule,
    scalar_truncation_independence,
    scalar_conformable,
    scalar_alpha_one,
    scalar_fundamental,
    multi_factorization,
    multi_residual_decay,
    multi_uniqueness,
    multi_linearity_product,
    multi_scalar_consistency,
    multi_chain_rule,
    field_mixed_closed,
    field_commutation,
    field_green,
    field_green_additivity,
    field_green_orientation,
    field_green_classical,
];

/// Run every property; results come back in a fixed order.
pub fn run_all(mode: Exec) -> Vec<PropertyOutcome> {
    exec::map(mode, &PROPERTIES, |p| {
        let start = Instant::now();
        let mut out = p(Exec::Sequential);
        out.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        out
    })
}

// ---- special functions ----

fn sf_param_sets() -> Vec<ParameterSet> {
    let c = Complex64::new;
    let mut sets: Vec<ParameterSet> = (0..3).map(|k| draw(k, 0.5)).collect();
    sets.push(unit(0.5, 2));
    sets.push(ParameterSet::new(c(1.0, 0.5), c(2.0, -1.0), c(0.8, 0.2), c(1.5, 0.0), 1.0, 1.2, 5, 0.3).unwrap());
    sets
}

fn sf_h_at_zero(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for p in sf_param_sets() {
        for i in [0, 1, 7] {
            t.check(truncated_h(&p.with_trunc(i), Complex64::new(0.0, 0.0)).map(|h| (h - 1.0).norm()));
        }
    }
    t.finish("special_functions", "H(0) = 1 exactly", 0.0)
}

fn sf_truncation_consistency(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for p in (0..3).map(|k| draw(k, 0.5)) {
        for z in [0.0, 0.5, 2.0, 7.0] {
            let z = Complex64::new(z, 0.0);
            for n in 0..12 {
                let r = (|| {
                    let lo = TruncatedSeries::new(&p.with_trunc(n))?.ml(z)?;
                    let hi_series = TruncatedSeries::new(&p.with_trunc(n + 1))?;
                    let hi = hi_series.ml(z)?;
                    let term = hi_series.ml_term(z, n + 1)?;
                    Ok((hi - lo - term).norm() / hi.norm().max(f64::MIN_POSITIVE))
                })();
                t.check(r);
            }
        }
    }
    t.finish("special_functions", "E_{n+1} - E_n equals term n+1", 1e-14)
}

fn sf_pochhammer_zero(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let c = Complex64::new;
    for x in [c(0.3, 0.0), c(1.0, 0.0), c(4.5, 0.0), c(0.7, 2.0), c(-1.5, 0.0)] {
        for step in [0.5, 1.0, 2.5] {
            t.check(pochhammer_gen(x, step, 0).map(|v| (v - 1.0).norm()));
        }
    }
    t.finish("special_functions", "(x)_0 = 1 exactly", 0.0)
}

fn sf_no_overflow(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let values = [0.5, 1.7, 3.2, 5.0];
    for &g in &values {
        for &b in &values {
            for &r in &[0.5, 5.0] {
                for &d in &[0.5, 5.0] {
                    let Ok(p) = ParameterSet::real(g, b, r, d, 1.0, 1.0, 50, 0.5) else { continue };
                    let series = match TruncatedSeries::new(&p) {
                        Ok(s) => s,
                        Err(e) => {
                            t.check(Err(e));
                            continue;
                        }
                    };
                    for z in [Complex64::new(10.0, 0.0), Complex64::new(-10.0, 0.0), Complex64::new(6.0, 8.0)] {
                        t.check(series.ml(z).map(|v| if v.re.is_finite() && v.im.is_finite() { 0.0 } else { 1.0 }));
                    }
                }
            }
        }
    }
    t.finish("special_functions", "no overflow for |z| <= 10, trunc_i <= 50", 0.0)
}

fn sf_linear_coefficient(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for p in (0..3).map(|k| draw(k, 0.5)).chain([unit(0.5, 2), unit(0.5, 1)]) {
        let r = (|| {
            let c = coefficient_c_real(&p)?;
            let series = TruncatedSeries::new(&p)?;
            let est = limit::extrapolate(&LimitConfig::default(), |z| {
                Ok((series.h(Complex64::new(z, 0.0))?.re - 1.0) / z)
            })?;
            Ok(rel(est.value, c))
        })();
        t.check(r);
    }
    t.finish("special_functions", "C is the linear coefficient of H", 1e-8)
}

fn sf_log_gamma_identities(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for k in 0..40 {
        let x = 0.05 + 0.37 * k as f64;
        let r = (|| {
            let a = log_gamma_real(x + 1.0)?;
            let b = log_gamma_real(x)? + x.ln();
            Ok((a - b).abs() / a.abs().max(1.0))
        })();
        t.check(r);
    }
    // reflection: Γ(z)Γ(1-z) = π / sin(πz)
    for x in [0.1, 0.3, 0.45, 0.7] {
        let r = (|| {
            let lhs = log_gamma_real(x)? + log_gamma_real(1.0 - x)?;
            Ok((lhs - (PI / (PI * x).sin()).ln()).abs())
        })();
        t.check(r);
    }
    // Γ(1/2) = √π and Γ(n) = (n-1)!
    t.check(log_gamma_real(0.5).map(|v| (v - 0.5 * PI.ln()).abs()));
    t.check(log_gamma_real(11.0).map(|v| (v - 3_628_800f64.ln()).abs() / v));
    // conjugate symmetry
    let z = Complex64::new(1.3, 2.1);
    t.check(log_gamma(z).and_then(|a| Ok((a.conj() - log_gamma(z.conj())?).norm())));
    t.finish("special_functions", "log-gamma recurrence and reflection", 1e-13)
}

// ---- quadrature ----

type Integrand = (&'static str, fn(f64) -> f64);

const QUAD_CORPUS: [Integrand; 4] = [
    ("sin", f64::sin),
    ("exp(-x)x^2", |x| (-x).exp() * x * x),
    ("1/(1+x^2)", |x| 1.0 / (1.0 + x * x)),
    ("sqrt(x+0.1)", |x| (x + 0.1).sqrt()),
];

fn quad_additivity(_: Exec) -> PropertyOutcome {
    let cfg = QuadratureConfig::default();
    let mut t = Tally::new();
    for (_, g) in QUAD_CORPUS {
        for (a, b, c) in [(0.0, 0.7, 2.0), (1.0, 1.5, 4.0), (0.05, 0.3, 0.9)] {
            let r = (|| {
                let whole = integrate_adaptive(g, Interval::new(a, c)?, &cfg)?.value;
                let left = integrate_adaptive(g, Interval::new(a, b)?, &cfg)?.value;
                let right = integrate_adaptive(g, Interval::new(b, c)?, &cfg)?.value;
                Ok((whole - left - right).abs() / (2.0 * cfg.abs_tol))
            })();
            t.check(r);
        }
    }
    t.finish("quadrature", "additivity over [a,b] + [b,c] (units of 2 abs_tol)", 1.0)
}

fn quad_substitution(_: Exec) -> PropertyOutcome {
    let cfg = QuadratureConfig::default();
    let mut t = Tally::new();
    for (_, g) in QUAD_CORPUS {
        for alpha in ALPHAS {
            for (lo, hi) in [(0.2, 1.0), (1.0, 3.5)] {
                let r = (|| {
                    let iv = Interval::new(lo, hi)?;
                    let sub = integrate_weighted(g, iv, alpha, &cfg)?.value;
                    let direct = integrate_adaptive(|x| g(x) * x.powf(alpha - 1.0), iv, &cfg)?.value;
                    Ok((sub - direct).abs() / (5.0 * cfg.abs_tol.max(cfg.rel_tol * direct.abs())))
                })();
                t.check(r);
            }
        }
    }
    t.finish("quadrature", "u = x^alpha substitution matches direct weighting", 1.0)
}

fn quad_linearity(_: Exec) -> PropertyOutcome {
    let cfg = QuadratureConfig::default();
    let mut t = Tally::new();
    let (lam, mu) = (2.5, -1.25);
    for w in QUAD_CORPUS.windows(2) {
        let (f, g) = (w[0].1, w[1].1);
        let r = (|| {
            let iv = Interval::new(0.1, 2.9)?;
            let comb = integrate_adaptive(|x| lam * f(x) + mu * g(x), iv, &cfg)?.value;
            let a = integrate_adaptive(f, iv, &cfg)?.value;
            let b = integrate_adaptive(g, iv, &cfg)?.value;
            let expect = lam * a + mu * b;
            Ok((comb - expect).abs() / (5.0 * cfg.abs_tol.max(cfg.rel_tol * expect.abs())))
        })();
        t.check(r);
    }
    t.finish("quadrature", "linearity (units of the tolerance)", 1.0)
}

// ---- scalar calculus ----

fn limit_value<F: Fn(f64) -> f64>(f: F, t: f64, p: &ParameterSet) -> Result<f64> {
    Ok(v_derivative_limit(f, t, p, &LimitConfig::default())?.value)
}

/// Every (draw, alpha, t) combination of the standard grid.
fn scalar_grid() -> Vec<(ParameterSet, f64)> {
    let mut out = Vec::new();
    for k in 0..PARAM_DRAWS.len() {
        for alpha in ALPHAS {
            for t in T_GRID {
                out.push((draw(k, alpha), t));
            }
        }
    }
    out
}

fn scalar_closed_form(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for s in SCALAR_CORPUS {
        for (p, x) in scalar_grid() {
            t.check((|| {
                let lim = limit_value(s.f, x, &p)?;
                let closed = v_derivative_closed(s.df, x, &p)?;
                Ok(rel1(lim, closed))
            })());
        }
    }
    t.finish("scalar_calculus", "limit equals C t^(1-alpha) f'(t)", 1e-6)
}

fn scalar_linearity(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let (lam, mu) = (2.5, -1.5);
    for w in SCALAR_CORPUS.windows(2) {
        let (f, g) = (w[0].f, w[1].f);
        for (p, x) in scalar_grid() {
            t.check((|| {
                let lhs = limit_value(|u| lam * f(u) + mu * g(u), x, &p)?;
                let rhs = lam * limit_value(f, x, &p)? + mu * limit_value(g, x, &p)?;
                Ok(rel1(lhs, rhs))
            })());
        }
    }
    t.finish("scalar_calculus", "linearity", 1e-6)
}

fn scalar_product(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for w in SCALAR_CORPUS.windows(2) {
        let (f, g) = (w[0].f, w[1].f);
        for (p, x) in scalar_grid() {
            t.check((|| {
                let lhs = limit_value(|u| f(u) * g(u), x, &p)?;
                let rhs = f(x) * limit_value(g, x, &p)? + g(x) * limit_value(f, x, &p)?;
                Ok(rel1(lhs, rhs))
            })());
        }
    }
    t.finish("scalar_calculus", "product rule", 1e-6)
}

fn scalar_quotient(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let denominators: [fn(f64) -> f64; 3] = [f64::exp, |u| 1.0 + u * u, |u| 2.0 + u.sin()];
    for s in SCALAR_CORPUS {
        for g in denominators {
            for (p, x) in scalar_grid() {
                t.check((|| {
                    let f = s.f;
                    let lhs = limit_value(|u| f(u) / g(u), x, &p)?;
                    let rhs = (g(x) * limit_value(f, x, &p)? - f(x) * limit_value(g, x, &p)?) / (g(x) * g(x));
                    Ok(rel1(lhs, rhs))
                })());
            }
        }
    }
    t.finish("scalar_calculus", "quotient rule", 1e-6)
}

fn scalar_constants(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for c in [-3.0, 0.0, 1.0, 1e3] {
        for (p, x) in scalar_grid() {
            t.check(limit_value(|_| c, x, &p).map(f64::abs));
        }
    }
    t.finish("scalar_calculus", "constants map to 0 (absolute)", 1e-10)
}

fn scalar_power_rule(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for (p, x) in scalar_grid() {
        for a in [-1.0, 0.5, 1.0, 2.0, p.alpha()] {
            t.check((|| Ok(rel(limit_value(|u| u.powf(a), x, &p)?, power_rule(a, x, &p)?)))());
        }
    }
    t.finish("scalar_calculus", "power rule", 1e-6)
}

fn scalar_chain_rule(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let outer: [(Scalar, Scalar); 3] =
        [(f64::sin, f64::cos), (f64::exp, f64::exp), (|u| u * u * u, |u| 3.0 * u * u)];
    for (f, df) in outer {
        for g in SCALAR_CORPUS {
            for (p, x) in scalar_grid() {
                t.check((|| {
                    let gf = g.f;
                    let direct = limit_value(|u| f(gf(u)), x, &p)?;
                    let via = chain_rule(df, gf, x, &p, &LimitConfig::default())?.value;
                    Ok(rel1(via, direct))
                })());
            }
        }
    }
    t.finish("scalar_calculus", "chain rule f'(g) V g", 1e-6)
}

fn scalar_truncation_independence(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for s in SCALAR_CORPUS {
        for (p, x) in scalar_grid() {
            t.check((|| {
                let reference = limit_value(s.f, x, &p.with_trunc(2))?;
                let mut worst = 0.0f64;
                for i in [1, 5, 20] {
                    worst = worst.max(rel1(limit_value(s.f, x, &p.with_trunc(i))?, reference));
                }
                Ok(worst)
            })());
        }
    }
    t.finish("scalar_calculus", "limit independent of trunc_i", 1e-8)
}

fn scalar_conformable(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for s in SCALAR_CORPUS {
        for alpha in ALPHAS {
            for x in T_GRID {
                t.check((|| {
                    let lim = limit_value(s.f, x, &unit(alpha, 1))?;
                    Ok(rel(lim, x.powf(1.0 - alpha) * (s.df)(x)))
                })());
            }
        }
    }
    t.finish("scalar_calculus", "conformable reduction", 1e-8)
}

fn scalar_alpha_one(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for s in SCALAR_CORPUS {
        for x in T_GRID {
            t.check(v_derivative_closed(s.df, x, &unit(1.0, 2)).map(|v| rel(v, (s.df)(x))));
        }
    }
    t.finish("scalar_calculus", "alpha = 1 gives the classical derivative", 0.0)
}

fn scalar_fundamental(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cases: [(Scalar, f64, f64, f64); 5] = [
        (f64::cos, 0.5, 1.7, 0.5),
        (f64::exp, 1.0, 2.0, 0.25),
        (|x| x * x + 1.0, 1e-3, 1.2, 0.75),
        (|x| 1.0 / (1.0 + x), 1e-3, 0.8, 0.3),
        (f64::ln, 0.2, 3.0, 1.0),
    ];
    for (k, (f, a, x, alpha)) in cases.into_iter().enumerate() {
        let p = draw(k % 3, alpha);
        t.check(
            fundamental_check(f, a, x, &p, &LimitConfig::default(), &QuadratureConfig::default())
                .map(|r| r.residual),
        );
    }
    t.finish("scalar_calculus", "V of the V-integral returns f", 1e-6)
}

// ---- multivariable ----

type MapFn = fn(&[f64]) -> Vec<f64>;

/// Vector maps with their input and output dimensions and base points.
pub const MAP_CORPUS: [(usize, usize, MapFn, [f64; 3]); 4] = [
    (2, 2, |x| vec![x[0] * x[1], x[0] + x[1]], [1.0, 2.0, 0.0]),
    (2, 2, |x| vec![x[0].sin() * x[1], (x[0] - x[1]).exp()], [0.7, 1.3, 0.0]),
    (3, 2, |x| vec![x[0] * x[1] * x[2], (x[0] + 2.0 * x[2]).ln()], [0.5, 1.5, 2.0]),
    (2, 3, |x| vec![x[0].powi(3), x[1].cos(), x[0] / x[1]], [1.8, 0.4, 0.0]),
];

fn corpus_point(n: usize, base: [f64; 3]) -> Point {
    Point::new(base[..n].to_vec()).expect("finite base point")
}

fn multi_factorization(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for (n, m, f, base) in MAP_CORPUS {
        for alpha in ALPHAS {
            for k in 0..PARAM_DRAWS.len() {
                let p = draw(k, alpha);
                t.check((|| {
                    let map = vector_map(n, m, f);
                    let a = corpus_point(n, base);
                    let vj = v_jacobian(&map, &a, &p, &LimitConfig::default(), mode)?;
                    let fact = jacobian_factorized(&map, &a, &p)?;
                    Ok(matrix_gap(&vj.entries, &fact))
                })());
            }
        }
    }
    t.finish("multivariable", "V-Jacobian = classical Jacobian x diag(C a^(1-alpha))", 1e-6)
}

/// Least-squares slope of `ln r` against `ln ‖ε‖`.
pub fn log_log_slope(norms: &[f64], residuals: &[f64]) -> f64 {
    let xs: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub const DECAY_NORMS: [f64; 5] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

fn unit_direction(n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|k| 1.0 + 0.5 * k as f64).collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    raw.into_iter().map(|v| v / norm).collect()
}

fn multi_residual_decay(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for (n, m, f, base) in MAP_CORPUS {
        for alpha in [0.3, 0.8] {
            let p = draw(0, alpha);
            t.check((|| {
                let map = vector_map(n, m, f);
                let a = corpus_point(n, base);
                let l = v_jacobian(&map, &a, &p, &LimitConfig::default(), mode)?.as_linear_map();
                let dir = unit_direction(n);
                let res = DECAY_NORMS
                    .iter()
                    .map(|&s| {
                        let eps: Vec<f64> = dir.iter().map(|d| d * s).collect();
                        linear_map_residual(&map, &a, &l, &p, &eps)
                    })
                    .collect::<Result<Vec<_>>>()?;
                // report the shortfall below slope 1
                Ok(1.0 - log_log_slope(&DECAY_NORMS, &res))
            })());
        }
    }
    t.finish("multivariable", "residual decays linearly (1 - slope)", 0.1)
}

fn multi_uniqueness(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for (n, m, f, base) in MAP_CORPUS {
        let p = draw(1, 0.6);
        for (row, col, size) in [(0, 0, 1e-3), (m - 1, n - 1, -5e-3), (0, n - 1, 0.1)] {
            t.check((|| {
                let map = vector_map(n, m, f);
                let a = corpus_point(n, base);
                let l = v_jacobian(&map, &a, &p, &LimitConfig::default(), mode)?.as_linear_map();
                let mut e = DMatrix::zeros(m, n);
                e[(row, col)] = size;
                let perturbed = LinearMap::new(l.matrix + &e)?;
                let mut eps = vec![0.0; n];
                eps[col] = 1e-7;
                let r = linear_map_residual(&map, &a, &perturbed, &p, &eps)?;
                // ratio ‖E‖ / (2 r) must stay below 1
                Ok(e.norm() / (2.0 * r))
            })());
        }
    }
    t.finish("multivariable", "perturbed candidates do not decay (norm(E) / 2r)", 1.0)
}

fn multi_linearity_product(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cfg = LimitConfig::default();
    let f = |x: &[f64]| x[0] * x[1].sin();
    let g = |x: &[f64]| (x[0] + x[1] * x[1]).exp();
    for alpha in [0.3, 0.7, 1.0] {
        let p = draw(2, alpha);
        t.check((|| {
            let a = Point::new(vec![0.8, 1.4])?;
            let jf = v_jacobian(&scalar_field(2, f), &a, &p, &cfg, mode)?.entries;
            let jg = v_jacobian(&scalar_field(2, g), &a, &p, &cfg, mode)?.entries;
            let comb = v_jacobian(&scalar_field(2, |x| 2.0 * f(x) - 0.5 * g(x)), &a, &p, &cfg, mode)?.entries;
            let prod = v_jacobian(&scalar_field(2, |x| f(x) * g(x)), &a, &p, &cfg, mode)?.entries;
            let lin = &jf * 2.0 - &jg * 0.5;
            let pr = &jg * f(a.coords()) + &jf * g(a.coords());
            let mut worst = 0.0f64;
            for k in 0..2 {
                worst = worst.max(rel(comb[k], lin[k])).max(rel(prod[k], pr[k]));
            }
            Ok(worst)
        })());
    }
    t.finish("multivariable", "linearity and product rule", 1e-6)
}

fn multi_scalar_consistency(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    for s in SCALAR_CORPUS {
        for (p, x) in scalar_grid() {
            t.check((|| {
                let f = s.f;
                let field = scalar_field(1, move |v: &[f64]| f(v[0]));
                let multi = v_partial(&field, &Point::new(vec![x])?, 0, &p, &LimitConfig::default())?.value;
                let single = limit_value(f, x, &p)?;
                Ok((multi - single).abs())
            })());
        }
    }
    t.finish("multivariable", "n = m = 1 matches the scalar limit", 0.0)
}

fn multi_chain_rule(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cfg = LimitConfig::default();
    let inner = |x: &[f64]| vec![x[0] * x[1] + 0.5, x[0] + x[1] * x[1]];
    let outer = |y: &[f64]| vec![y[0].sin() * y[1], (y[0] - 0.3 * y[1]).exp()];
    for alpha in [0.25, 0.6, 1.0] {
        for k in 0..PARAM_DRAWS.len() {
            let p = draw(k, alpha);
            t.check((|| {
                let a = Point::new(vec![0.9, 1.1])?;
                let f = vector_map(2, 2, inner);
                let g = vector_map(2, 2, outer);
                let via = chain_rule_multi(&g, &f, &a, &p, &cfg, mode)?;
                let composite = vector_map(2, 2, |x: &[f64]| outer(&inner(x)));
                let direct = v_jacobian(&composite, &a, &p, &cfg, mode)?.entries;
                Ok(via.iter().zip(direct.iter()).map(|(u, v)| rel(*u, *v)).fold(0.0, f64::max))
            })());
        }
    }
    t.finish("multivariable", "chain rule J_g(f(a)) V_f(a)", 1e-6)
}

// ---- vector fields ----

/// Planar test fields with their classical mixed partials.
pub struct MixedSample {
    pub name: &'static str,
    pub f: fn(f64, f64) -> f64,
    pub f_ts: fn(f64, f64) -> f64,
}

pub const MIXED_CORPUS: [MixedSample; 4] = [
    MixedSample { name: "t^2 s^3", f: |t, s| t * t * s.powi(3), f_ts: |t, s| 6.0 * t * s * s },
    MixedSample { name: "t s^2 + t^3 s", f: |t, s| t * s * s + t.powi(3) * s, f_ts: |t, s| 2.0 * s + 3.0 * t * t },
    MixedSample {
        name: "exp(0.5(t+s))",
        f: |t, s| (0.5 * (t + s)).exp(),
        f_ts: |t, s| 0.25 * (0.5 * (t + s)).exp(),
    },
    MixedSample { name: "sin t cos s", f: |t, s| t.sin() * s.cos(), f_ts: |t, s| -t.cos() * s.sin() },
];

pub const MIXED_ORDERS: [f64; 3] = [0.3, 0.7, 1.0];

fn mixed_grid() -> Vec<(f64, f64, MixedOrders)> {
    let mut out = Vec::new();
    for t in T_GRID {
        for s in T_GRID {
            for a in MIXED_ORDERS {
                for k in MIXED_ORDERS {
                    out.push((t, s, MixedOrders::new(a, k).expect("orders in (0,1]")));
                }
            }
        }
    }
    out
}

fn field_mixed_closed(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let p = draw(0, 0.5);
    for sample in MIXED_CORPUS {
        for (x, y, o) in mixed_grid() {
            for nesting in [Nesting::SThenT, Nesting::TThenS] {
                t.check((|| {
                    let lim = mixed_partial_limit(&sample.f, x, y, o, nesting, &p, &LimitConfig::default())?;
                    let closed = mixed_partial_closed(sample.f_ts, x, y, o, &p)?;
                    Ok(rel(lim.value, closed))
                })());
            }
        }
    }
    t.finish("vector_field", "nested limits match C^2 s^(1-kappa) t^(1-alpha) f_ts", 1e-4)
}

fn field_commutation(_: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let p = draw(1, 0.5);
    for sample in MIXED_CORPUS {
        for (x, y, o) in mixed_grid() {
            t.check(
                commutativity_check(&sample.f, x, y, o, &p, &LimitConfig::default())
                    .map(|(r, v)| r / (1.0 + v.abs())),
            );
        }
    }
    t.finish("vector_field", "mixed partials commute", 1e-4)
}

/// `(f, g)` selector pairs for the Green identity.
pub const GREEN_PAIRS: [(&str, &str); 5] = [
    ("poly2:xy", "poly2:x2"),
    ("const:0", "x:poly:0,1"),
    ("expsum:0.3", "poly2:xy2"),
    ("poly2:x2y+y3", "x:expsum:-0.4"),
    ("y:exp", "poly2:2x3y+x"),
];

pub const GREEN_RECTS: [[f64; 4]; 3] = [[1.0, 2.0, 1.0, 3.0], [0.5, 1.5, 2.0, 2.5], [0.2, 1.0, 0.3, 0.9]];

fn planar(sel: &str) -> PlanarField {
    PlanarField::parse(sel).expect("registered selector")
}

fn rect(r: [f64; 4]) -> Result<Region2D> {
    Region2D::rect(r[0], r[1], r[2], r[3])
}

fn field_green(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cfg = QuadratureConfig::default();
    for (fs, gs) in GREEN_PAIRS {
        let (f, g) = (planar(fs), planar(gs));
        for r in GREEN_RECTS {
            for alpha in ALPHAS {
                for p in [unit(alpha, 2), draw(0, alpha)] {
                    t.check((|| {
                        let rep = green_check(&f, &g, &rect(r)?, &p, &cfg, mode)?;
                        Ok((rep.residual / (1.0 + rep.lhs.abs())).max(rep.form_gap / (1.0 + rep.lhs.abs())))
                    })());
                }
            }
        }
    }
    t.finish("vector_field", "Green identity on rectangles", 1e-6)
}

fn field_green_additivity(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cfg = QuadratureConfig::default();
    for (fs, gs) in GREEN_PAIRS {
        let (f, g) = (planar(fs), planar(gs));
        for r in GREEN_RECTS {
            for alpha in ALPHAS {
                let p = unit(alpha, 2);
                t.check((|| {
                    let mid = 0.5 * (r[0] + r[1]);
                    let (whole, left, right) = (rect(r)?, rect([r[0], mid, r[2], r[3]])?, rect([mid, r[1], r[2], r[3]])?);
                    let lhs = |d: &Region2D| green_lhs(&f, &g, d, &p, GreenForm::Simplified, &cfg, mode).map(|q| q.value);
                    let rhs = |d: &Region2D| green_rhs(&f, &g, &d.boundary(), &p, &cfg, mode).map(|q| q.value);
                    let area_gap = (lhs(&whole)? - lhs(&left)? - lhs(&right)?).abs();
                    let edge_gap = (rhs(&whole)? - rhs(&left)? - rhs(&right)?).abs();
                    Ok(area_gap.max(edge_gap))
                })());
            }
        }
    }
    t.finish("vector_field", "area side additive, shared edge cancels", 1e-6)
}

fn field_green_orientation(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cfg = QuadratureConfig::default();
    for (fs, gs) in GREEN_PAIRS {
        let (f, g) = (planar(fs), planar(gs));
        for r in GREEN_RECTS {
            for alpha in ALPHAS {
                let p = draw(2, alpha);
                t.check((|| {
                    let curve = rect(r)?.boundary();
                    let fwd = green_rhs(&f, &g, &curve, &p, &cfg, mode)?.value;
                    let back = green_rhs(&f, &g, &curve.reversed(), &p, &cfg, mode)?.value;
                    Ok((fwd + back).abs())
                })());
            }
        }
    }
    t.finish("vector_field", "reversing the boundary negates the line integral", 1e-10)
}

fn field_green_classical(mode: Exec) -> PropertyOutcome {
    let mut t = Tally::new();
    let cfg = QuadratureConfig::default();
    for (fs, gs) in GREEN_PAIRS {
        let (f, g) = (planar(fs), planar(gs));
        for r in GREEN_RECTS {
            t.check(rect(r).and_then(|d| green_check(&f, &g, &d, &unit(1.0, 2), &cfg, mode)).map(|rep| rep.residual));
        }
    }
    t.finish("vector_field", "alpha = 1 reduces to classical Green", 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn slope_of_a_line() {
        let r: Vec<f64> = DECAY_NORMS.iter().map(|e| 3.0 * e).collect();
        assert!((log_log_slope(&DECAY_NORMS, &r) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tally_reports_errors() {
        let mut t = Tally::new();
        t.record(0.5);
        t.check(Err(Error::Domain("x".into())));
        let out = t.finish("m", "n", 1.0);
        assert!(!out.pass);
        assert_eq!(out.cases, 2);
        assert!(out.error.unwrap().starts_with("DomainError"));
    }
}
