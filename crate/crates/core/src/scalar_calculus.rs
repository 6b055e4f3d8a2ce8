//! One-variable truncated V-fractional derivative and integral.
//!
//! Scalar maps are plain `Fn(f64) -> f64 + Sync` closures. They must be pure
//! and finite on `t > 0`; an α-differentiable map is assumed continuous at
//! the evaluation point, and nothing here checks that hypothesis.
//!
//! Two derivative evaluators are provided:
//! - [`v_derivative_limit`] samples `[f(t·H(ε t^{-α})) - f(t)] / ε` on an `ε`
//!   ladder and extrapolates. The probe point is `t · H(·)` as written; it is
//!   multiplicative in `t` and is not replaced by a first-order expansion.
//! - [`v_derivative_closed`] evaluates `C · t^{1-α} · f'(t)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::finite_diff;
use crate::limit::{self, LimitEstimate};
use crate::quadrature::{integrate_weighted, Interval, QuadEstimate, QuadratureConfig};
use crate::special_functions::{coefficient_c, coefficient_c_real, expect_real, ParameterSet, TruncatedSeries};

pub use crate::limit::LimitConfig;

/// Maps a base coordinate and an `ε` to the perturbed coordinate `a · H(ε a^{-α})`.
#[derive(Debug, Clone)]
pub struct Prober {
    series: TruncatedSeries,
    alpha: f64,
}

impl Prober {
    pub fn new(params: &ParameterSet) -> Result<Self> {
        params.require_derivative_ready()?;
        Ok(Prober { series: TruncatedSeries::new(params)?, alpha: params.alpha() })
    }

    pub fn probe(&self, base: f64, eps: f64) -> Result<f64> {
        let z = eps * base.powf(-self.alpha);
        let h = expect_real(self.series.h(Complex64::new(z, 0.0))?)?;
        let x = base * h;
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain(format!("probe point {x} leaves t > 0")));
        }
        Ok(x)
    }
}

pub(crate) fn require_positive(name: &str, t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("{name} = {t} must be > 0")));
    }
    Ok(())
}

pub(crate) fn finite_value(v: f64, at: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::Domain(format!("map is not finite at {at}")));
    }
    Ok(v)
}

/// Limit-quotient V-derivative of `f` at `t`.
pub fn v_derivative_limit<F>(f: F, t: f64, params: &ParameterSet, cfg: &LimitConfig) -> Result<LimitEstimate>
where
    F: Fn(f64) -> f64,
{
    require_positive("t", t)?;
    let prober = Prober::new(params)?;
    let f0 = finite_value(f(t), t)?;
    limit::extrapolate(cfg, |eps| {
        let x = prober.probe(t, eps)?;
        Ok((finite_value(f(x), x)? - f0) / eps)
    })
}

/// [`v_derivative_limit`] over a grid of points, in grid order.
pub fn v_derivative_limit_grid<F>(
    f: F,
    ts: &[f64],
    params: &ParameterSet,
    cfg: &LimitConfig,
    mode: Exec,
) -> Vec<Result<LimitEstimate>>
where
    F: Fn(f64) -> f64 + Sync,
{
    exec::map(mode, ts, |&t| v_derivative_limit(&f, t, params, cfg))
}

/// `C · t^{1-α} · f'(t)` with a complex `C`.
pub fn v_derivative_closed_complex<D>(f_prime: D, t: f64, params: &ParameterSet) -> Result<Complex64>
where
    D: Fn(f64) -> f64,
{
    require_positive("t", t)?;
    let c = coefficient_c(params)?;
    Ok(c * (t.powf(1.0 - params.alpha()) * f_prime(t)))
}

/// `C · t^{1-α} · f'(t)`; errors when `C` is not real.
pub fn v_derivative_closed<D>(f_prime: D, t: f64, params: &ParameterSet) -> Result<f64>
where
    D: Fn(f64) -> f64,
{
    require_positive("t", t)?;
    let c = coefficient_c_real(params)?;
    Ok(c * t.powf(1.0 - params.alpha()) * f_prime(t))
}

/// Closed form with `f'` replaced by a fourth-order central difference at
/// step `t · 1e-6`.
pub fn v_derivative_numeric<F>(f: F, t: f64, params: &ParameterSet) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    require_positive("t", t)?;
    let h = t * finite_diff::RELATIVE_STEP;
    if t - 2.0 * h <= 0.0 {
        return Err(Error::Domain("difference stencil leaves t > 0".into()));
    }
    let d = finite_diff::central4(&f, t, h);
    if !d.is_finite() {
        return Err(Error::Domain(format!("map is not finite near {t}")));
    }
    v_derivative_closed(|_| d, t, params)
}

/// V-derivative of `t^a`: `C · a · t^{a-α}`.
pub fn power_rule(exponent: f64, t: f64, params: &ParameterSet) -> Result<f64> {
    require_positive("t", t)?;
    let c = coefficient_c_real(params)?;
    Ok(c * exponent * t.powf(exponent - params.alpha()))
}

/// `f'(g(t)) · V g(t)`.
pub fn chain_rule<D, G>(
    f_prime: D,
    g: G,
    t: f64,
    params: &ParameterSet,
    cfg: &LimitConfig,
) -> Result<LimitEstimate>
where
    D: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let inner = v_derivative_limit(&g, t, params, cfg)?;
    let outer = f_prime(g(t));
    Ok(LimitEstimate { value: outer * inner.value, error: outer.abs() * inner.error })
}

/// `(1/C) ∫_a^t f(x) x^{α-1} dx`.
pub fn v_integral<F>(f: F, a: f64, t: f64, params: &ParameterSet, cfg: &QuadratureConfig) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::Domain(format!("lower limit a = {a} must be >= 0")));
    }
    let c = coefficient_c_real(params)?;
    let raw = integrate_weighted(f, Interval::new(a, t)?, params.alpha(), cfg)?;
    Ok(QuadEstimate { value: raw.value / c, error: raw.error / c.abs(), ..raw })
}

/// Outcome of differentiating an indefinite V-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalResidual {
    /// `V F(t)` with `F(s) = I_a f(s)`.
    pub derivative: f64,
    /// `f(t)`.
    pub target: f64,
    pub residual: f64,
}

/// `|V F(t) - f(t)|` where `F(s)` is the V-integral of `f` from `a` to `s`.
///
/// The quotient numerator `F(t·H) - F(t)` is integrated directly over
/// `[t, t·H]` rather than as a difference of two integrals from `a`, so it
/// keeps full relative accuracy as `ε` shrinks.
pub fn fundamental_check<F>(
    f: F,
    a: f64,
    t: f64,
    params: &ParameterSet,
    limit_cfg: &LimitConfig,
    quad_cfg: &QuadratureConfig,
) -> Result<FundamentalResidual>
where
    F: Fn(f64) -> f64 + Sync,
{
    require_positive("a", a)?;
    if t <= a {
        return Err(Error::Domain(format!("t = {t} must exceed a = {a}")));
    }
    let target = finite_value(f(t), t)?;
    // F itself must exist on [a, t]
    v_integral(&f, a, t, params, quad_cfg)?;
    let prober = Prober::new(params)?;
    let d = limit::extrapolate(limit_cfg, |eps| {
        let x = prober.probe(t, eps)?;
        let delta = if x > t {
            v_integral(&f, t, x, params, quad_cfg)?.value
        } else if x < t {
            -v_integral(&f, x, t, params, quad_cfg)?.value
        } else {
            0.0
        };
        Ok(delta / eps)
    })?;
    Ok(FundamentalResidual { derivative: d.value, target, residual: (d.value - target).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(alpha: f64, trunc: usize) -> ParameterSet {
        ParameterSet::unit(alpha, trunc).unwrap()
    }

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    #[test]
    fn constant_maps_to_zero() {
        let p = ParameterSet::real(0.7, 1.3, 2.1, 0.9, 1.1, 0.8, 4, 0.4).unwrap();
        for t in [0.3, 1.0, 5.0] {
            let d = v_derivative_limit(|_| 3.5, t, &p, &cfg()).unwrap();
            assert_eq!(d.value, 0.0);
        }
    }

    #[test]
    fn square_at_one() {
        let d = v_derivative_limit(|t| t * t, 1.0, &unit(0.5, 2), &cfg()).unwrap();
        assert!((d.value - 2.0).abs() < 1e-10, "{d:?}");
        // single small ε quotients approach the same value
        let prober = Prober::new(&unit(0.5, 2)).unwrap();
        for eps in [1e-6, 1e-7] {
            let x = prober.probe(1.0, eps).unwrap();
            let q = (x * x - 1.0) / eps;
            assert!((q - 2.0).abs() < 1e-5);
        }
    }

    #[test]
    fn power_alpha_is_constant_in_t() {
        let p = ParameterSet::real(1.2, 0.8, 1.5, 2.0, 0.9, 1.4, 3, 0.35).unwrap();
        let c = coefficient_c_real(&p).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let d = v_derivative_limit(|x: f64| x.powf(0.35), t, &p, &cfg()).unwrap();
            assert!((d.value - c * 0.35).abs() < 1e-9 * c, "t {t}: {d:?}");
        }
    }

    #[test]
    fn non_positive_t_is_a_domain_error() {
        for t in [0.0, -1.0, f64::NAN] {
            let err = v_derivative_limit(|x| x, t, &unit(0.5, 2), &cfg()).unwrap_err();
            assert_eq!(err.kind(), "DomainError");
        }
    }

    #[test]
    fn trunc_zero_is_rejected() {
        let err = v_derivative_limit(|x| x, 1.0, &unit(0.5, 0), &cfg()).unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(_)));
    }

    #[test]
    fn map_leaving_its_domain_is_a_domain_error() {
        // ln(1 - t) is undefined for t >= 1; probes to the right of 0.9999999 exit
        let err = v_derivative_limit(|t: f64| (1.0 - t).ln(), 0.999_999_9, &unit(0.5, 2), &cfg());
        assert_eq!(err.unwrap_err().kind(), "DomainError");
    }

    #[test]
    fn closed_form_examples() {
        let a: f64 = 1.7;
        let p = unit(0.4, 2);
        let v = v_derivative_closed(f64::cos, a, &p).unwrap();
        assert!((v - a.powf(0.6) * a.cos()).abs() < 1e-15);
        let v = v_derivative_closed(f64::exp, a, &p).unwrap();
        assert!((v - a.powf(0.6) * a.exp()).abs() < 1e-14);
        assert_eq!(v_derivative_closed(|_| 0.0, a, &p).unwrap(), 0.0);
    }

    #[test]
    fn complex_closed_form() {
        let p = ParameterSet::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.4),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            1.0,
            1.0,
            2,
            0.5,
        )
        .unwrap();
        let z = v_derivative_closed_complex(|_| 1.0, 4.0, &p).unwrap();
        let c = coefficient_c(&p).unwrap();
        assert!((z - c * 2.0).norm() < 1e-14);
        assert!(matches!(v_derivative_closed(|_| 1.0, 4.0, &p), Err(Error::NonReal { .. })));
        assert!(matches!(v_derivative_limit(|t| t, 4.0, &p, &cfg()), Err(Error::NonReal { .. })));
    }

    #[test]
    fn numeric_examples() {
        let v = v_derivative_numeric(|t| t * t * t, 2.0, &unit(1.0, 2)).unwrap();
        assert!((v - 12.0).abs() < 1e-8);
        let p = unit(0.3, 2);
        let v = v_derivative_numeric(f64::sin, 1.0, &p).unwrap();
        let closed = v_derivative_closed(f64::cos, 1.0, &p).unwrap();
        assert!((v - closed).abs() < 1e-9);
        let p = unit(0.5, 2);
        let v = v_derivative_numeric(f64::ln, 0.5, &p).unwrap();
        assert!((v - 0.5f64.sqrt() * 2.0).abs() < 1e-8);
        assert!(v_derivative_numeric(f64::ln, 0.0, &p).is_err());
    }

    #[test]
    fn power_rule_examples() {
        let p = unit(0.5, 2);
        assert_eq!(power_rule(0.0, 3.0, &p).unwrap(), 0.0);
        assert!((power_rule(2.0, 1.0, &p).unwrap() - 2.0).abs() < 1e-15);
        let v = power_rule(0.5, 7.0, &p).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chain_rule_examples() {
        let p = unit(0.5, 2);
        // f = identity
        let g = |t: f64| t.sin() + 2.0;
        let a = chain_rule(|_| 1.0, g, 1.3, &p, &cfg()).unwrap();
        let b = v_derivative_limit(g, 1.3, &p, &cfg()).unwrap();
        assert_eq!(a.value, b.value);
        // g = identity
        let a = chain_rule(f64::cos, |t| t, 0.8, &p, &cfg()).unwrap();
        let expect = 0.8f64.cos() * power_rule(1.0, 0.8, &p).unwrap();
        assert!((a.value - expect).abs() < 1e-10);
        // f(u) = u², g(t) = t at t = 2
        let a = chain_rule(|u| 2.0 * u, |t| t, 2.0, &p, &cfg()).unwrap();
        let direct = v_derivative_limit(|t| t * t, 2.0, &p, &cfg()).unwrap();
        assert!((a.value - 2.0 * 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((a.value - direct.value).abs() < 1e-9);
    }

    #[test]
    fn v_integral_examples() {
        let q = QuadratureConfig::default();
        let p = ParameterSet::real(1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2, 0.6).unwrap();
        let c = coefficient_c_real(&p).unwrap();
        let v = v_integral(|x: f64| x.powf(0.4), 0.0, 1.0, &p, &q).unwrap();
        assert!((v.value - 1.0 / c).abs() < 1e-12);
        assert_eq!(v_integral(|_| 0.0, 0.0, 1.0, &p, &q).unwrap().value, 0.0);
        let v = v_integral(f64::exp, 1.0, 1.0 + 1e-8, &p, &q).unwrap();
        assert!(v.value.abs() < 1e-6);
        assert!(v_integral(|x| x, -1.0, 1.0, &p, &q).is_err());
    }

    #[test]
    fn fundamental_examples() {
        let q = QuadratureConfig::default();
        let r = fundamental_check(|_| 1.0, 1.0, 2.0, &unit(0.5, 2), &cfg(), &q).unwrap();
        assert!(r.residual < 1e-6, "{r:?}");
        let r = fundamental_check(|x| x, 1.0, 2.0, &unit(1.0, 2), &cfg(), &q).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
        let r = fundamental_check(f64::sin, 0.5, 1.5, &unit(0.7, 2), &cfg(), &q).unwrap();
        assert!(r.residual < 1e-6, "{r:?}");
    }

    #[test]
    fn grid_matches_pointwise() {
        let p = unit(0.5, 3);
        let ts = [0.5, 1.0, 1.5, 2.0];
        let grid = v_derivative_limit_grid(f64::exp, &ts, &p, &cfg(), Exec::Auto);
        for (t, g) in ts.iter().zip(grid) {
            assert_eq!(g.unwrap(), v_derivative_limit(f64::exp, *t, &p, &cfg()).unwrap());
        }
    }
}
