use crate::error::{Error, Result};
use crate::limit::{self, LimitConfig, LimitEstimate};
use crate::scalar_calculus::{finite_value, require_positive, Prober};
use crate::special_functions::{coefficient_c_real, ParameterSet};

use super::Field2;

/// Orders of the `t`-partial (`alpha`) and the `s`-partial (`kappa`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedOrders {
    alpha: f64,
    kappa: f64,
}

impl MixedOrders {
    pub fn new(alpha: f64, kappa: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("kappa", kappa)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameters(format!("{name} in (0,1] violated")));
            }
        }
        Ok(MixedOrders { alpha, kappa })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Which partial is taken first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nesting {
    /// `∂^α_t (∂^κ_s f)`: inner partial in `s`.
    SThenT,
    /// `∂^κ_s (∂^α_t f)`: inner partial in `t`.
    TThenS,
}

/// V-partial along one coordinate of a two-variable function `g(coord)`,
/// holding the other coordinate fixed inside `g`. Returns the estimate and
/// its absolute noise level: the extrapolation error, or the rounding error
/// of `g` divided by the smallest `ε`, whichever is larger.
fn partial_1d<G>(g: G, at: f64, prober: &Prober, cfg: &LimitConfig) -> Result<(LimitEstimate, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    let g0 = g(at)?;
    let est = limit::extrapolate(cfg, |eps| Ok((g(prober.probe(at, eps)?)? - g0) / eps))?;
    let eps_min = cfg.ladder().last().unwrap_or(cfg.eps_base);
    let rounding = 2.0 * f64::EPSILON * g0.abs().max(f64::MIN_POSITIVE) / eps_min;
    Ok((est, est.error.max(rounding)))
}

/// Outer partial of a nested limit: the inner values are noisy, and that
/// noise divided by `ε` is carried into the tableau.
fn outer_partial<G>(inner: G, at: f64, prober: &Prober, cfg: &LimitConfig) -> Result<LimitEstimate>
where
    G: Fn(f64) -> Result<(LimitEstimate, f64)>,
{
    let (v0, n0) = inner(at)?;
    limit::extrapolate_noisy(cfg, |eps| {
        let (v, n) = inner(prober.probe(at, eps)?)?;
        Ok(((v.value - v0.value) / eps, (n + n0) / eps))
    })
}

/// Nested limit evaluation of a mixed V-partial. The inner partial runs on
/// a ladder two levels deeper than `cfg`.
pub fn mixed_partial_limit<F: Field2 + ?Sized>(
    f: &F,
    t: f64,
    s: f64,
    orders: MixedOrders,
    nesting: Nesting,
    params: &ParameterSet,
    cfg: &LimitConfig,
) -> Result<LimitEstimate> {
    require_positive("t", t)?;
    require_positive("s", s)?;
    let t_probe = Prober::new(&params.with_alpha(orders.alpha)?)?;
    let s_probe = Prober::new(&params.with_alpha(orders.kappa)?)?;
    let inner_cfg = cfg.deeper(2);
    let value = |x: f64, y: f64| finite_value(f.eval(x, y), x);
    match nesting {
        Nesting::SThenT => {
            let inner = |tt: f64| partial_1d(|ss| value(tt, ss), s, &s_probe, &inner_cfg);
            outer_partial(inner, t, &t_probe, cfg)
        }
        Nesting::TThenS => {
            let inner = |ss: f64| partial_1d(|tt| value(tt, ss), t, &t_probe, &inner_cfg);
            outer_partial(inner, s, &s_probe, cfg)
        }
    }
}

/// `C² · s^{1-κ} · t^{1-α} · f_ts(t, s)` given the classical mixed partial.
pub fn mixed_partial_closed<G>(f_ts: G, t: f64, s: f64, orders: MixedOrders, params: &ParameterSet) -> Result<f64>
where
    G: Fn(f64, f64) -> f64,
{
    require_positive("t", t)?;
    require_positive("s", s)?;
    let c = coefficient_c_real(params)?;
    Ok(c * c * s.powf(1.0 - orders.kappa) * t.powf(1.0 - orders.alpha) * f_ts(t, s))
}

/// `|∂^α_t ∂^κ_s f − ∂^κ_s ∂^α_t f|`, both sides by nested limits. Returns
/// the residual and the `SThenT` value.
pub fn commutativity_check<F: Field2 + ?Sized>(
    f: &F,
    t: f64,
    s: f64,
    orders: MixedOrders,
    params: &ParameterSet,
    cfg: &LimitConfig,
) -> Result<(f64, f64)> {
    let ts = mixed_partial_limit(f, t, s, orders, Nesting::SThenT, params, cfg)?;
    let st = mixed_partial_limit(f, t, s, orders, Nesting::TThenS, params, cfg)?;
    Ok(((ts.value - st.value).abs(), ts.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    #[test]
    fn additive_field_has_zero_mixed_partial() {
        let p = ParameterSet::unit(0.5, 2).unwrap();
        let o = MixedOrders::new(0.5, 0.5).unwrap();
        let v = mixed_partial_limit(&|t: f64, s: f64| t + s, 1.0, 1.0, o, Nesting::SThenT, &p, &cfg()).unwrap();
        // the inner partial is constant in t up to rounding
        assert!(v.value.abs() < 1e-8, "{v:?}");
        let (r, _) = commutativity_check(&|t: f64, s: f64| t + s, 1.0, 1.0, o, &p, &cfg()).unwrap();
        assert!(r < 1e-8);
    }

    #[test]
    fn product_examples() {
        let p = ParameterSet::unit(0.5, 2).unwrap();
        let o = MixedOrders::new(0.5, 0.5).unwrap();
        let v = mixed_partial_limit(&|t: f64, s: f64| t * s, 1.0, 1.0, o, Nesting::SThenT, &p, &cfg()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-8, "{v:?}");
        assert!((mixed_partial_closed(|_, _| 1.0, 4.0, 9.0, o, &p).unwrap() - 6.0).abs() < 1e-14);
        let v = mixed_partial_limit(&|t: f64, s: f64| t * s, 4.0, 9.0, o, Nesting::TThenS, &p, &cfg()).unwrap();
        assert!((v.value - 6.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn exponential_example_both_orders() {
        let a = 0.5;
        let p = ParameterSet::real(1.2, 0.8, 1.5, 1.1, 1.0, 1.0, 3, 0.5).unwrap();
        let o = MixedOrders::new(0.3, 0.7).unwrap();
        let f = move |t: f64, s: f64| (a * (t + s)).exp();
        let (t, s) = (1.0, 1.0);
        let expect = mixed_partial_closed(|t, s| a * a * (a * (t + s)).exp(), t, s, o, &p).unwrap();
        for n in [Nesting::SThenT, Nesting::TThenS] {
            let v = mixed_partial_limit(&f, t, s, o, n, &p, &cfg()).unwrap();
            assert!(((v.value - expect) / expect).abs() < 1e-4, "{n:?} {v:?} {expect}");
        }
        let (r, v) = commutativity_check(&f, t, s, o, &p, &cfg()).unwrap();
        assert!(r <= 1e-4 * (1.0 + v.abs()));
    }

    #[test]
    fn polynomial_commutes() {
        let p = ParameterSet::unit(0.5, 2).unwrap();
        let o = MixedOrders::new(0.5, 0.5).unwrap();
        let f = |t: f64, s: f64| t * t * s.powi(3);
        let expect = mixed_partial_closed(|t, s| 6.0 * t * s * s, 1.0, 2.0, o, &p).unwrap();
        let (r, v) = commutativity_check(&f, 1.0, 2.0, o, &p, &cfg()).unwrap();
        assert!(r <= 1e-4 * (1.0 + v.abs()));
        assert!(((v - expect) / expect).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MixedOrders::new(0.0, 0.5).is_err());
        assert!(MixedOrders::new(0.5, 1.5).is_err());
        let p = ParameterSet::unit(0.5, 2).unwrap();
        let o = MixedOrders::new(0.5, 0.5).unwrap();
        let err = mixed_partial_limit(&|t: f64, s: f64| t * s, 0.0, 1.0, o, Nesting::SThenT, &p, &cfg()).unwrap_err();
        assert_eq!(err.kind(), "DomainError");
    }
}
