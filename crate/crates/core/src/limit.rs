//! Discretized `ε → 0` limits.
//!
//! A difference quotient `Q(ε)` is sampled on the geometric ladder
//! `ε_j = eps_base · 2^{-j}` and extrapolated with a Richardson tableau that
//! assumes an error expansion in integer powers of `ε`. This holds for the
//! quotients used here because `H` is a polynomial and the sampled maps are
//! smooth.

use crate::error::{Error, Result};

/// Ladder and extrapolation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConfig {
    pub eps_base: f64,
    pub eps_levels: usize,
    pub richardson_order: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { eps_base: 1e-2, eps_levels: 8, richardson_order: 7 }
    }
}

/// Drift between the last extrapolant and the selected one, relative to the
/// selected error estimate, above which the limit is declared unstable.
pub const DRIFT_FACTOR: f64 = 1e3;
/// Largest error estimate, relative to the quotient scale, accepted as a limit.
pub const MAX_RELATIVE_ERROR: f64 = 1e-4;
/// Relative noise level below which drift is not held against the estimate.
const ROUNDING_FLOOR: f64 = 1e-11;
/// Bound on how much the tableau can amplify sample noise.
const NOISE_AMPLIFICATION: f64 = 10.0;

impl LimitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_base > 0.0 && self.eps_base <= 1e-2) {
            return Err(Error::InvalidConfig("eps_base must lie in (0, 1e-2]".into()));
        }
        if self.eps_levels < 2 {
            return Err(Error::InvalidConfig("eps_levels must be at least 2".into()));
        }
        Ok(())
    }

    /// The same ladder extended by `extra` levels, with the order raised to match.
    pub fn deeper(&self, extra: usize) -> LimitConfig {
        LimitConfig {
            eps_base: self.eps_base,
            eps_levels: self.eps_levels + extra,
            richardson_order: self.richardson_order + extra,
        }
    }

    pub fn ladder(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.eps_levels).map(move |j| self.eps_base * 0.5f64.powi(j as i32))
    }
}

/// An extrapolated limit with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    pub error: f64,
}

/// Extrapolate a scalar quotient to `ε = 0`.
pub fn extrapolate<Q>(cfg: &LimitConfig, mut quotient: Q) -> Result<LimitEstimate>
where
    Q: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let samples = cfg.ladder().map(&mut quotient).collect::<Result<Vec<_>>>()?;
    tableau(&samples, cfg.richardson_order)
}

/// Extrapolate a vector-valued quotient componentwise. Each component goes
/// through the same tableau as [`extrapolate`].
pub fn extrapolate_many<Q>(cfg: &LimitConfig, width: usize, mut quotient: Q) -> Result<Vec<LimitEstimate>>
where
    Q: FnMut(f64) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let rows = cfg.ladder().map(&mut quotient).collect::<Result<Vec<_>>>()?;
    (0..width)
        .map(|c| {
            let column: Vec<f64> = rows.iter().map(|r| r[c]).collect();
            tableau(&column, cfg.richardson_order)
        })
        .collect()
}

/// Extrapolate a quotient whose samples carry a known absolute noise level,
/// returned alongside each sample. Used when the quotient is built from
/// values that are themselves limits.
pub fn extrapolate_noisy<Q>(cfg: &LimitConfig, mut quotient: Q) -> Result<LimitEstimate>
where
    Q: FnMut(f64) -> Result<(f64, f64)>,
{
    cfg.validate()?;
    let pairs = cfg.ladder().map(&mut quotient).collect::<Result<Vec<_>>>()?;
    let samples: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let noise = pairs.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    tableau_noisy(&samples, noise, cfg.richardson_order)
}

/// Richardson tableau over samples taken at successively halved `ε`.
pub fn tableau(samples: &[f64], max_order: usize) -> Result<LimitEstimate> {
    tableau_noisy(samples, 0.0, max_order)
}

fn tableau_noisy(samples: &[f64], noise: f64, max_order: usize) -> Result<LimitEstimate> {
    let n = samples.len();
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::UnstableLimit { drift: f64::INFINITY, estimate: f64::NAN });
    }
    let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    let mut best = LimitEstimate { value: samples[n - 1], error: f64::INFINITY };
    let mut last = samples[n - 1];
    for (j, &s) in samples.iter().enumerate() {
        let mut row = Vec::with_capacity(j + 1);
        row.push(s);
        let top = j.min(max_order);
        for k in 1..=top {
            let factor = (1u64 << k) as f64 - 1.0;
            let t = row[k - 1] + (row[k - 1] - prev[k - 1]) / factor;
            let err = (t - row[k - 1]).abs().max((t - prev[k - 1]).abs());
            if err < best.error {
                best = LimitEstimate { value: t, error: err };
            }
            row.push(t);
        }
        last = row[top];
        prev = row;
    }
    if n == 1 || max_order == 0 {
        best = LimitEstimate { value: last, error: 0.0 };
    }
    let floor = (ROUNDING_FLOOR * scale.max(best.value.abs())).max(NOISE_AMPLIFICATION * noise);
    let drift = (last - best.value).abs();
    if drift > DRIFT_FACTOR * best.error.max(floor) || best.error > (MAX_RELATIVE_ERROR * scale).max(floor) {
        return Err(Error::UnstableLimit { drift, estimate: best.error });
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_bias_is_removed() {
        let cfg = LimitConfig::default();
        let est = extrapolate(&cfg, |e| Ok(2.0 + 3.0 * e - 5.0 * e * e + 7.0 * e.powi(3))).unwrap();
        assert!((est.value - 2.0).abs() < 1e-13, "{est:?}");
    }

    #[test]
    fn exponential_quotient() {
        // (e^{ε} - 1)/ε → 1
        let est = extrapolate(&LimitConfig::default(), |e| Ok(e.exp_m1() / e)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_quotient_is_exact() {
        let est = extrapolate(&LimitConfig::default(), |_| Ok(0.0)).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.error, 0.0);
    }

    #[test]
    fn divergent_quotient_is_unstable() {
        // sqrt(ε)/ε has no limit
        let err = extrapolate(&LimitConfig::default(), |e| Ok(e.sqrt() / e)).unwrap_err();
        assert!(matches!(err, Error::UnstableLimit { .. }));
    }

    #[test]
    fn oscillating_quotient_is_unstable() {
        let err = extrapolate(&LimitConfig::default(), |e| Ok((1.0 / e).sin())).unwrap_err();
        assert!(matches!(err, Error::UnstableLimit { .. }));
    }

    #[test]
    fn config_validation() {
        let bad = LimitConfig { eps_base: 0.1, ..LimitConfig::default() };
        assert!(bad.validate().is_err());
        let bad = LimitConfig { eps_levels: 1, ..LimitConfig::default() };
        assert!(bad.validate().is_err());
        let deeper = LimitConfig::default().deeper(2);
        assert_eq!(deeper.eps_levels, 10);
    }

    #[test]
    fn many_matches_scalar() {
        let cfg = LimitConfig::default();
        let q = |e: f64| (e.exp_m1() / e, (2.0 * e).sin() / e);
        let many = extrapolate_many(&cfg, 2, |e| Ok(vec![q(e).0, q(e).1])).unwrap();
        let a = extrapolate(&cfg, |e| Ok(q(e).0)).unwrap();
        let b = extrapolate(&cfg, |e| Ok(q(e).1)).unwrap();
        assert_eq!(many, vec![a, b]);
    }
}
