//! Generalized Pochhammer symbol, the truncated six-parameter Mittag-Leffler
//! series and the truncated function `H = Γ(β) · E`.

use num_complex::Complex64;

use super::gamma::log_gamma;
use crate::error::{Error, Result};

/// Largest log-magnitude whose exponential is still a finite `f64`.
const MAX_LOG_MAGNITUDE: f64 = 709.782_712_893_384;

/// The six series parameters, the derivative order and the truncation index.
///
/// Construction checks every constraint except `trunc_i >= 1`, which only the
/// derivative operators need (see [`ParameterSet::require_derivative_ready`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    gamma: Complex64,
    beta: Complex64,
    rho: Complex64,
    delta: Complex64,
    p: f64,
    q: f64,
    trunc_i: usize,
    alpha: f64,
}

impl ParameterSet {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma: Complex64,
        beta: Complex64,
        rho: Complex64,
        delta: Complex64,
        p: f64,
        q: f64,
        trunc_i: usize,
        alpha: f64,
    ) -> Result<Self> {
        let set = ParameterSet { gamma, beta, rho, delta, p, q, trunc_i, alpha };
        set.validate()?;
        Ok(set)
    }

    /// Real-parameter constructor.
    #[allow(clippy::too_many_arguments)]
    pub fn real(
        gamma: f64,
        beta: f64,
        rho: f64,
        delta: f64,
        p: f64,
        q: f64,
        trunc_i: usize,
        alpha: f64,
    ) -> Result<Self> {
        let c = |x| Complex64::new(x, 0.0);
        Self::new(c(gamma), c(beta), c(rho), c(delta), p, q, trunc_i, alpha)
    }

    /// All six parameters equal to one, under which `C = 1`.
    pub fn unit(alpha: f64, trunc_i: usize) -> Result<Self> {
        Self::real(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, trunc_i, alpha)
    }

    fn validate(&self) -> Result<()> {
        let named = [
            ("gamma", self.gamma),
            ("beta", self.beta),
            ("rho", self.rho),
            ("delta", self.delta),
        ];
        for (name, v) in named {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidParameters(format!("{name} must be finite")));
            }
            if v.re <= 0.0 {
                return Err(Error::InvalidParameters(format!("Re({name}) > 0 violated")));
            }
        }
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::InvalidParameters("p > 0 violated".into()));
        }
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::InvalidParameters("q > 0 violated".into()));
        }
        if self.gamma.re + self.p < self.q {
            return Err(Error::InvalidParameters("Re(gamma)+p >= q violated".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameters("alpha in (0,1] violated".into()));
        }
        Ok(())
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
    pub fn beta(&self) -> Complex64 {
        self.beta
    }
    pub fn rho(&self) -> Complex64 {
        self.rho
    }
    pub fn delta(&self) -> Complex64 {
        self.delta
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn trunc_i(&self) -> usize {
        self.trunc_i
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same parameters with a different derivative order.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let set = ParameterSet { alpha, ..*self };
        set.validate()?;
        Ok(set)
    }

    pub fn with_trunc(&self, trunc_i: usize) -> Self {
        ParameterSet { trunc_i, ..*self }
    }

    /// With `trunc_i = 0`, `H ≡ 1` and every limit quotient vanishes, so the
    /// derivative operators refuse it.
    pub fn require_derivative_ready(&self) -> Result<()> {
        if self.trunc_i == 0 {
            return Err(Error::InvalidParameters(
                "trunc_i >= 1 required by derivative operators".into(),
            ));
        }
        Ok(())
    }
}

/// `(x)_{step·k} = Γ(x + step·k) / Γ(x)`, exactly 1 for `k = 0`.
pub fn pochhammer_gen(x: Complex64, step: f64, k: usize) -> Result<Complex64> {
    let base = log_gamma(x)?;
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let top = log_gamma(x + step * k as f64)?;
    Ok((top - base).exp())
}

fn log_pochhammer(x: Complex64, step: f64, k: usize) -> Result<Complex64> {
    if k == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(log_gamma(x + step * k as f64)? - log_gamma(x)?)
}

/// Log-space coefficients of the truncated series, built once per parameter
/// set and reused across many arguments.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    /// `ln[(ρ)_{qk} / ((δ)_{pk} Γ(γk + β))]` for `k = 0..=trunc_i`.
    log_coeffs: Vec<Complex64>,
    log_gamma_beta: Complex64,
}

impl TruncatedSeries {
    pub fn new(params: &ParameterSet) -> Result<Self> {
        let log_gamma_beta = log_gamma(params.beta)?;
        let log_coeffs = (0..=params.trunc_i)
            .map(|k| {
                let kf = k as f64;
                Ok(log_pochhammer(params.rho, params.q, k)?
                    - log_pochhammer(params.delta, params.p, k)?
                    - log_gamma(params.gamma * kf + params.beta)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries { log_coeffs, log_gamma_beta })
    }

    /// The truncated Mittag-Leffler sum `Σ_{k=0}^{i} (ρ)_{qk}/(δ)_{pk} z^k / Γ(γk+β)`.
    pub fn ml(&self, z: Complex64) -> Result<Complex64> {
        self.sum(z, Complex64::new(0.0, 0.0), false)
    }

    /// `H(z) = Γ(β) · E(z)`, with the `k = 0` term fixed to exactly 1.
    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        self.sum(z, self.log_gamma_beta, true)
    }

    fn sum(&self, z: Complex64, log_scale: Complex64, unit_head: bool) -> Result<Complex64> {
        let mut acc = CompensatedSum::default();
        let head = if unit_head {
            Complex64::new(1.0, 0.0)
        } else {
            checked_exp(self.log_coeffs[0] + log_scale, 0)?
        };
        acc.add(head);
        if z == Complex64::new(0.0, 0.0) {
            return Ok(acc.total());
        }
        let log_abs = z.norm().ln();
        let phase = z / z.norm();
        let mut phase_k = Complex64::new(1.0, 0.0);
        for (k, log_c) in self.log_coeffs.iter().enumerate().skip(1) {
            phase_k *= phase;
            let log_term = log_c + log_scale + log_abs * k as f64;
            acc.add(checked_exp(log_term, k)? * phase_k);
        }
        Ok(acc.total())
    }

    /// Single series term `k` of the Mittag-Leffler sum.
    pub fn ml_term(&self, z: Complex64, k: usize) -> Result<Complex64> {
        let log_c = self.log_coeffs.get(k).copied().ok_or_else(|| {
            Error::InvalidConfig(format!("term {k} beyond truncation index"))
        })?;
        if k == 0 {
            return checked_exp(log_c, 0);
        }
        if z == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let phase = (z / z.norm()).powu(k as u32);
        Ok(checked_exp(log_c + z.norm().ln() * k as f64, k)? * phase)
    }
}

fn checked_exp(log_term: Complex64, k: usize) -> Result<Complex64> {
    if log_term.re > MAX_LOG_MAGNITUDE || log_term.re.is_nan() {
        return Err(Error::Overflow { k, log_magnitude: log_term.re });
    }
    Ok(log_term.exp())
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum(self.sum.re, x.re);
        let (im, cim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp += Complex64::new(cre, cim);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, err)
}

/// Truncated six-parameter Mittag-Leffler function.
pub fn truncated_ml(params: &ParameterSet, z: Complex64) -> Result<Complex64> {
    TruncatedSeries::new(params)?.ml(z)
}

/// Truncated function `H(z) = Γ(β) E(z)`; `H(0) = 1` exactly.
pub fn truncated_h(params: &ParameterSet, z: Complex64) -> Result<Complex64> {
    TruncatedSeries::new(params)?.h(z)
}

/// `C = Γ(β)(ρ)_q / [Γ(γ+β)(δ)_p]`, the linear coefficient of `H`.
pub fn coefficient_c(params: &ParameterSet) -> Result<Complex64> {
    let log_c = log_gamma(params.beta)? + log_pochhammer(params.rho, params.q, 1)?
        - log_gamma(params.gamma + params.beta)?
        - log_pochhammer(params.delta, params.p, 1)?;
    checked_exp(log_c, 1)
}

/// Relative size of an imaginary part tolerated by the real-valued wrappers.
pub const REAL_TOLERANCE: f64 = 1e-10;

/// Narrow a complex value to a real one, failing when the imaginary part is
/// more than `REAL_TOLERANCE` of the real part.
pub fn expect_real(v: Complex64) -> Result<f64> {
    if v.im.abs() > REAL_TOLERANCE * v.re.abs() {
        return Err(Error::NonReal { re: v.re, im: v.im });
    }
    Ok(v.re)
}

/// Real `C`; errors for parameter sets whose coefficient is genuinely complex.
pub fn coefficient_c_real(params: &ParameterSet) -> Result<f64> {
    expect_real(coefficient_c(params)?)
}
