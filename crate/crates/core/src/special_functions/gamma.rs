//! Complex log-gamma.
//!
//! Three regimes:
//! - a Taylor series of `ln Γ(1 + x)` in zeta values near `z = 1` and `z = 2`,
//!   where the function has zeros and relative accuracy matters most;
//! - the Stirling series after an upward shift to `Re(w) >= 15`;
//! - the reflection formula for `Re(z) < 0.5`.
//!
//! The returned imaginary part is reduced to `(-π, π]`, i.e. the principal
//! branch of `log Γ(z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance to a nonpositive integer below which `z` is treated as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT_THRESHOLD: f64 = 15.0;
const TAYLOR_RADIUS: f64 = 0.2;

// ζ(k) for k = 2..=40.
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 39] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_37,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
    1.000_000_000_465_663,
    1.000_000_000_232_831_2,
    1.000_000_000_116_415_5,
    1.000_000_000_058_207_7,
    1.000_000_000_029_103_8,
    1.000_000_000_014_552,
    1.000_000_000_007_276,
    1.000_000_000_003_638,
    1.000_000_000_001_819,
    1.000_000_000_000_909_5,
];

// B_{2k} / (2k (2k - 1)) for k = 1..=9.
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
];

/// Principal-branch `ln Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite argument {z}")));
    }
    if let Some(n) = nearest_nonpositive_integer(z) {
        if (z - n).norm() < POLE_TOLERANCE {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
    }
    Ok(principal(log_gamma_unwrapped(z)))
}

/// Real convenience wrapper; errors on `x <= 0` poles like the complex form.
pub fn log_gamma_real(x: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

fn nearest_nonpositive_integer(z: Complex64) -> Option<f64> {
    let n = z.re.round();
    (n <= 0.0).then_some(n)
}

fn principal(w: Complex64) -> Complex64 {
    if w.im > -PI && w.im <= PI {
        return w;
    }
    let turns = ((w.im + PI) / (2.0 * PI)).floor();
    let mut im = w.im - turns * 2.0 * PI;
    if im <= -PI {
        im += 2.0 * PI;
    }
    Complex64::new(w.re, im)
}

// Branch of the imaginary part is unconstrained here; callers reduce it.
fn log_gamma_unwrapped(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if (z - 1.0).norm() < TAYLOR_RADIUS {
        return log_gamma_1p(z - 1.0);
    }
    if (z - 2.0).norm() < TAYLOR_RADIUS {
        let x = z - 2.0;
        return ln_1p(x) + log_gamma_1p(x);
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - log_gamma_unwrapped(one - z);
    }
    let mut w = z;
    let mut shift_product = one;
    let mut shift_log = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_THRESHOLD {
        shift_product *= w;
        w += 1.0;
        // keep the running product well inside the exponent range
        if shift_product.norm() > 1e200 {
            shift_log += shift_product.ln();
            shift_product = one;
        }
    }
    shift_log += shift_product.ln();
    stirling(w) - shift_log
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series
}

/// `ln Γ(1 + x) = -γ x + Σ_{k>=2} (-1)^k ζ(k) x^k / k` for small `|x|`.
fn log_gamma_1p(x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = -x;
    for (i, zeta) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        power *= -x;
        acc += power * (zeta / k);
    }
    acc - x * EULER_GAMMA
}

fn ln_1p(x: Complex64) -> Complex64 {
    if x.im == 0.0 {
        return Complex64::new(x.re.ln_1p(), 0.0);
    }
    let re = 0.5 * (2.0 * x.re + x.norm_sqr()).ln_1p();
    let im = x.im.atan2(1.0 + x.re);
    Complex64::new(re, im)
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    let i = Complex64::i();
    if w.im > 0.0 {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i)
        -i * w + ((i * w * 2.0).exp() - 1.0).ln() - (i * 2.0).ln()
    } else {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        i * w + (Complex64::new(1.0, 0.0) - (-i * w * 2.0).exp()).ln() - (i * 2.0).ln()
    }
}
