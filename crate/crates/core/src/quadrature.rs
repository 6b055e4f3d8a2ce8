//! Adaptive Gauss–Kronrod quadrature, the `x^{α-1}`-weighted integral and
//! iterated integrals over rectangles.
//!
//! The weighted integral removes the endpoint singularity exactly with
//! `u = x^α`: `∫ f(x) x^{α-1} dx = (1/α) ∫ f(u^{1/α}) du` over `[lo^α, hi^α]`.

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Kronrod points per panel: 15 (G7-K15) or 21 (G10-K21).
    pub nodes_per_panel: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 4096, nodes_per_panel: 15 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 1e-14 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig("abs_tol must be at least 1e-14".into()));
        }
        if !(self.rel_tol >= 1e-14 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig("rel_tol must be at least 1e-14".into()));
        }
        if self.max_subdivisions == 0 || self.max_subdivisions > 1_000_000 {
            return Err(Error::InvalidConfig("max_subdivisions must lie in 1..=10^6".into()));
        }
        if rule(self.nodes_per_panel).is_none() {
            return Err(Error::InvalidConfig("nodes_per_panel must be 15 or 21".into()));
        }
        Ok(())
    }

    fn halved(&self) -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: (0.5 * self.abs_tol).max(1e-14),
            rel_tol: (0.5 * self.rel_tol).max(1e-14),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] must satisfy lo < hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    /// Number of panels in the final partition.
    pub panels: usize,
}

struct Rule {
    xgk: &'static [f64],
    wgk: &'static [f64],
    wg: &'static [f64],
}

// Nodes in decreasing order, the last one being the centre; Gauss nodes sit at
// odd positions.
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_87,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_61,
    0.109_387_158_802_297_6,
    0.123_491_976_262_065_9,
    0.134_709_217_311_473_3,
    0.142_775_938_577_060_1,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG10: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982,
    0.269_266_719_309_996_4,
    0.295_524_224_714_752_9,
];

fn rule(nodes: usize) -> Option<Rule> {
    match nodes {
        15 => Some(Rule { xgk: &XGK15, wgk: &WGK15, wg: &WG7 }),
        21 => Some(Rule { xgk: &XGK21, wgk: &WGK21, wg: &WG10 }),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

fn apply_rule<F>(rule: &Rule, f: &F, lo: f64, hi: f64, mode: Exec) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let last = rule.xgk.len() - 1;
    // abscissae: centre first, then ± pairs in table order
    let mut xs = Vec::with_capacity(2 * last + 1);
    xs.push(centre);
    for &x in &rule.xgk[..last] {
        xs.push(centre - half * x);
        xs.push(centre + half * x);
    }
    let values = exec::map(mode, &xs, |&x| {
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::Domain(format!("integrand is not finite at x = {x}")));
        }
        Ok(v)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    let fc = values[0];
    let mut kronrod = fc * rule.wgk[last];
    let mut gauss = if rule.wg.len() * 2 > last { fc * rule.wg[rule.wg.len() - 1] } else { 0.0 };
    let mut abs_sum = kronrod.abs();
    for j in 0..last {
        let (a, b) = (values[1 + 2 * j], values[2 + 2 * j]);
        kronrod += rule.wgk[j] * (a + b);
        abs_sum += rule.wgk[j] * (a.abs() + b.abs());
        if j % 2 == 1 {
            gauss += rule.wg[j / 2] * (a + b);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = rule.wgk[last] * (fc - mean).abs();
    for j in 0..last {
        asc += rule.wgk[j] * ((values[1 + 2 * j] - mean).abs() + (values[2 + 2 * j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    let splittable = error > roundoff && (hi - lo) > 1e3 * f64::EPSILON * (lo.abs() + hi.abs());
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Ok(Panel { lo, hi, value, error, splittable })
}

fn adaptive<F>(f: &F, iv: Interval, cfg: &QuadratureConfig, mode: Exec) -> Result<QuadEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let rule = rule(cfg.nodes_per_panel).expect("validated");
    let mut panels = vec![apply_rule(&rule, f, iv.lo, iv.hi, mode)?];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i);
        let Some(worst) = worst.filter(|_| error > tol) else {
            return Ok(QuadEstimate { value, error, panels: panels.len() });
        };
        if panels.len() >= cfg.max_subdivisions {
            return Err(Error::NonConvergence { subdivisions: panels.len(), error });
        }
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        let left = apply_rule(&rule, f, p.lo, mid, mode)?;
        let right = apply_rule(&rule, f, mid, p.hi, mode)?;
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

/// `∫ g` over `iv` by adaptive bisection of Gauss–Kronrod panels.
pub fn integrate_adaptive<G>(g: G, iv: Interval, cfg: &QuadratureConfig) -> Result<QuadEstimate>
where
    G: Fn(f64) -> f64 + Sync,
{
    adaptive(&|x| Ok(g(x)), iv, cfg, Exec::Sequential)
}

/// Fallible-integrand variant; the first error aborts the integration.
pub fn integrate_adaptive_try<G>(g: G, iv: Interval, cfg: &QuadratureConfig) -> Result<QuadEstimate>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    adaptive(&g, iv, cfg, Exec::Sequential)
}

/// `∫ f(x) x^{α-1} dx` over `iv` (with `iv.lo >= 0`).
pub fn integrate_weighted<F>(f: F, iv: Interval, alpha: f64, cfg: &QuadratureConfig) -> Result<QuadEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameters("alpha in (0,1] violated".into()));
    }
    if iv.lo < 0.0 {
        return Err(Error::Domain("weighted integrals need lo >= 0".into()));
    }
    if alpha == 1.0 {
        return integrate_adaptive(f, iv, cfg);
    }
    let inv = alpha.recip();
    let u_iv = Interval::new(iv.lo.powf(alpha), iv.hi.powf(alpha))?;
    integrate_adaptive(|u| f(u.powf(inv)) * inv, u_iv, cfg)
}

/// Iterated integral of `h(x, y)` over `x_iv × y_iv`: inner in `x`, outer in
/// `y`, each with half of the tolerances in `cfg`. Outer nodes are evaluated
/// through [`Exec`].
pub fn double_integral_rect<H>(
    h: H,
    x_iv: Interval,
    y_iv: Interval,
    cfg: &QuadratureConfig,
    mode: Exec,
) -> Result<QuadEstimate>
where
    H: Fn(f64, f64) -> f64 + Sync,
{
    double_integral_rect_try(|x, y| Ok(h(x, y)), x_iv, y_iv, cfg, mode)
}

pub fn double_integral_rect_try<H>(
    h: H,
    x_iv: Interval,
    y_iv: Interval,
    cfg: &QuadratureConfig,
    mode: Exec,
) -> Result<QuadEstimate>
where
    H: Fn(f64, f64) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let axis_cfg = cfg.halved();
    let inner_error = Mutex::new(0.0f64);
    let outer = adaptive(
        &|y| {
            let inner = adaptive(&|x| h(x, y), x_iv, &axis_cfg, Exec::Sequential)?;
            let mut worst = inner_error.lock().expect("inner error lock");
            *worst = worst.max(inner.error);
            Ok(inner.value)
        },
        y_iv,
        &axis_cfg,
        mode,
    )?;
    let inner = *inner_error.lock().expect("inner error lock");
    Ok(QuadEstimate {
        value: outer.value,
        error: outer.error + y_iv.width() * inner,
        panels: outer.panels,
    })
}
