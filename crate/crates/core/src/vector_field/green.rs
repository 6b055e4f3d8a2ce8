use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::quadrature::{double_integral_rect_try, integrate_adaptive_try, Interval, QuadEstimate, QuadratureConfig};
use crate::special_functions::{coefficient_c_real, ParameterSet};

use super::Field2;

/// Largest endpoint gap accepted between consecutive segments.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Axis-aligned rectangle strictly inside the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region2D {
    x_iv: Interval,
    y_iv: Interval,
}

impl Region2D {
    pub fn new(x_iv: Interval, y_iv: Interval) -> Result<Self> {
        if x_iv.lo <= 0.0 || y_iv.lo <= 0.0 {
            return Err(Error::Domain("region must lie in x > 0, y > 0".into()));
        }
        Ok(Region2D { x_iv, y_iv })
    }

    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Region2D::new(Interval::new(x0, x1)?, Interval::new(y0, y1)?)
    }

    pub fn x_iv(&self) -> Interval {
        self.x_iv
    }

    pub fn y_iv(&self) -> Interval {
        self.y_iv
    }

    /// Counterclockwise boundary starting at the lower-left corner.
    pub fn boundary(&self) -> Curve2D {
        let (x0, x1, y0, y1) = (self.x_iv.lo, self.x_iv.hi, self.y_iv.lo, self.y_iv.hi);
        let corners = [[x0, y0], [x1, y0], [x1, y1], [x0, y1]];
        let segments = (0..4).map(|k| Segment::line(corners[k], corners[(k + 1) % 4])).collect();
        Curve2D::new(segments).expect("rectangle boundary is closed")
    }
}

type Path = Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

/// One smooth piece of a boundary curve.
#[derive(Clone)]
pub enum Segment {
    Line { start: [f64; 2], end: [f64; 2] },
    /// `path(τ) = [x, y, x', y']` on `[tau.0, tau.1]`, traversed backwards
    /// when `reversed` is set.
    Parametric { path: Path, tau: (f64, f64), reversed: bool },
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Line { start, end } => write!(f, "Line({start:?} -> {end:?})"),
            Segment::Parametric { tau, reversed, .. } => {
                write!(f, "Parametric(tau={tau:?}, reversed={reversed})")
            }
        }
    }
}

impl Segment {
    pub fn line(start: [f64; 2], end: [f64; 2]) -> Self {
        Segment::Line { start, end }
    }

    pub fn parametric<P>(path: P, tau0: f64, tau1: f64) -> Result<Self>
    where
        P: Fn(f64) -> [f64; 4] + Send + Sync + 'static,
    {
        Interval::new(tau0, tau1)?;
        Ok(Segment::Parametric { path: Arc::new(path), tau: (tau0, tau1), reversed: false })
    }

    pub fn reversed(&self) -> Self {
        match self {
            Segment::Line { start, end } => Segment::Line { start: *end, end: *start },
            Segment::Parametric { path, tau, reversed } => {
                Segment::Parametric { path: Arc::clone(path), tau: *tau, reversed: !reversed }
            }
        }
    }

    fn domain(&self) -> Interval {
        match self {
            Segment::Line { .. } => Interval { lo: 0.0, hi: 1.0 },
            Segment::Parametric { tau, .. } => Interval { lo: tau.0, hi: tau.1 },
        }
    }

    /// Position and velocity at parameter `τ`.
    fn at(&self, tau: f64) -> ([f64; 2], [f64; 2]) {
        match self {
            Segment::Line { start, end } => {
                let d = [end[0] - start[0], end[1] - start[1]];
                ([start[0] + tau * d[0], start[1] + tau * d[1]], d)
            }
            Segment::Parametric { path, tau: (t0, t1), reversed } => {
                if *reversed {
                    let [x, y, dx, dy] = path(t0 + t1 - tau);
                    ([x, y], [-dx, -dy])
                } else {
                    let [x, y, dx, dy] = path(tau);
                    ([x, y], [dx, dy])
                }
            }
        }
    }

    pub fn start(&self) -> [f64; 2] {
        self.at(self.domain().lo).0
    }

    pub fn end(&self) -> [f64; 2] {
        self.at(self.domain().hi).0
    }

    fn samples(&self) -> Vec<[f64; 2]> {
        match self {
            Segment::Line { start, .. } => vec![*start],
            Segment::Parametric { .. } => {
                let iv = self.domain();
                (0..256).map(|k| self.at(iv.lo + iv.width() * k as f64 / 256.0).0).collect()
            }
        }
    }
}

fn gap(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Closed, piecewise smooth curve.
#[derive(Debug, Clone)]
pub struct Curve2D {
    segments: Vec<Segment>,
    counterclockwise: bool,
}

impl Curve2D {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::OpenCurve { gap: f64::INFINITY });
        }
        for (k, seg) in segments.iter().enumerate() {
            let next = &segments[(k + 1) % segments.len()];
            let d = gap(seg.end(), next.start());
            // written so that a NaN gap also fails
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(d <= CLOSURE_TOLERANCE) {
                return Err(Error::OpenCurve { gap: d });
            }
        }
        let polygon: Vec<[f64; 2]> = segments.iter().flat_map(Segment::samples).collect();
        let twice_area: f64 = (0..polygon.len())
            .map(|k| {
                let (a, b) = (polygon[k], polygon[(k + 1) % polygon.len()]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum();
        Ok(Curve2D { segments, counterclockwise: twice_area > 0.0 })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_counterclockwise(&self) -> bool {
        self.counterclockwise
    }

    /// The same curve traversed in the opposite direction.
    pub fn reversed(&self) -> Curve2D {
        Curve2D {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
            counterclockwise: !self.counterclockwise,
        }
    }
}

/// Integrand used for the area side of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenForm {
    /// `(∂^α_x g − ∂^α_y f) · (1/C)² · x^{α-1} y^{α-1}`, partials in closed form.
    Weighted,
    /// `(1/C) · (g_x · y^{α-1} − f_y · x^{α-1})`.
    Simplified,
}

fn positive_point(x: f64, y: f64) -> Result<()> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("point ({x}, {y}) leaves the positive quadrant")));
    }
    Ok(())
}

fn finite(v: f64, x: f64, y: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::Domain(format!("field is not finite at ({x}, {y})")));
    }
    Ok(v)
}

/// Weighted area integral of the V-fractional curl over `region`.
pub fn green_lhs<F, G>(
    f: &F,
    g: &G,
    region: &Region2D,
    params: &ParameterSet,
    form: GreenForm,
    cfg: &QuadratureConfig,
    mode: Exec,
) -> Result<QuadEstimate>
where
    F: Field2 + ?Sized,
    G: Field2 + ?Sized,
{
    let c = coefficient_c_real(params)?;
    let a = params.alpha();
    let integrand = |x: f64, y: f64| -> Result<f64> {
        let (wx, wy) = (x.powf(a - 1.0), y.powf(a - 1.0));
        let (gx, fy) = (g.dx(x, y), f.dy(x, y));
        let v = match form {
            GreenForm::Weighted => {
                let vg = c * x.powf(1.0 - a) * gx;
                let vf = c * y.powf(1.0 - a) * fy;
                (vg - vf) * wx * wy / (c * c)
            }
            GreenForm::Simplified => (gx * wy - fy * wx) / c,
        };
        finite(v, x, y)
    };
    double_integral_rect_try(integrand, region.x_iv, region.y_iv, cfg, mode)
}

/// `∮ (1/C) [f x^{α-1} dx + g y^{α-1} dy]` along `curve` in its direction
/// of traversal. Segments are integrated through `mode` and summed in order.
pub fn green_rhs<F, G>(
    f: &F,
    g: &G,
    curve: &Curve2D,
    params: &ParameterSet,
    cfg: &QuadratureConfig,
    mode: Exec,
) -> Result<QuadEstimate>
where
    F: Field2 + ?Sized,
    G: Field2 + ?Sized,
{
    let c = coefficient_c_real(params)?;
    let a = params.alpha();
    let pieces = exec::map(mode, curve.segments(), |seg| {
        integrate_adaptive_try(
            |tau| {
                let ([x, y], [dx, dy]) = seg.at(tau);
                positive_point(x, y)?;
                let mut v = 0.0;
                if dx != 0.0 {
                    v += f.eval(x, y) * x.powf(a - 1.0) * dx;
                }
                if dy != 0.0 {
                    v += g.eval(x, y) * y.powf(a - 1.0) * dy;
                }
                finite(v / c, x, y)
            },
            seg.domain(),
            cfg,
        )
    });
    let mut total = QuadEstimate { value: 0.0, error: 0.0, panels: 0 };
    for piece in pieces {
        let piece = piece?;
        total.value += piece.value;
        total.error += piece.error;
        total.panels += piece.panels;
    }
    Ok(total)
}

/// Both sides of the identity on a rectangle and its counterclockwise boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenReport {
    /// Area side, simplified integrand.
    pub lhs: f64,
    /// Area side, weighted integrand.
    pub lhs_weighted: f64,
    pub rhs: f64,
    /// `|lhs − rhs|`.
    pub residual: f64,
    /// `|lhs − lhs_weighted|`.
    pub form_gap: f64,
    pub quadrature_error: f64,
}

pub fn green_check<F, G>(
    f: &F,
    g: &G,
    region: &Region2D,
    params: &ParameterSet,
    cfg: &QuadratureConfig,
    mode: Exec,
) -> Result<GreenReport>
where
    F: Field2 + ?Sized,
    G: Field2 + ?Sized,
{
    let lhs = green_lhs(f, g, region, params, GreenForm::Simplified, cfg, mode)?;
    let weighted = green_lhs(f, g, region, params, GreenForm::Weighted, cfg, mode)?;
    let rhs = green_rhs(f, g, &region.boundary(), params, cfg, mode)?;
    Ok(GreenReport {
        lhs: lhs.value,
        lhs_weighted: weighted.value,
        rhs: rhs.value,
        residual: (lhs.value - rhs.value).abs(),
        form_gap: (lhs.value - weighted.value).abs(),
        quadrature_error: lhs.error + rhs.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(alpha: f64) -> ParameterSet {
        ParameterSet::unit(alpha, 2).unwrap()
    }

    fn qc() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn zero(_: f64, _: f64) -> f64 {
        0.0
    }

    #[test]
    fn lhs_examples() {
        let p = unit(0.5);
        let r = Region2D::rect(1.0, 2.0, 1.0, 2.0).unwrap();
        let expect = 2.0 * (2f64.sqrt() - 1.0);
        let gx = |x: f64, _y: f64| x;
        for form in [GreenForm::Weighted, GreenForm::Simplified] {
            let v = green_lhs(&zero, &gx, &r, &p, form, &qc(), Exec::Auto).unwrap();
            assert!((v.value - expect).abs() < 1e-9, "{form:?} {v:?}");
            let v = green_lhs(&|_x: f64, y: f64| y, &zero, &r, &p, form, &qc(), Exec::Auto).unwrap();
            assert!((v.value + expect).abs() < 1e-9);
            let v = green_lhs(&|_: f64, _: f64| 3.0, &|_: f64, _: f64| 3.0, &r, &p, form, &qc(), Exec::Auto).unwrap();
            assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn rhs_matches_lhs_and_flips_with_orientation() {
        let p = unit(0.5);
        let r = Region2D::rect(1.0, 2.0, 1.0, 2.0).unwrap();
        let gx = |x: f64, _y: f64| x;
        let curve = r.boundary();
        assert!(curve.is_counterclockwise());
        let rhs = green_rhs(&zero, &gx, &curve, &p, &qc(), Exec::Auto).unwrap();
        let lhs = green_lhs(&zero, &gx, &r, &p, GreenForm::Simplified, &qc(), Exec::Auto).unwrap();
        assert!((rhs.value - lhs.value).abs() < 1e-9);
        let back = curve.reversed();
        assert!(!back.is_counterclockwise());
        let rev = green_rhs(&zero, &gx, &back, &p, &qc(), Exec::Auto).unwrap();
        assert!((rev.value + rhs.value).abs() < 1e-10);
        assert_eq!(green_rhs(&zero, &zero, &curve, &p, &qc(), Exec::Auto).unwrap().value, 0.0);
    }

    #[test]
    fn check_example_and_classical_reduction() {
        let r = Region2D::rect(1.0, 2.0, 1.0, 3.0).unwrap();
        let f = |x: f64, y: f64| x * y;
        let g = |x: f64, _y: f64| x * x;
        let rep = green_check(&f, &g, &r, &unit(0.5), &qc(), Exec::Auto).unwrap();
        assert!(rep.residual <= 1e-6 * (1.0 + rep.lhs.abs()), "{rep:?}");
        assert!(rep.form_gap < 1e-9);
        let rep = green_check(&f, &g, &r, &unit(1.0), &qc(), Exec::Auto).unwrap();
        // ∫∫ (2x − x) dA = ∫_1^2 x dx · 2 = 3
        assert!((rep.lhs - 3.0).abs() < 1e-8, "{rep:?}");
        assert!(rep.residual <= 1e-8);
    }

    #[test]
    fn parametric_circle_boundary() {
        // circle of radius 0.5 around (2, 2), traced once counterclockwise
        let (cx, cy, rad) = (2.0, 2.0, 0.5);
        let seg = Segment::parametric(
            move |t: f64| [cx + rad * t.cos(), cy + rad * t.sin(), -rad * t.sin(), rad * t.cos()],
            0.0,
            std::f64::consts::TAU,
        )
        .unwrap();
        let curve = Curve2D::new(vec![seg]).unwrap();
        assert!(curve.is_counterclockwise());
        // α = 1: ∮ x dy = area
        let v = green_rhs(&zero, &|x: f64, _: f64| x, &curve, &unit(1.0), &qc(), Exec::Auto).unwrap();
        assert!((v.value - std::f64::consts::PI * 0.25).abs() < 1e-9, "{v:?}");
        let back = green_rhs(&zero, &|x: f64, _: f64| x, &curve.reversed(), &unit(1.0), &qc(), Exec::Auto).unwrap();
        assert!((back.value + v.value).abs() < 1e-10);
    }

    #[test]
    fn open_curves_and_bad_regions_are_rejected() {
        let err = Curve2D::new(vec![Segment::line([1.0, 1.0], [2.0, 1.0]), Segment::line([2.0, 1.0], [2.0, 2.0])])
            .unwrap_err();
        assert_eq!(err.kind(), "OpenCurve");
        assert!(Region2D::rect(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(Region2D::rect(1.0, 1.0, 1.0, 2.0).is_err());
    }
}
