//! V-fractional partial derivatives, the V-fractional Jacobian and the
//! multivariable chain rule.
//!
//! The multivariable derivative at `a` is represented by its matrix: entry
//! `(j, p)` is the V-partial of component `j` along axis `p`. The matrix is
//! certified after the fact by [`linear_map_residual`], whose quotient must
//! vanish as `ε → 0` for the matrix to be the derivative.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::finite_diff;
use crate::limit::{self, LimitConfig, LimitEstimate};
use crate::scalar_calculus::Prober;
use crate::special_functions::{coefficient_c_real, ParameterSet};

/// A pure map `ℝⁿ → ℝᵐ`, finite on the positive orthant.
pub trait VectorMap: Sync {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Vec<f64>;
}

impl<T: VectorMap + ?Sized> VectorMap for &T {
    fn input_dim(&self) -> usize {
        (**self).input_dim()
    }
    fn output_dim(&self) -> usize {
        (**self).output_dim()
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        (**self).eval(x)
    }
}

/// Closure-backed [`VectorMap`].
pub struct FnMap<F> {
    n: usize,
    m: usize,
    f: F,
}

impl<F> VectorMap for FnMap<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    fn input_dim(&self) -> usize {
        self.n
    }
    fn output_dim(&self) -> usize {
        self.m
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }
}

pub fn vector_map<F>(n: usize, m: usize, f: F) -> FnMap<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    FnMap { n, m, f }
}

/// Closure-backed scalar field `ℝⁿ → ℝ`.
pub struct ScalarField<F> {
    n: usize,
    f: F,
}

impl<F> VectorMap for ScalarField<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn input_dim(&self) -> usize {
        self.n
    }
    fn output_dim(&self) -> usize {
        1
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        vec![(self.f)(x)]
    }
}

pub fn scalar_field<F>(n: usize, f: F) -> ScalarField<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    ScalarField { n, f }
}

/// Component `j` of a vector map, as a scalar field.
pub struct Component<'a, M: ?Sized> {
    map: &'a M,
    index: usize,
}

impl<M: VectorMap + ?Sized> VectorMap for Component<'_, M> {
    fn input_dim(&self) -> usize {
        self.map.input_dim()
    }
    fn output_dim(&self) -> usize {
        1
    }
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        vec![self.map.eval(x)[self.index]]
    }
}

pub fn component<M: VectorMap + ?Sized>(map: &M, index: usize) -> Component<'_, M> {
    Component { map, index }
}

/// A base point in `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite and non-empty".into()));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn require_positive_axis(&self, axis: usize) -> Result<()> {
        if self.0[axis] <= 0.0 {
            return Err(Error::Domain(format!(
                "coordinate {} = {} must be > 0",
                axis + 1,
                self.0[axis]
            )));
        }
        Ok(())
    }

    fn require_positive(&self) -> Result<()> {
        (0..self.dim()).try_for_each(|p| self.require_positive_axis(p))
    }
}

/// Candidate linear map `ℝⁿ → ℝᵐ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub matrix: DMatrix<f64>,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("linear map entries must be finite".into()));
        }
        Ok(LinearMap { matrix })
    }
}

/// V-fractional Jacobian with per-entry extrapolation error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct VJacobian {
    pub entries: DMatrix<f64>,
    pub errors: DMatrix<f64>,
    pub base: Point,
    pub params: ParameterSet,
}

impl VJacobian {
    pub fn as_linear_map(&self) -> LinearMap {
        LinearMap { matrix: self.entries.clone() }
    }
}

fn check_dims<M: VectorMap + ?Sized>(f: &M, a: &Point) -> Result<()> {
    if f.input_dim() != a.dim() {
        return Err(Error::Domain(format!(
            "map takes {} inputs but point has {} coordinates",
            f.input_dim(),
            a.dim()
        )));
    }
    Ok(())
}

fn eval_checked<M: VectorMap + ?Sized>(f: &M, x: &[f64]) -> Result<Vec<f64>> {
    let v = f.eval(x);
    if v.len() != f.output_dim() {
        return Err(Error::Domain(format!("map returned {} values, expected {}", v.len(), f.output_dim())));
    }
    if v.iter().any(|y| !y.is_finite()) {
        return Err(Error::Domain(format!("map is not finite at {x:?}")));
    }
    Ok(v)
}

/// V-partials of every component of `f` along one axis.
fn axis_column<M: VectorMap + ?Sized>(
    f: &M,
    a: &Point,
    axis: usize,
    prober: &Prober,
    f0: &[f64],
    cfg: &LimitConfig,
) -> Result<Vec<LimitEstimate>> {
    a.require_positive_axis(axis)?;
    let base = a.coords()[axis];
    let mut x = a.coords().to_vec();
    limit::extrapolate_many(cfg, f0.len(), |eps| {
        x[axis] = prober.probe(base, eps)?;
        let fx = eval_checked(f, &x)?;
        Ok(fx.iter().zip(f0).map(|(v, v0)| (v - v0) / eps).collect())
    })
}

/// V-partial of a scalar field along `axis` (0-based).
pub fn v_partial<M: VectorMap + ?Sized>(
    f: &M,
    a: &Point,
    axis: usize,
    params: &ParameterSet,
    cfg: &LimitConfig,
) -> Result<LimitEstimate> {
    check_dims(f, a)?;
    if f.output_dim() != 1 {
        return Err(Error::Domain("v_partial needs a scalar field".into()));
    }
    if axis >= a.dim() {
        return Err(Error::Domain(format!("axis {} out of range 1..={}", axis + 1, a.dim())));
    }
    a.require_positive_axis(axis)?;
    let prober = Prober::new(params)?;
    let f0 = eval_checked(f, a.coords())?;
    Ok(axis_column(f, a, axis, &prober, &f0, cfg)?[0])
}

/// `m × n` matrix of V-partials; columns are evaluated through `mode`.
pub fn v_jacobian<M: VectorMap + ?Sized>(
    f: &M,
    a: &Point,
    params: &ParameterSet,
    cfg: &LimitConfig,
    mode: Exec,
) -> Result<VJacobian> {
    check_dims(f, a)?;
    a.require_positive()?;
    let prober = Prober::new(params)?;
    let f0 = eval_checked(f, a.coords())?;
    let (m, n) = (f.output_dim(), a.dim());
    let columns = exec::map_range(mode, n, |p| axis_column(f, a, p, &prober, &f0, cfg))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let entries = DMatrix::from_fn(m, n, |j, p| columns[p][j].value);
    let errors = DMatrix::from_fn(m, n, |j, p| columns[p][j].error);
    Ok(VJacobian { entries, errors, base: a.clone(), params: *params })
}

/// Classical Jacobian by extrapolated central differences
/// ([`finite_diff::central6`]) along each axis.
pub fn classical_jacobian<M: VectorMap + ?Sized>(f: &M, x: &Point) -> Result<DMatrix<f64>> {
    check_dims(f, x)?;
    let (m, n) = (f.output_dim(), x.dim());
    let mut jac = DMatrix::zeros(m, n);
    let mut probe = x.coords().to_vec();
    for p in 0..n {
        let base = x.coords()[p];
        let h = finite_diff::axis_step(base);
        let mut at = |offset: f64| -> Result<Vec<f64>> {
            probe[p] = base + offset;
            eval_checked(f, &probe)
        };
        let v = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0].map(|o| at(o * h));
        probe[p] = base;
        let [m2, m1, mh, ph, p1, p2] = v;
        let (m2, m1, mh, ph, p1, p2) = (m2?, m1?, mh?, ph?, p1?, p2?);
        for j in 0..m {
            let coarse = (m2[j] - 8.0 * m1[j] + 8.0 * p1[j] - p2[j]) / (12.0 * h);
            let fine = (m1[j] - 8.0 * mh[j] + 8.0 * ph[j] - p1[j]) / (6.0 * h);
            jac[(j, p)] = (16.0 * fine - coarse) / 15.0;
        }
    }
    Ok(jac)
}

/// `diag(C · a_p^{1-α})`, the matrix of the derivative of the identity map.
pub fn diagonal_scaling(a: &Point, params: &ParameterSet) -> Result<DMatrix<f64>> {
    a.require_positive()?;
    let c = coefficient_c_real(params)?;
    let d = DVector::from_iterator(a.dim(), a.coords().iter().map(|x| c * x.powf(1.0 - params.alpha())));
    Ok(DMatrix::from_diagonal(&d))
}

/// Classical Jacobian right-multiplied by `diag(C · a_p^{1-α})`.
pub fn jacobian_factorized<M: VectorMap + ?Sized>(f: &M, a: &Point, params: &ParameterSet) -> Result<DMatrix<f64>> {
    Ok(classical_jacobian(f, a)? * diagonal_scaling(a, params)?)
}

/// `‖f(a₁H(ε₁a₁^{-α}), …) − f(a) − L ε‖ / ‖ε‖`.
pub fn linear_map_residual<M: VectorMap + ?Sized>(
    f: &M,
    a: &Point,
    l: &LinearMap,
    params: &ParameterSet,
    eps: &[f64],
) -> Result<f64> {
    check_dims(f, a)?;
    a.require_positive()?;
    if eps.len() != a.dim() {
        return Err(Error::Domain("eps vector has the wrong length".into()));
    }
    if l.matrix.shape() != (f.output_dim(), a.dim()) {
        return Err(Error::Domain("linear map has the wrong shape".into()));
    }
    let eps_v = DVector::from_column_slice(eps);
    let norm = eps_v.norm();
    if norm == 0.0 {
        return Err(Error::Domain("eps vector must be nonzero".into()));
    }
    let prober = Prober::new(params)?;
    let x = a
        .coords()
        .iter()
        .zip(eps)
        .map(|(&ap, &e)| prober.probe(ap, e))
        .collect::<Result<Vec<_>>>()?;
    let fx = DVector::from_vec(eval_checked(f, &x)?);
    let f0 = DVector::from_vec(eval_checked(f, a.coords())?);
    Ok((fx - f0 - &l.matrix * eps_v).norm() / norm)
}

/// V-derivative of `g ∘ f` at `a`: classical Jacobian of `g` at `f(a)` times
/// the V-Jacobian of `f` at `a`. Requires `f(a) > 0` componentwise.
pub fn chain_rule_multi<G, F>(
    g: &G,
    f: &F,
    a: &Point,
    params: &ParameterSet,
    cfg: &LimitConfig,
    mode: Exec,
) -> Result<DMatrix<f64>>
where
    G: VectorMap + ?Sized,
    F: VectorMap + ?Sized,
{
    if g.input_dim() != f.output_dim() {
        return Err(Error::Domain("g and f do not compose".into()));
    }
    check_dims(f, a)?;
    let fa = eval_checked(f, a.coords())?;
    if let Some(i) = fa.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!("f_{}(a) = {} must be > 0", i + 1, fa[i])));
    }
    let jg = classical_jacobian(g, &Point::new(fa)?)?;
    let vf = v_jacobian(f, a, params, cfg, mode)?;
    Ok(jg * vf.entries)
}

/// Largest row difference between the Jacobian of `f` and the Jacobians of
/// its components taken one at a time.
pub fn componentwise_check<M: VectorMap + ?Sized>(
    f: &M,
    a: &Point,
    params: &ParameterSet,
    cfg: &LimitConfig,
    mode: Exec,
) -> Result<f64> {
    let whole = v_jacobian(f, a, params, cfg, mode)?;
    let mut worst = 0.0f64;
    for j in 0..f.output_dim() {
        let row = v_jacobian(&component(f, j), a, params, cfg, mode)?;
        let diff = (whole.entries.row(j) - row.entries.row(0)).norm();
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// `(∂^α/∂t^α f(a), ∂^κ/∂s^κ f(a))` for a scalar field on `ℝ²`.
pub fn v_gradient<M: VectorMap + ?Sized>(
    f: &M,
    a: &Point,
    alpha: f64,
    kappa: f64,
    params: &ParameterSet,
    cfg: &LimitConfig,
) -> Result<[f64; 2]> {
    if a.dim() != 2 {
        return Err(Error::Domain("v_gradient is defined on ℝ²".into()));
    }
    let dt = v_partial(f, a, 0, &params.with_alpha(alpha)?, cfg)?;
    let ds = v_partial(f, a, 1, &params.with_alpha(kappa)?, cfg)?;
    Ok([dt.value, ds.value])
}
