//! Fourth-order central difference stencils.

/// Relative step used by the scalar numeric derivative: `h = t · 1e-6`.
pub const RELATIVE_STEP: f64 = 1e-6;

/// `[f(x-2h) - 8f(x-h) + 8f(x+h) - f(x+2h)] / (12h)`.
pub fn central4<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Relative step for classical Jacobians and field partials.
pub const AXIS_RELATIVE_STEP: f64 = 1e-2;

/// Step `clamp(|x|, 1e-3, 1) · 1e-2`. Below 1 it is proportional to `|x|`
/// so the stencil stays within 2% of `x`, which keeps maps defined only for
/// positive arguments in their domain.
pub fn axis_step(x: f64) -> f64 {
    x.abs().clamp(1e-3, 1.0) * AXIS_RELATIVE_STEP
}

/// `central4` at `h` and `h/2` combined to cancel the `h⁴` term. With the
/// step from [`axis_step`] truncation and rounding both sit near 1e-13
/// relative.
pub fn central6<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let (coarse, fine) = (central4(&f, x, h), central4(&f, x, 0.5 * h));
    (16.0 * fine - coarse) / 15.0
}

/// Classical derivative used by the multivariable and vector-field modules.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    central6(f, x, axis_step(x))
}

/// Mixed second partial `∂²f/∂x∂y` by the tensor product of two fourth-order
/// stencils.
pub fn mixed4<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, hx: f64, hy: f64) -> f64 {
    central4(|xx| central4(|yy| f(xx, yy), y, hy), x, hx)
}
