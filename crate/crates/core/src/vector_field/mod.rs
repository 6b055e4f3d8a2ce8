//! Two-variable fields: mixed V-fractional partials and the weighted Green
//! identity on rectangles.

mod green;
mod mixed;

pub use green::{
    green_check, green_lhs, green_rhs, Curve2D, GreenForm, GreenReport, Region2D, Segment,
    CLOSURE_TOLERANCE,
};
pub use mixed::{
    commutativity_check, mixed_partial_closed, mixed_partial_limit, MixedOrders, Nesting,
};

use crate::finite_diff;

/// A smooth scalar field on the open positive quadrant.
///
/// `dx` and `dy` default to extrapolated central differences; fields with
/// known partials should override them.
pub trait Field2: Sync {
    fn eval(&self, x: f64, y: f64) -> f64;

    fn dx(&self, x: f64, y: f64) -> f64 {
        finite_diff::derivative(|u| self.eval(u, y), x)
    }

    fn dy(&self, x: f64, y: f64) -> f64 {
        finite_diff::derivative(|v| self.eval(x, v), y)
    }
}

impl<F> Field2 for F
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    fn eval(&self, x: f64, y: f64) -> f64 {
        self(x, y)
    }
}
