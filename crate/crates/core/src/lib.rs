//! Truncated V-fractional calculus.
//!
//! The truncated V-fractional derivative of order `α` is the limit
//!
//! ```text
//! V f(t) = lim_{ε→0} [f(t · H(ε t^{-α})) - f(t)] / ε,
//! ```
//!
//! where `H` is `Γ(β)` times a truncated six-parameter Mittag-Leffler series.
//! For differentiable `f` it equals `C · t^{1-α} · f'(t)` with
//! `C = Γ(β)(ρ)_q / [Γ(γ+β)(δ)_p]`.
//!
//! The crate evaluates these operators numerically in one and several
//! variables, integrates the matching weighted measure, and checks the
//! identities relating them (closed forms, chain rules, Jacobian
//! factorization, commutation of mixed partials, Green's identity).
//!
//! With the default `parallel` feature, batch operations (grids of points,
//! Jacobian columns, suite cases, outer quadrature nodes) run on rayon;
//! results are assembled in a fixed order so output does not depend on the
//! feature or the thread count.

pub mod cli;
pub mod error;
pub mod exec;
pub mod finite_diff;
pub mod limit;
pub mod multivariable;
pub mod quadrature;
pub mod scalar_calculus;
pub mod registry;
pub mod special_functions;
pub mod suite;
pub mod vector_field;

pub use error::{Error, Result};
pub use special_functions::ParameterSet;
