//! Log-gamma, the generalized Pochhammer symbol, the truncated Mittag-Leffler
//! series, the truncated function `H` and the coefficient `C`.
//!
//! Every term of the series is formed as the exponential of a sum of
//! log-gamma differences so that `Γ(γk + β)` never has to be represented on
//! its own.

mod gamma;
mod mittag_leffler;

pub use gamma::{log_gamma, log_gamma_real, POLE_TOLERANCE};
pub use mittag_leffler::{
    coefficient_c, coefficient_c_real, expect_real, pochhammer_gen, truncated_h, truncated_ml,
    ParameterSet, TruncatedSeries, REAL_TOLERANCE,
};
