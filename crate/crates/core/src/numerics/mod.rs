//! Quadrature, characteristic-function inversion and the incomplete Beta
//! function used by the analysis modules.

mod beta;
mod gil_pelaez;
mod quad;

pub use beta::{ln_beta, regularized_incomplete_beta};
pub use gil_pelaez::{gil_pelaez_ccdf, wynn_epsilon};
pub use quad::{
    integrate_adaptive, integrate_power_tail, integrate_semi_infinite, value_or_flag, Integral,
    QuadResult, QuadValue, QuadratureSpec, Unconverged,
};
