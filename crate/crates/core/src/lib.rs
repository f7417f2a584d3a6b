//! Analysis engine and Monte Carlo oracle for a primary ad hoc network
//! underlaid with a wireless-powered cognitive secondary network, both
//! accessing the channel asynchronously (time-space Poisson point processes).
//!
//! The crate is `no_std` with `alloc`. Enable the `std` feature to route the
//! floating point math through the platform libm instead of the pure-Rust one.
//!
//! Layout:
//! - [`model`]: parameters, path loss and the two time-overlap kernels.
//! - [`numerics`]: adaptive quadrature, characteristic-function inversion and
//!   the regularized incomplete Beta function.
//! - [`energy`], [`access`], [`coverage`], [`meta`]: the analytical chain from
//!   harvested energy to the SINR meta distribution.
//! - [`montecarlo`]: an independent simulator of the same model.
#![no_std]
// `!(x > 0.0)` guards are meant to catch NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod access;
pub mod coverage;
pub mod energy;
pub mod error;
pub mod meta;
pub mod model;
pub mod montecarlo;
pub mod numerics;

pub use access::AccessResult;
pub use coverage::LinkAnalysis;
pub use energy::{EnergyKernel, EnergyLaw};
pub use error::{Error, Result};
pub use meta::{beta_match, BetaMoments};
pub use model::{chi, path_gain, psi, Network, ParamSet, SystemParams};
pub use numerics::QuadratureSpec;
