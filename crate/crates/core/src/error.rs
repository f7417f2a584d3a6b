use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("argument outside the domain of `{op}`: {reason}")]
    Domain {
        op: &'static str,
        reason: &'static str,
    },

    /// Quadrature or series evaluation ran out of budget before meeting its
    /// tolerance. `estimate` is the best value obtained (NaN when the failing
    /// quantity is not a real scalar).
    #[error(
        "numerical evaluation did not converge (estimate {estimate}, abs error {abs_error:e})"
    )]
    NonConvergence { estimate: f64, abs_error: f64 },

    #[error("secondary link has zero average transmit power")]
    SecondaryUnpowered,

    #[error("coverage moments violate m1^2 <= m2 <= m1 (m1 = {m1}, m2 = {m2})")]
    MomentViolation { m1: f64, m2: f64 },

    #[error("moment pair (m1 = {m1}, m2 = {m2}) does not define a non-degenerate Beta law")]
    DegenerateDistribution { m1: f64, m2: f64 },
}
