//! SINR meta distribution through second-order Beta moment matching of the
//! conditional coverage probability.

use core::f64::consts::PI;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use crate::coverage::LinkAnalysis;
use crate::error::{Error, Result};
use crate::model::Network;
use crate::numerics::regularized_incomplete_beta;

const MOMENT_SLACK: f64 = 1e-9;

/// First two moments of the conditional coverage probability `q^c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaMoments {
    pub m1: f64,
    pub m2: f64,
}

impl BetaMoments {
    pub fn variance(&self) -> f64 {
        self.m2 - self.m1 * self.m1
    }

    /// Matched shape parameters `(gamma, delta)`.
    pub fn shape(&self) -> Result<(f64, f64)> {
        beta_match(self.m1, self.m2)
    }
}

/// Beta law with mean `m1` and second moment `m2`:
/// `gamma = (m1 m2 - m1^2) / (m1^2 - m2)`,
/// `delta = (1 - m1)(m2 - m1) / (m1^2 - m2)`.
pub fn beta_match(m1: f64, m2: f64) -> Result<(f64, f64)> {
    let degenerate = Error::DegenerateDistribution { m1, m2 };
    if !(m1 > 0.0 && m1 < 1.0) || !m2.is_finite() {
        return Err(degenerate);
    }
    let denom = m1 * m1 - m2;
    // Zero variance or mass on the boundary. The relative guard keeps
    // round-off-sized variances from producing astronomically large shapes.
    if !(denom < -64.0 * f64::EPSILON * m2) || !(m2 < m1) {
        return Err(degenerate);
    }
    let gamma = (m1 * m2 - m1 * m1) / denom;
    let delta = (1.0 - m1) * (m2 - m1) / denom;
    if gamma > 0.0 && delta > 0.0 && gamma.is_finite() && delta.is_finite() {
        Ok((gamma, delta))
    } else {
        Err(degenerate)
    }
}

/// Complementary CDF of `Beta(gamma, delta)` at `x`.
pub fn beta_ccdf(x: f64, gamma: f64, delta: f64) -> Result<f64> {
    Ok(1.0 - regularized_incomplete_beta(x, gamma, delta)?)
}

impl LinkAnalysis {
    /// `E[prod (1 + s P chi (1 + r^alpha)^-1)^-2]` over the interferers of
    /// `network`, integrating `t` over `[0, T_I]` with prefactor `4 pi lambda`.
    pub fn laplace_second_moment(&self, s: f64, network: Network) -> Result<f64> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::Domain {
                op: "laplace_second_moment",
                reason: "s must be non-negative and finite",
            });
        }
        let (density, power) = self.interferers(network);
        if density == 0.0 || power == 0.0 || s == 0.0 {
            return Ok(1.0);
        }
        let integral =
            self.pgfl_integral(0.0, self.params().t_i, second_moment_kernel, s * power)?;
        Ok((-4.0 * PI * density * integral).exp())
    }

    /// `m1 = p^c(zeta)`, `m2 = L2_{I_1}(s) L2_{I_2}(s) exp(-2 sigma^2 s)`.
    pub fn conditional_moments(&self, zeta: f64, link: Network) -> Result<BetaMoments> {
        let factors = self.coverage_factors(zeta, link)?;
        let s = factors.s;
        let m1 = factors.product();
        let m2 = self.laplace_second_moment(s, Network::Primary)?
            * self.laplace_second_moment(s, Network::Secondary)?
            * (-2.0 * self.params().sigma2 * s).exp();
        if m2 > m1 + MOMENT_SLACK || m2 < m1 * m1 - MOMENT_SLACK {
            return Err(Error::MomentViolation { m1, m2 });
        }
        Ok(BetaMoments { m1, m2 })
    }

    /// `F(x) = P(q^c(zeta) > x)` from the matched Beta law; falls back to the
    /// step `1{x < m1}` when the moments are degenerate.
    pub fn meta_distribution(&self, x: f64, zeta: f64, link: Network) -> Result<f64> {
        let moments = self.conditional_moments(zeta, link)?;
        meta_from_moments(x, &moments)
    }
}

/// Meta distribution for given moments, with the step-function fallback.
pub fn meta_from_moments(x: f64, moments: &BetaMoments) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            op: "meta_distribution",
            reason: "reliability threshold must lie in [0, 1]",
        });
    }
    match moments.shape() {
        Ok((gamma, delta)) => beta_ccdf(x, gamma, delta),
        Err(Error::DegenerateDistribution { .. }) => Ok(if x < moments.m1 { 1.0 } else { 0.0 }),
        Err(e) => Err(e),
    }
}

/// `1 - (1 + x)^-2`, written to avoid cancellation for small `x`.
fn second_moment_kernel(x: f64) -> f64 {
    let q = 1.0 + x;
    x * (2.0 + x) / (q * q)
}
