//! Interference Laplace transforms, SINR coverage and spatial throughput.
//!
//! Interference is averaged over the typical slot `[0, T_I]`, so an interferer
//! that starts at `t` is weighted by the overlap fraction [`chi`]. Active
//! secondaries are modelled as an independent thinning of the secondary
//! process with density `lambda_2 pi_s` and common power `P_2`.

use core::cell::Cell;
use core::f64::consts::PI;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use crate::access::AccessResult;
use crate::energy::{EnergyLaw, EnergyProfile};
use crate::error::{Error, Result};
use crate::model::{chi, Network, SystemParams};
use crate::numerics::{integrate_adaptive, integrate_power_tail, value_or_flag, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkAnalysis {
    params: SystemParams,
    p2: f64,
    lambda2_active: f64,
    quad: QuadratureSpec,
}

/// The three independent factors of a coverage probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageFactors {
    pub s: f64,
    pub primary_interference: f64,
    pub secondary_interference: f64,
    pub noise: f64,
}

impl CoverageFactors {
    pub fn product(&self) -> f64 {
        self.primary_interference * self.secondary_interference * self.noise
    }
}

/// Everything the analysis chain produces for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analysis {
    pub energy: EnergyProfile,
    pub access: AccessResult,
    pub link: LinkAnalysis,
}

impl Analysis {
    pub fn run(params: SystemParams, quad: QuadratureSpec) -> Result<Self> {
        let energy = EnergyLaw::new(params, quad).profile()?;
        let access = AccessResult::from_energy_coverage(&params, energy.pi_eps);
        let link = LinkAnalysis::new(params, energy.p2, access.lambda2_active, quad)?;
        Ok(Self {
            energy,
            access,
            link,
        })
    }
}

impl LinkAnalysis {
    pub fn new(
        params: SystemParams,
        p2: f64,
        lambda2_active: f64,
        quad: QuadratureSpec,
    ) -> Result<Self> {
        if !(p2 >= 0.0 && p2.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "p2",
                reason: "average secondary power must be finite and non-negative",
            });
        }
        if !(lambda2_active >= 0.0 && lambda2_active <= params.lambda2 * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter {
                name: "lambda2_active",
                reason: "active secondary density must lie in [0, lambda2]",
            });
        }
        Ok(Self {
            params,
            p2,
            lambda2_active,
            quad,
        })
    }

    /// Run the energy and access analysis to obtain `P_2` and `lambda_2^a`.
    pub fn from_params(params: SystemParams, quad: QuadratureSpec) -> Result<Self> {
        Ok(Analysis::run(params, quad)?.link)
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn lambda2_active(&self) -> f64 {
        self.lambda2_active
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// `(density, transmit power)` of the interferers of `network`.
    pub fn interferers(&self, network: Network) -> (f64, f64) {
        match network {
            Network::Primary => (self.params.lambda1, self.params.p1),
            Network::Secondary => (self.lambda2_active, self.p2),
        }
    }

    pub fn link_power(&self, link: Network) -> f64 {
        self.interferers(link).1
    }

    /// `s = zeta (1 + d^alpha) / P_link`.
    pub fn s_value(&self, zeta: f64, link: Network) -> Result<f64> {
        check_zeta(zeta)?;
        let power = self.link_power(link);
        if power <= 0.0 {
            return Err(Error::SecondaryUnpowered);
        }
        Ok(zeta / self.params.link_gain() / power)
    }

    /// Closed-form `L_{I_n}(s)`.
    pub fn laplace_closed(&self, s: f64, network: Network) -> Result<f64> {
        check_s(s)?;
        let (density, power) = self.interferers(network);
        if density == 0.0 || power == 0.0 || s == 0.0 {
            return Ok(1.0);
        }
        let p = &self.params;
        let shape = closed_form_shape(power * s, p.alpha);
        let csc = 1.0 / (2.0 * PI / p.alpha).sin();
        Ok((-2.0 * density * PI * PI * p.t_i * csc * shape).exp())
    }

    /// `L_{I_n}(s)` by double quadrature of the probability generating
    /// functional over `t in [-T_I, T_I]` and `u in [0, inf)`.
    pub fn laplace_numeric(&self, s: f64, network: Network) -> Result<f64> {
        check_s(s)?;
        let (density, power) = self.interferers(network);
        if density == 0.0 || power == 0.0 || s == 0.0 {
            return Ok(1.0);
        }
        let integral = self.pgfl_integral(
            -self.params.t_i,
            self.params.t_i,
            |x| x / (1.0 + x),
            s * power,
        )?;
        Ok((-2.0 * PI * density * integral).exp())
    }

    /// `int_{t0}^{t1} int_0^inf h(b chi(t) / (1 + u^alpha)) u du dt`, split at `t = 0`.
    pub(crate) fn pgfl_integral(
        &self,
        t0: f64,
        t1: f64,
        h: impl Fn(f64) -> f64,
        b: f64,
    ) -> Result<f64> {
        let p = &self.params;
        let failed = Cell::new(false);
        let inner_spec = self.quad.scaled(1e-3);
        let alpha = p.alpha;
        let t_i = p.t_i;
        let radial = |t: f64| -> f64 {
            let weight = b * chi(t, t_i);
            if weight == 0.0 {
                return 0.0;
            }
            let r = integrate_power_tail(
                |u: f64| h(weight / (1.0 + u.powf(alpha))) * u,
                0.0,
                alpha - 1.0,
                &inner_spec,
            );
            value_or_flag(r, &failed)
        };
        let mut total = 0.0;
        let knots = [t0, 0.0f64.clamp(t0, t1), t1];
        for w in knots.windows(2) {
            if w[1] > w[0] {
                let r = integrate_adaptive(radial, w[0], w[1], &inner_spec);
                total += value_or_flag(r, &failed);
            }
        }
        if failed.get() {
            return Err(Error::NonConvergence {
                estimate: total,
                abs_error: f64::NAN,
            });
        }
        Ok(total)
    }

    pub fn coverage_factors(&self, zeta: f64, link: Network) -> Result<CoverageFactors> {
        let s = self.s_value(zeta, link)?;
        Ok(CoverageFactors {
            s,
            primary_interference: self.laplace_closed(s, Network::Primary)?,
            secondary_interference: self.laplace_closed(s, Network::Secondary)?,
            noise: (-self.params.sigma2 * s).exp(),
        })
    }

    /// `p_n^c(zeta) = L_{I_1}(s) L_{I_2}(s) exp(-sigma^2 s)`.
    pub fn coverage_prob(&self, zeta: f64, link: Network) -> Result<f64> {
        Ok(self.coverage_factors(zeta, link)?.product())
    }

    /// Spectral efficiency used for throughput at threshold `zeta`.
    pub fn rate_at(&self, zeta: f64) -> f64 {
        self.params.rate.unwrap_or_else(|| (1.0 + zeta).log2())
    }

    /// `T_I R lambda p^c(zeta)` with `lambda_1` for the primary network and
    /// `lambda_2^a` for the secondary one.
    pub fn spatial_throughput(&self, zeta: f64, network: Network) -> Result<f64> {
        check_zeta(zeta)?;
        let density = match network {
            Network::Primary => self.params.lambda1,
            Network::Secondary => self.lambda2_active,
        };
        if density == 0.0 {
            return Ok(0.0);
        }
        Ok(self.params.t_i * self.rate_at(zeta) * density * self.coverage_prob(zeta, network)?)
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "coverage",
            reason: "SINR threshold must be positive and finite",
        })
    }
}

fn check_s(s: f64) -> Result<()> {
    if s >= 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            op: "laplace",
            reason: "s must be non-negative and finite",
        })
    }
}

/// `[(1 + b)^{2/alpha} (2b - alpha) + alpha] / (b (2 + alpha))`, switching to
/// its power series `(2b/alpha) sum_k C(2/alpha - 1, k) b^k / (k + 2)` for small
/// `b` where the bracket cancels.
pub(crate) fn closed_form_shape(b: f64, alpha: f64) -> f64 {
    if b < 0.05 {
        let p = 2.0 / alpha - 1.0;
        let mut coeff = 1.0;
        let mut power = 1.0;
        let mut sum = 0.0;
        for k in 0..40 {
            let term = coeff * power / (k as f64 + 2.0);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            coeff *= (p - k as f64) / (k as f64 + 1.0);
            power *= b;
        }
        2.0 * b / alpha * sum
    } else {
        ((1.0 + b).powf(2.0 / alpha) * (2.0 * b - alpha) + alpha) / (b * (2.0 + alpha))
    }
}
