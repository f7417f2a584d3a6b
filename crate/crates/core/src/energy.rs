//! Harvested-energy law: characteristic function, energy coverage (CCDF),
//! mean harvested energy and the resulting average secondary transmit power.
//!
//! Only primary transmissions feed the harvester; secondary transmissions are
//! treated as negligible RF sources.

use core::cell::Cell;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{psi, psi_breakpoints, SystemParams};
use crate::numerics::{
    gil_pelaez_ccdf, integrate_adaptive, integrate_power_tail, value_or_flag, QuadratureSpec,
};

/// How the radial (u) integral inside the characteristic function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyKernel {
    /// `int_0^inf a u / (1 + a + u^alpha) du = (pi/alpha) csc(2 pi/alpha) a (1 + a)^(2/alpha - 1)`
    /// evaluated in closed form (principal branch, `Re(1 + a) = 1`).
    #[default]
    Analytic,
    /// Direct semi-infinite quadrature of the radial integral at every time node.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLaw {
    params: SystemParams,
    quad: QuadratureSpec,
    kernel: EnergyKernel,
}

/// Energy coverage at the activation and saturation thresholds together with
/// the average power they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyProfile {
    /// `pi(epsilon)`.
    pub pi_eps: f64,
    /// `pi(E_sat)`.
    pub pi_sat: f64,
    /// `E[E_H]`, J.
    pub mean_energy: f64,
    /// Average secondary transmit power `P_2`, W.
    pub p2: f64,
}

impl EnergyLaw {
    pub fn new(params: SystemParams, quad: QuadratureSpec) -> Self {
        Self {
            params,
            quad,
            kernel: EnergyKernel::default(),
        }
    }

    pub fn with_kernel(mut self, kernel: EnergyKernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// `E[e^{i z E_H}]`.
    pub fn char_fn(&self, z: f64) -> Result<Complex64> {
        let failed = Cell::new(false);
        let value = self.char_fn_flagged(z, &failed);
        if failed.get() {
            Err(Error::NonConvergence {
                estimate: f64::NAN,
                abs_error: f64::NAN,
            })
        } else {
            Ok(value)
        }
    }

    fn char_fn_flagged(&self, z: f64, failed: &Cell<bool>) -> Complex64 {
        let p = &self.params;
        if z == 0.0 || p.lambda1 == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let power = z * p.p1;
        let inner_spec = self.quad.scaled(0.01);

        // Radial integral at time offset t, without the 2 pi lambda_1 factor.
        let radial = |t: f64| -> Complex64 {
            let a = Complex64::new(0.0, -power * psi(t, p.t_e, p.t_i));
            if a.im == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            match self.kernel {
                EnergyKernel::Analytic => {
                    let exponent = 2.0 / p.alpha - 1.0;
                    a * (a + 1.0).powf(exponent) * p.radial_constant()
                }
                EnergyKernel::Quadrature => {
                    let alpha = p.alpha;
                    let r = integrate_power_tail(
                        |u: f64| a * u / (a + 1.0 + u.powf(alpha)),
                        0.0,
                        alpha - 1.0,
                        &inner_spec,
                    );
                    value_or_flag(r, failed)
                }
            }
        };

        let knots = psi_breakpoints(p.t_e, p.t_i);
        let mut total = Complex64::new(0.0, 0.0);
        for w in knots.windows(2) {
            if w[1] > w[0] {
                total += value_or_flag(integrate_adaptive(radial, w[0], w[1], &inner_spec), failed);
            }
        }
        (total * (-2.0 * core::f64::consts::PI * p.lambda1)).exp()
    }

    /// Energy coverage `pi(threshold) = P(E_H > threshold)`.
    pub fn energy_ccdf(&self, threshold: f64) -> Result<f64> {
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(Error::Domain {
                op: "energy_ccdf",
                reason: "threshold must be positive and finite",
            });
        }
        let failed = Cell::new(false);
        let p = gil_pelaez_ccdf(|z| self.char_fn_flagged(z, &failed), threshold, &self.quad)?;
        if failed.get() {
            return Err(Error::NonConvergence {
                estimate: p,
                abs_error: f64::NAN,
            });
        }
        Ok(p)
    }

    /// `E[E_H] = 2 pi^2 lambda_1 T_E T_I (P_1 / alpha) csc(2 pi / alpha)`.
    pub fn mean_harvested_energy(&self) -> f64 {
        let p = &self.params;
        2.0 * core::f64::consts::PI * p.lambda1 * p.p1 * p.t_e * p.t_i * p.radial_constant()
    }

    pub fn profile(&self) -> Result<EnergyProfile> {
        let p = &self.params;
        let pi_eps = self.energy_ccdf(p.epsilon)?;
        let pi_sat = self.energy_ccdf(p.e_sat)?;
        let mean_energy = self.mean_harvested_energy();
        Ok(EnergyProfile {
            pi_eps,
            pi_sat,
            mean_energy,
            p2: secondary_power(mean_energy, pi_eps, pi_sat, p.e_sat, p.t_i),
        })
    }

    /// `P_2 = E[p]`: the middle tier transmits `E[E_H] / T_I` with probability
    /// `pi(epsilon) - pi(E_sat)`, the saturated tier `E_sat / T_I` with
    /// probability `pi(E_sat)`.
    pub fn avg_secondary_power(&self) -> Result<f64> {
        Ok(self.profile()?.p2)
    }
}

/// The three-tier power law averaged over `E_H`.
pub fn secondary_power(mean_energy: f64, pi_eps: f64, pi_sat: f64, e_sat: f64, t_i: f64) -> f64 {
    let middle = (pi_eps - pi_sat).max(0.0);
    mean_energy / t_i * middle + e_sat / t_i * pi_sat
}
