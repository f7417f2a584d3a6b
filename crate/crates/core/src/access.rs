//! Secondary channel access: guard-zone void probability, transmit
//! probability and the density of active secondary transmitters.

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use crate::energy::EnergyLaw;
use crate::error::Result;
use crate::model::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessResult {
    /// No active primary receiver inside the guard zone.
    pub pi_rho: f64,
    /// Enough energy harvested.
    pub pi_eps: f64,
    /// `pi_eps * pi_rho`.
    pub pi_s: f64,
    /// `lambda_2 * pi_s`.
    pub lambda2_active: f64,
}

/// `pi_rho = exp(-lambda_1 T_I pi rho^2)`: primary receivers active at the
/// decision instant form a PPP of density `lambda_1 T_I`.
pub fn guard_zone_void_prob(params: &SystemParams) -> f64 {
    (-params.lambda1 * params.t_i * core::f64::consts::PI * params.rho * params.rho).exp()
}

impl AccessResult {
    /// Combine an energy coverage value with the guard-zone term, treating the
    /// two events as independent.
    pub fn from_energy_coverage(params: &SystemParams, pi_eps: f64) -> Self {
        let pi_rho = guard_zone_void_prob(params);
        let pi_s = (pi_eps * pi_rho).clamp(0.0, 1.0);
        Self {
            pi_rho,
            pi_eps,
            pi_s,
            lambda2_active: params.lambda2 * pi_s,
        }
    }
}

pub fn analyze_access(energy: &EnergyLaw) -> Result<AccessResult> {
    let params = energy.params();
    let pi_eps = energy.energy_ccdf(params.epsilon)?;
    Ok(AccessResult::from_energy_coverage(params, pi_eps))
}

/// `pi_s = pi(epsilon) * pi_rho`.
pub fn transmit_prob(energy: &EnergyLaw) -> Result<f64> {
    Ok(analyze_access(energy)?.pi_s)
}

/// `lambda_2^a = lambda_2 * pi_s`.
pub fn active_secondary_density(energy: &EnergyLaw) -> Result<f64> {
    Ok(analyze_access(energy)?.lambda2_active)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ParamSet;
    use crate::numerics::QuadratureSpec;
    use approx::assert_abs_diff_eq;

    fn params(edit: impl FnOnce(&mut ParamSet)) -> SystemParams {
        SystemParams::default().with(edit).unwrap()
    }

    fn law(edit: impl FnOnce(&mut ParamSet)) -> EnergyLaw {
        EnergyLaw::new(params(edit), QuadratureSpec::default())
    }

    #[test]
    fn void_probability_examples() {
        assert_eq!(guard_zone_void_prob(&params(|p| p.rho = 0.0)), 1.0);
        assert_eq!(guard_zone_void_prob(&params(|p| p.lambda1 = 0.0)), 1.0);
        let v = guard_zone_void_prob(&params(|p| {
            p.lambda1 = 0.1;
            p.t_i = 0.5;
            p.rho = 2.0
        }));
        assert_abs_diff_eq!(v, (-0.2 * core::f64::consts::PI).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.5335, epsilon = 1e-4);
    }

    #[test]
    fn void_probability_strictly_decreasing() {
        let grid = [0.5, 1.0, 1.5, 2.0, 3.0];
        for w in grid.windows(2) {
            assert!(
                guard_zone_void_prob(&params(|p| p.rho = w[1]))
                    < guard_zone_void_prob(&params(|p| p.rho = w[0]))
            );
            assert!(
                guard_zone_void_prob(&params(|p| p.lambda1 = w[1]))
                    < guard_zone_void_prob(&params(|p| p.lambda1 = w[0]))
            );
            assert!(
                guard_zone_void_prob(&params(|p| p.t_i = w[1]))
                    < guard_zone_void_prob(&params(|p| p.t_i = w[0]))
            );
        }
    }

    #[test]
    fn transmit_prob_without_guard_zone_is_energy_coverage() {
        let l = law(|p| p.rho = 0.0);
        assert_abs_diff_eq!(
            transmit_prob(&l).unwrap(),
            l.energy_ccdf(0.1).unwrap(),
            epsilon = 1e-15
        );
        assert!(transmit_prob(&law(|p| p.p1 = 1e-9)).unwrap() < 1e-6);
    }

    #[test]
    fn access_result_invariants() {
        let a = analyze_access(&law(|_| {})).unwrap();
        assert_abs_diff_eq!(a.pi_s, a.pi_eps * a.pi_rho, epsilon = 1e-15);
        assert!(a.pi_s <= a.pi_eps.min(a.pi_rho));
        assert!(a.lambda2_active > 0.0 && a.lambda2_active < 1.0);
        let r = AccessResult::from_energy_coverage(&params(|p| p.rho = 0.0), 0.4);
        assert_abs_diff_eq!(r.lambda2_active, 0.4, epsilon = 1e-15);
        let z = AccessResult::from_energy_coverage(&params(|_| {}), 0.0);
        assert_eq!(z.lambda2_active, 0.0);
    }

    #[test]
    fn larger_guard_zone_never_helps() {
        let mut prev = f64::INFINITY;
        for &rho in &[0.0, 1.0, 2.0, 3.0] {
            let v = transmit_prob(&law(|p| p.rho = rho)).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }
}
