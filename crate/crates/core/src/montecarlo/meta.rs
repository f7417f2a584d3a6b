use alloc::vec::Vec;

use super::{CoverageConfig, MonteCarlo, ReplicateRunner};
use crate::error::Result;
use crate::model::Network;

/// Sorted sample with its empirical complementary CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCcdf {
    sorted: Vec<f64>,
}

impl EmpiricalCcdf {
    /// NaNs are dropped.
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.retain(|v| !v.is_nan());
        samples.sort_by(f64::total_cmp);
        Self { sorted: samples }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples strictly above `x`.
    pub fn ccdf(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return f64::NAN;
        }
        let at_or_below = self.sorted.partition_point(|&v| v <= x);
        (self.sorted.len() - at_or_below) as f64 / self.sorted.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len() as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.sorted.iter().map(|v| v * v).sum::<f64>() / self.sorted.len() as f64
    }

    /// Kolmogorov-Smirnov distance to a continuous reference CCDF.
    pub fn ks_distance(&self, reference: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        let mut worst = 0.0f64;
        for (i, &v) in self.sorted.iter().enumerate() {
            let f = reference(v);
            // Empirical CCDF jumps from (n - i)/n to (n - i - 1)/n at v.
            let before = (n - i as f64) / n;
            let after = (n - i as f64 - 1.0) / n;
            worst = worst.max((f - before).abs()).max((f - after).abs());
        }
        worst
    }
}

impl<X: ReplicateRunner> MonteCarlo<X> {
    /// Empirical meta distribution: the conditional success probability of
    /// the typical `link` receiver over `n_geometries` realizations of the
    /// interferer positions and epochs. `n_fading` draws per geometry estimate
    /// it when some link is not Rayleigh; it is ignored otherwise.
    pub fn simulate_meta(
        &self,
        zeta: f64,
        link: Network,
        n_geometries: u64,
        n_fading: u32,
        cfg: &CoverageConfig,
    ) -> Result<EmpiricalCcdf> {
        let samples = self.conditional_samples(zeta, link, n_geometries, n_fading, cfg)?;
        Ok(EmpiricalCcdf::new(samples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::Analysis;
    use crate::meta::meta_from_moments;
    use crate::model::{db_to_linear, SystemParams};
    use crate::montecarlo::{FadingSpec, SecondaryProfile, SimWindow};
    use crate::numerics::QuadratureSpec;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ccdf_steps() {
        let e = EmpiricalCcdf::new(vec![0.3, 0.1, f64::NAN, 0.2, 0.4]);
        assert_eq!(e.len(), 4);
        assert_eq!(e.ccdf(0.0), 1.0);
        assert_eq!(e.ccdf(0.2), 0.5);
        assert_eq!(e.ccdf(0.4), 0.0);
        assert_abs_diff_eq!(e.mean(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(e.second_moment(), 0.075, epsilon = 1e-15);
    }

    #[test]
    fn ks_against_uniform() {
        let n = 1000;
        let e = EmpiricalCcdf::new((0..n).map(|i| (i as f64 + 0.5) / n as f64).collect());
        assert_abs_diff_eq!(e.ks_distance(|x| 1.0 - x), 0.5 / n as f64, epsilon = 1e-12);
    }

    #[test]
    fn moments_match_beta_inputs() {
        let p = SystemParams::default();
        let a = Analysis::run(p, QuadratureSpec::default()).unwrap();
        let w = SimWindow::coverage(&p, 25.0, 4, 7).unwrap();
        let cfg = CoverageConfig::rayleigh(SecondaryProfile::from(&a.link));
        let z = db_to_linear(-5.0);
        let e = MonteCarlo::new(p, w)
            .simulate_meta(z, Network::Primary, 20_000, 0, &cfg)
            .unwrap();
        let m = a.link.conditional_moments(z, Network::Primary).unwrap();
        assert_abs_diff_eq!(e.mean(), m.m1, epsilon = 0.01);
        assert_abs_diff_eq!(e.second_moment(), m.m2, epsilon = 0.01);
        assert!(e.ks_distance(|x| meta_from_moments(x, &m).unwrap()) < 0.05);
    }

    #[test]
    fn empty_network_is_a_point_mass() {
        let p = SystemParams::default()
            .with(|p| {
                p.lambda1 = 0.0;
                p.lambda2 = 0.0
            })
            .unwrap();
        let w = SimWindow::coverage(&p, 10.0, 1, 1).unwrap();
        let cfg = CoverageConfig::rayleigh(SecondaryProfile {
            power: 0.1,
            active_density: 0.0,
        });
        let e = MonteCarlo::new(p, w)
            .simulate_meta(0.1, Network::Primary, 1000, 0, &cfg)
            .unwrap();
        let s = 0.1 / p.link_gain() / p.p1;
        let q = (-p.sigma2 * s).exp();
        assert!(e.samples().iter().all(|&v| v == q));
        assert_eq!(e.ccdf(0.0), 1.0);
    }

    #[test]
    fn fading_average_needs_draws() {
        let p = SystemParams::default();
        let w = SimWindow::coverage(&p, 10.0, 1, 1).unwrap();
        let cfg = CoverageConfig::rayleigh(SecondaryProfile {
            power: 0.1,
            active_density: 0.1,
        })
        .with_desired(FadingSpec::rician(2.0).unwrap());
        let mc = MonteCarlo::new(p, w);
        assert!(mc
            .simulate_meta(0.1, Network::Primary, 10, 0, &cfg)
            .is_err());
        let e = mc
            .simulate_meta(0.1, Network::Primary, 50, 40, &cfg)
            .unwrap();
        assert!(e.samples().iter().all(|&q| (0.0..=1.0).contains(&q)));
        assert!(e
            .samples()
            .iter()
            .all(|&q| (q * 40.0 - (q * 40.0).round()).abs() < 1e-9));
    }
}
