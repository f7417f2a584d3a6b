use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::sampling::{poisson_count, uniform_disk, uniform_radius};
use super::{Accumulator, Estimate, MonteCarlo, ReplicateRunner, StreamTag};
use crate::model::{path_gain_unchecked, psi};

/// Joint and marginal access statistics of a secondary transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessEstimate {
    /// `P(E_H >= epsilon)`.
    pub energy: Estimate,
    /// No active primary receiver in the guard zone at the decision instant.
    pub void: Estimate,
    /// Both criteria met in the same realization.
    pub joint: Estimate,
}

impl AccessEstimate {
    /// `joint - energy * void`: the error of treating the two events as
    /// independent.
    pub fn dependence_gap(&self) -> f64 {
        self.joint.mean - self.energy.mean * self.void.mean
    }
}

impl<X: ReplicateRunner> MonteCarlo<X> {
    /// Mean harvested energy contributed by primaries outside the disk.
    fn far_field_energy(&self) -> f64 {
        let p = &self.params;
        2.0 * PI * p.lambda1 * p.p1 * p.t_e * p.t_i * self.far_gain(self.window.disk_radius)
    }

    /// Harvested energy of a transmitter at the origin whose harvesting slot is
    /// `[0, T_E]`, from primaries with epochs in the window.
    fn draw_energy(&self, rng: &mut ChaCha8Rng, far: f64) -> f64 {
        let p = &self.params;
        let w = &self.window;
        let n = poisson_count(p.lambda1 * w.area() * w.duration(), rng);
        let mut energy = far;
        for _ in 0..n {
            let r = uniform_radius(w.disk_radius, rng);
            let t = w.t_min + w.duration() * rng.random::<f64>();
            let h: f64 = Exp1.sample(rng);
            energy += h * path_gain_unchecked(r, p.alpha) * psi(t, p.t_e, p.t_i);
        }
        energy * p.p1
    }

    /// `n_samples` independent draws of the harvested energy `E_H`.
    ///
    /// The window should cover epochs `[-T_I, T_E]`.
    pub fn simulate_energy(&self, n_samples: u64) -> Vec<f64> {
        let far = self.far_field_energy() / self.params.p1;
        let chunks = self.run_chunks(StreamTag::Energy, n_samples, |rng, n| {
            (0..n)
                .map(|_| self.draw_energy(rng, far))
                .collect::<Vec<f64>>()
        });
        let mut out = Vec::with_capacity(n_samples as usize);
        for c in chunks {
            out.extend(c);
        }
        out
    }

    /// Empirical probability that no active primary receiver lies within
    /// `rho` of the origin at decision instant 0. Primaries active at 0 started
    /// in `[-T_I, 0]`; each receiver sits at distance `d` from its transmitter
    /// in a uniform direction.
    pub fn simulate_guard_void(&self, n_samples: u64) -> Estimate {
        let p = self.params;
        let w = self.window;
        let reach = w.disk_radius.min(p.rho + p.d);
        let mean = p.lambda1 * PI * reach * reach * w.duration();
        let rho2 = p.rho * p.rho;
        let chunks = self.run_chunks(StreamTag::GuardVoid, n_samples, |rng, n| {
            let mut acc = Accumulator::default();
            for _ in 0..n {
                let count = poisson_count(mean, rng);
                let mut void = true;
                for _ in 0..count {
                    let (x, y) = uniform_disk(reach, rng);
                    let t = w.t_min + w.duration() * rng.random::<f64>();
                    let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
                    if (-p.t_i..=0.0).contains(&t) {
                        let (rx, ry) = (x + p.d * c, y + p.d * s);
                        if rx * rx + ry * ry < rho2 {
                            void = false;
                        }
                    }
                }
                acc.push(if void { 1.0 } else { 0.0 });
            }
            acc
        });
        reduce(&chunks).estimate()
    }

    /// Energy criterion, guard-zone criterion and their conjunction for a
    /// secondary at the origin that harvests over `[0, T_E]` and decides at
    /// `T_E`, all against one primary realization. The window should cover
    /// epochs `[-T_I, T_E]`.
    pub fn simulate_access(&self, n_samples: u64) -> AccessEstimate {
        let p = self.params;
        let w = self.window;
        let far = self.far_field_energy();
        let mean = p.lambda1 * w.area() * w.duration();
        let rho2 = p.rho * p.rho;
        let decide = p.t_e;
        let chunks = self.run_chunks(StreamTag::Access, n_samples, |rng, n| {
            let mut acc = [Accumulator::default(); 3];
            for _ in 0..n {
                let count = poisson_count(mean, rng);
                let mut energy = far;
                let mut void = true;
                for _ in 0..count {
                    let (x, y) = uniform_disk(w.disk_radius, rng);
                    let t = w.t_min + w.duration() * rng.random::<f64>();
                    let h: f64 = Exp1.sample(rng);
                    let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
                    energy +=
                        p.p1 * h * path_gain_unchecked(x.hypot(y), p.alpha) * psi(t, p.t_e, p.t_i);
                    if t >= decide - p.t_i && t <= decide {
                        let (rx, ry) = (x + p.d * c, y + p.d * s);
                        if rx * rx + ry * ry < rho2 {
                            void = false;
                        }
                    }
                }
                let charged = energy >= p.epsilon;
                acc[0].push(f64::from(u8::from(charged)));
                acc[1].push(f64::from(u8::from(void)));
                acc[2].push(f64::from(u8::from(charged && void)));
            }
            acc
        });
        let mut total = [Accumulator::default(); 3];
        for c in &chunks {
            for (t, a) in total.iter_mut().zip(c) {
                t.merge(a);
            }
        }
        AccessEstimate {
            energy: total[0].estimate(),
            void: total[1].estimate(),
            joint: total[2].estimate(),
        }
    }
}

pub(super) fn reduce(chunks: &[Accumulator]) -> Accumulator {
    let mut total = Accumulator::default();
    for c in chunks {
        total.merge(c);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::EnergyLaw;
    use crate::model::{ParamSet, SystemParams};
    use crate::montecarlo::SimWindow;
    use crate::numerics::QuadratureSpec;
    use approx::assert_abs_diff_eq;

    fn params(edit: impl FnOnce(&mut ParamSet)) -> SystemParams {
        SystemParams::default().with(edit).unwrap()
    }

    #[test]
    fn no_primaries_no_energy() {
        let p = params(|p| p.lambda1 = 0.0);
        let mc = MonteCarlo::new(p, SimWindow::energy(&p, 20.0, 2, 1).unwrap());
        assert!(mc.simulate_energy(500).iter().all(|&e| e == 0.0));
    }

    #[test]
    fn sample_mean_tracks_closed_form() {
        let p = params(|_| {});
        let mc = MonteCarlo::new(p, SimWindow::energy(&p, 25.0, 4, 2).unwrap());
        let draws = mc.simulate_energy(100_000);
        assert_eq!(draws.len(), 100_000);
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let exact = EnergyLaw::new(p, QuadratureSpec::default()).mean_harvested_energy();
        assert_abs_diff_eq!(mean, exact, epsilon = 0.03 * exact);
    }

    #[test]
    fn guard_void_edge_cases() {
        let p = params(|p| p.rho = 0.0);
        let w = SimWindow::new(20.0, -p.t_i, p.t_i, 2, 3).unwrap();
        assert_eq!(MonteCarlo::new(p, w).simulate_guard_void(2000).mean, 1.0);
        let p = params(|p| p.lambda1 = 0.0);
        assert_eq!(MonteCarlo::new(p, w).simulate_guard_void(2000).mean, 1.0);
    }

    #[test]
    fn guard_void_matches_closed_form() {
        let p = params(|_| {});
        let w = SimWindow::new(20.0, -p.t_i, p.t_i, 4, 5).unwrap();
        let est = MonteCarlo::new(p, w).simulate_guard_void(40_000);
        assert_abs_diff_eq!(est.mean, (-0.2 * PI).exp(), epsilon = 0.01);
    }

    #[test]
    fn access_marginals_are_consistent() {
        let p = params(|_| {});
        let w = SimWindow::energy(&p, 20.0, 2, 8).unwrap();
        let a = MonteCarlo::new(p, w).simulate_access(20_000);
        assert!(a.joint.mean <= a.energy.mean.min(a.void.mean));
        assert_abs_diff_eq!(a.void.mean, (-0.2 * PI).exp(), epsilon = 0.02);
    }
}
