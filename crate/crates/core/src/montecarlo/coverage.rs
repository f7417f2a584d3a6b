use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::energy::reduce;
use super::sampling::{poisson_count, uniform_disk, uniform_radius, FadingSpec};
use super::{Accumulator, Estimate, MonteCarlo, ReplicateRunner, SecondaryProfile, StreamTag};
use crate::error::{Error, Result};
use crate::model::{chi, path_gain_unchecked, psi, Network};

/// Fading of the interfering links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterfererFading {
    /// Unit-mean exponential power gains.
    #[default]
    Rayleigh,
    /// The same law as the desired link.
    SameAsDesired,
}

/// Transmit power of a secondary that passed both access checks in a
/// coupled run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerMode {
    /// The average power `P_2` of the profile, as in the analysis.
    #[default]
    Average,
    /// Its own harvested energy spent over the slot, `min(E_H, E_sat) / T_I`.
    Realized,
}

/// How active secondaries are generated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Coupling {
    /// Independent thinned process of density `lambda_2 pi_s`.
    #[default]
    Independent,
    /// Every secondary harvests from and senses the sampled primaries.
    /// Primaries within `harvest_radius` of a secondary are summed exactly;
    /// the rest contribute their mean.
    Coupled {
        power: PowerMode,
        harvest_radius: f64,
    },
}

/// What the coverage simulator needs beyond the system parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageConfig {
    /// Power and density of the active secondary transmitters.
    pub secondary: SecondaryProfile,
    /// Fading of the desired link.
    pub desired: FadingSpec,
    pub interferers: InterfererFading,
    pub coupling: Coupling,
}

impl CoverageConfig {
    pub fn rayleigh(secondary: SecondaryProfile) -> Self {
        Self {
            secondary,
            desired: FadingSpec::rayleigh(),
            interferers: InterfererFading::Rayleigh,
            coupling: Coupling::Independent,
        }
    }

    pub fn with_desired(self, desired: FadingSpec) -> Self {
        Self { desired, ..self }
    }

    pub fn with_interferers(self, interferers: InterfererFading) -> Self {
        Self {
            interferers,
            ..self
        }
    }

    pub fn coupled(self, power: PowerMode, harvest_radius: f64) -> Self {
        Self {
            coupling: Coupling::Coupled {
                power,
                harvest_radius,
            },
            ..self
        }
    }

    fn interferer_fading(&self) -> FadingSpec {
        match self.interferers {
            InterfererFading::Rayleigh => FadingSpec::rayleigh(),
            InterfererFading::SameAsDesired => self.desired,
        }
    }

    fn all_rayleigh(&self) -> bool {
        self.desired.is_rayleigh() && self.interferer_fading().is_rayleigh()
    }

    fn link_power(&self, p1: f64, link: Network) -> Result<f64> {
        let power = match link {
            Network::Primary => p1,
            Network::Secondary => self.secondary.power,
        };
        if power > 0.0 {
            Ok(power)
        } else {
            Err(Error::SecondaryUnpowered)
        }
    }

    fn check(&self) -> Result<()> {
        if let Coupling::Coupled { harvest_radius, .. } = self.coupling {
            if !(harvest_radius > 0.0 && harvest_radius.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "harvest_radius",
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(())
    }
}

/// Interference weights `P g(r) chi(t)` seen by the typical receiver in one
/// realization, and the mean contribution of everything beyond the disk.
struct Geometry {
    weights: Vec<f64>,
    far: f64,
}

impl Geometry {
    /// Realized interference with freshly drawn fades.
    fn interference<R: Rng + ?Sized>(&self, fading: &FadingSpec, rng: &mut R) -> f64 {
        self.weights
            .iter()
            .map(|w| w * fading.sample(rng))
            .sum::<f64>()
            + self.far
    }

    /// `exp(-s (noise + far)) prod_i 1 / (1 + s w_i)`: success probability
    /// given the geometry when all fading is Rayleigh.
    fn rayleigh_success(&self, s: f64, noise: f64) -> f64 {
        let log: f64 = self.weights.iter().map(|w| (s * w).ln_1p()).sum();
        (-s * (noise + self.far) - log).exp()
    }
}

/// Primary transmitter with the position of its receiver.
#[derive(Debug, Clone, Copy)]
struct Primary {
    x: f64,
    y: f64,
    epoch: f64,
    rx: f64,
    ry: f64,
}

/// Uniform bucket grid over a square for fixed-radius neighbour queries.
struct Grid {
    origin: f64,
    cell: f64,
    side: usize,
    starts: Vec<usize>,
    items: Vec<usize>,
}

impl Grid {
    fn new(points: &[Primary], half_width: f64, cell: f64) -> Self {
        let side = ((2.0 * half_width / cell).ceil() as usize).max(1);
        let origin = -half_width;
        let index = |p: &Primary| -> usize {
            let cx = (((p.x - origin) / cell) as usize).min(side - 1);
            let cy = (((p.y - origin) / cell) as usize).min(side - 1);
            cy * side + cx
        };
        let mut starts = alloc::vec![0usize; side * side + 1];
        for p in points {
            starts[index(p) + 1] += 1;
        }
        for k in 1..starts.len() {
            starts[k] += starts[k - 1];
        }
        let mut fill = starts.clone();
        let mut items = alloc::vec![0usize; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = index(p);
            items[fill[c]] = i;
            fill[c] += 1;
        }
        Self {
            origin,
            cell,
            side,
            starts,
            items,
        }
    }

    /// Indices of points in the 3x3 block of cells around `(x, y)`, which
    /// contains every point within one cell width.
    fn near(&self, x: f64, y: f64, mut visit: impl FnMut(usize)) {
        let cell_of = |v: f64| -> isize { ((v - self.origin) / self.cell).floor() as isize };
        let (cx, cy) = (cell_of(x), cell_of(y));
        let last = self.side as isize - 1;
        for gy in (cy - 1).max(0)..=(cy + 1).min(last) {
            for gx in (cx - 1).max(0)..=(cx + 1).min(last) {
                let c = gy as usize * self.side + gx as usize;
                for &i in &self.items[self.starts[c]..self.starts[c + 1]] {
                    visit(i);
                }
            }
        }
    }
}

impl<X: ReplicateRunner> MonteCarlo<X> {
    fn draw_geometry(&self, cfg: &CoverageConfig, rng: &mut ChaCha8Rng) -> Geometry {
        match cfg.coupling {
            Coupling::Independent => self.draw_independent(cfg, rng),
            Coupling::Coupled {
                power,
                harvest_radius,
            } => self.draw_coupled(cfg, power, harvest_radius, rng),
        }
    }

    fn draw_independent(&self, cfg: &CoverageConfig, rng: &mut ChaCha8Rng) -> Geometry {
        let p = &self.params;
        let w = &self.window;
        let g = self.far_gain(w.disk_radius);
        let mut geo = Geometry {
            weights: Vec::new(),
            far: 2.0
                * PI
                * p.t_i
                * g
                * (p.lambda1 * p.p1 + cfg.secondary.active_density * cfg.secondary.power),
        };
        let tiers = [
            (p.lambda1, p.p1),
            (cfg.secondary.active_density, cfg.secondary.power),
        ];
        for (density, power) in tiers {
            let n = poisson_count(density * w.area() * w.duration(), rng);
            for _ in 0..n {
                let r = uniform_radius(w.disk_radius, rng);
                let t = w.t_min + w.duration() * rng.random::<f64>();
                geo.weights
                    .push(power * path_gain_unchecked(r, p.alpha) * chi(t, p.t_i));
            }
        }
        geo
    }

    /// Primaries on the disk of radius `R + harvest_radius` with epochs early
    /// enough to feed any harvest window; secondaries on the disk of radius
    /// `R` with epochs in `[-T_I, T_I]`, each deciding at its own epoch.
    fn draw_coupled(
        &self,
        cfg: &CoverageConfig,
        mode: PowerMode,
        harvest_radius: f64,
        rng: &mut ChaCha8Rng,
    ) -> Geometry {
        let p = self.params;
        let radius = self.window.disk_radius;
        let reach = harvest_radius.max(p.rho + p.d);
        let outer = radius + reach;
        let (t0, t1) = (-2.0 * p.t_i - p.t_e, p.t_i);

        let n1 = poisson_count(p.lambda1 * PI * outer * outer * (t1 - t0), rng);
        let mut primaries = Vec::with_capacity(n1);
        for _ in 0..n1 {
            let (x, y) = uniform_disk(outer, rng);
            let epoch = t0 + (t1 - t0) * rng.random::<f64>();
            let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
            primaries.push(Primary {
                x,
                y,
                epoch,
                rx: x + p.d * c,
                ry: y + p.d * s,
            });
        }

        let far_secondary =
            cfg.secondary.active_density * cfg.secondary.power * self.far_gain(radius);
        let mut geo = Geometry {
            weights: Vec::new(),
            far: 2.0 * PI * p.t_i * (p.lambda1 * p.p1 * self.far_gain(outer) + far_secondary),
        };
        for q in &primaries {
            if q.epoch >= -p.t_i {
                geo.weights.push(
                    p.p1 * path_gain_unchecked(q.x.hypot(q.y), p.alpha) * chi(q.epoch, p.t_i),
                );
            }
        }

        let grid = Grid::new(&primaries, outer, reach);
        let far_energy = 2.0 * PI * p.lambda1 * p.t_e * p.t_i * self.far_gain(reach);
        let rho2 = p.rho * p.rho;
        let reach2 = reach * reach;
        let n2 = poisson_count(p.lambda2 * PI * radius * radius * 2.0 * p.t_i, rng);
        for _ in 0..n2 {
            let (x, y) = uniform_disk(radius, rng);
            let tau = -p.t_i + 2.0 * p.t_i * rng.random::<f64>();
            let start = tau - p.t_e;
            let mut energy = far_energy;
            let mut void = true;
            grid.near(x, y, |i| {
                let q = &primaries[i];
                let d2 = (q.x - x).powi(2) + (q.y - y).powi(2);
                if d2 > reach2 {
                    return;
                }
                let overlap = psi(q.epoch - start, p.t_e, p.t_i);
                if overlap > 0.0 {
                    let h: f64 = Exp1.sample(rng);
                    energy += h * path_gain_unchecked(d2.sqrt(), p.alpha) * overlap;
                }
                let active = q.epoch >= tau - p.t_i && q.epoch <= tau;
                if active && (q.rx - x).powi(2) + (q.ry - y).powi(2) < rho2 {
                    void = false;
                }
            });
            energy *= p.p1;
            if energy >= p.epsilon && void {
                let power = match mode {
                    PowerMode::Average => cfg.secondary.power,
                    PowerMode::Realized => energy.min(p.e_sat) / p.t_i,
                };
                geo.weights
                    .push(power * path_gain_unchecked(x.hypot(y), p.alpha) * chi(tau, p.t_i));
            }
        }
        geo
    }

    /// Empirical coverage `P(SINR >= zeta)` of the typical `link` receiver.
    /// The window should cover epochs `[-T_I, T_I]`.
    pub fn simulate_coverage(
        &self,
        zeta: f64,
        link: Network,
        n_samples: u64,
        cfg: &CoverageConfig,
    ) -> Result<Estimate> {
        Ok(self.simulate_coverage_curve(&[zeta], link, n_samples, cfg)?[0])
    }

    /// Coverage at every threshold in `zetas`, reusing each realization.
    ///
    /// With Rayleigh fading everywhere the estimator averages the exact
    /// conditional success probability given the geometry. Otherwise the
    /// desired fade is compared with the realized interference directly.
    pub fn simulate_coverage_curve(
        &self,
        zetas: &[f64],
        link: Network,
        n_samples: u64,
        cfg: &CoverageConfig,
    ) -> Result<Vec<Estimate>> {
        let s = self.s_values(zetas, link, cfg)?;
        let noise = self.params.sigma2;
        let rayleigh = cfg.all_rayleigh();
        let fading = cfg.interferer_fading();
        let chunks = self.run_chunks(StreamTag::Coverage, n_samples, |rng, n| {
            let mut acc = alloc::vec![Accumulator::default(); s.len()];
            for _ in 0..n {
                let g = self.draw_geometry(cfg, rng);
                if rayleigh {
                    for (a, &sk) in acc.iter_mut().zip(&s) {
                        a.push(g.rayleigh_success(sk, noise));
                    }
                } else {
                    let interference = g.interference(&fading, rng);
                    let h0 = cfg.desired.sample(rng);
                    for (a, &sk) in acc.iter_mut().zip(&s) {
                        a.push(f64::from(u8::from(h0 >= sk * (interference + noise))));
                    }
                }
            }
            acc
        });
        Ok((0..s.len())
            .map(|k| {
                let column: Vec<Accumulator> = chunks.iter().map(|c| c[k]).collect();
                reduce(&column).estimate()
            })
            .collect())
    }

    /// Conditional success probability `q^c(zeta)` for each of `n_geometries`
    /// realizations. Exact under Rayleigh fading; otherwise the fraction of
    /// `n_fading` fading draws that succeed.
    pub(crate) fn conditional_samples(
        &self,
        zeta: f64,
        link: Network,
        n_geometries: u64,
        n_fading: u32,
        cfg: &CoverageConfig,
    ) -> Result<Vec<f64>> {
        let s = self.s_values(&[zeta], link, cfg)?[0];
        let rayleigh = cfg.all_rayleigh();
        if !rayleigh && n_fading == 0 {
            return Err(Error::InvalidParameter {
                name: "n_fading",
                reason: "at least one fading draw per geometry is required",
            });
        }
        let noise = self.params.sigma2;
        let fading = cfg.interferer_fading();
        let chunks = self.run_chunks(StreamTag::Meta, n_geometries, |rng, n| {
            let mut out = Vec::with_capacity(n as usize);
            for _ in 0..n {
                let g = self.draw_geometry(cfg, rng);
                let q = if rayleigh {
                    g.rayleigh_success(s, noise)
                } else {
                    let hits = (0..n_fading)
                        .filter(|_| {
                            let interference = g.interference(&fading, rng);
                            cfg.desired.sample(rng) >= s * (interference + noise)
                        })
                        .count();
                    hits as f64 / f64::from(n_fading)
                };
                out.push(q);
            }
            out
        });
        Ok(chunks.into_iter().flatten().collect())
    }

    fn s_values(&self, zetas: &[f64], link: Network, cfg: &CoverageConfig) -> Result<Vec<f64>> {
        cfg.check()?;
        if zetas.iter().any(|z| !(*z > 0.0 && z.is_finite())) {
            return Err(Error::Domain {
                op: "simulate_coverage",
                reason: "SINR threshold must be positive and finite",
            });
        }
        let p = &self.params;
        let power = cfg.link_power(p.p1, link)?;
        Ok(zetas.iter().map(|z| z / p.link_gain() / power).collect())
    }
}
