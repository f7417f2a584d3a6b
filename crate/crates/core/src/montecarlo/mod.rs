//! Monte Carlo simulator of the same network model, used as an independent
//! oracle for every analytical quantity.
//!
//! Each run is split into `replicates` chunks. Chunk `k` draws from its own
//! ChaCha stream derived from `(master_seed, operation, k)`, and the chunk
//! results are reduced in chunk order, so the outcome does not depend on how
//! a [`ReplicateRunner`] schedules the chunks.
//!
//! Points are sampled inside a disk of radius `disk_radius`. The mean
//! contribution of the (infinite) remainder of the plane is added back in
//! closed form through Campbell's theorem ("far field"), which removes the
//! dominant truncation bias; its fluctuation is of order `R^-4` for
//! `alpha = 3` and is neglected.

mod coverage;
mod energy;
mod meta;
mod sampling;

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coverage::LinkAnalysis;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::numerics::{integrate_power_tail, QuadratureSpec};

pub use coverage::{Coupling, CoverageConfig, InterfererFading, PowerMode};
pub use energy::AccessEstimate;
pub use meta::EmpiricalCcdf;
pub use sampling::{sample_tsppp, FadingKind, FadingSpec, TsPoint};

/// Finite space-time observation window and run controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimWindow {
    pub disk_radius: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub replicates: u32,
    pub master_seed: u64,
}

impl SimWindow {
    pub fn new(
        disk_radius: f64,
        t_min: f64,
        t_max: f64,
        replicates: u32,
        master_seed: u64,
    ) -> Result<Self> {
        if !(disk_radius > 0.0 && disk_radius.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "disk_radius",
                reason: "must be positive and finite",
            });
        }
        if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t_min",
                reason: "time window must satisfy t_min < t_max",
            });
        }
        if replicates == 0 {
            return Err(Error::InvalidParameter {
                name: "replicates",
                reason: "at least one replicate is required",
            });
        }
        Ok(Self {
            disk_radius,
            t_min,
            t_max,
            replicates,
            master_seed,
        })
    }

    /// Epochs on `[-T_I, T_E]`: every primary that overlaps the harvesting slot.
    pub fn energy(
        params: &SystemParams,
        disk_radius: f64,
        replicates: u32,
        master_seed: u64,
    ) -> Result<Self> {
        Self::new(
            disk_radius,
            -params.t_i,
            params.t_e,
            replicates,
            master_seed,
        )
    }

    /// Epochs on `[-T_I, T_I]`: every transmitter that overlaps the typical slot.
    pub fn coverage(
        params: &SystemParams,
        disk_radius: f64,
        replicates: u32,
        master_seed: u64,
    ) -> Result<Self> {
        Self::new(
            disk_radius,
            -params.t_i,
            params.t_i,
            replicates,
            master_seed,
        )
    }

    pub fn duration(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn area(&self) -> f64 {
        PI * self.disk_radius * self.disk_radius
    }

    pub fn with_radius(self, disk_radius: f64) -> Self {
        Self {
            disk_radius,
            ..self
        }
    }

    pub fn with_seed(self, master_seed: u64) -> Self {
        Self {
            master_seed,
            ..self
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    /// `|mean - reference|` in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference).abs() / self.stderr
        }
    }
}

/// Running sums for a sample mean. Merging is done in a fixed order by the
/// caller so results are bit-reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Accumulator {
    #[inline]
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn estimate(&self) -> Estimate {
        let n = self.count as f64;
        if self.count == 0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = self.sum / n;
        let var = if self.count > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            stderr: num_traits::Float::sqrt(var / n),
            samples: self.count,
        }
    }
}

/// Executes independent replicate chunks and returns their results in chunk
/// order.
pub trait ReplicateRunner: Sync {
    fn map<T, F>(&self, count: u32, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u32) -> T + Sync + Send;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ReplicateRunner for Sequential {
    fn map<T, F>(&self, count: u32, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u32) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}

/// Identifies the simulated quantity so that different operations with the
/// same master seed use unrelated streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum StreamTag {
    Energy = 1,
    GuardVoid = 2,
    Access = 3,
    Coverage = 4,
    Meta = 5,
    Points = 6,
}

/// Deterministic per-chunk generator.
pub fn stream_rng(master_seed: u64, tag: u64, replicate: u32) -> ChaCha8Rng {
    let mixed = master_seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    rng.set_stream(replicate as u64);
    rng
}

/// Number of samples handled by chunk `k` when `total` is split over `chunks`.
pub fn chunk_size(total: u64, chunks: u32, k: u32) -> u64 {
    let chunks = chunks as u64;
    let base = total / chunks;
    base + u64::from((k as u64) < total % chunks)
}

/// `int_R^inf u / (1 + u^alpha) du`: path gain mass beyond the disk.
pub fn far_field_gain(alpha: f64, radius: f64) -> f64 {
    let spec = QuadratureSpec::new(1e-13, 1e-11, 2000).expect("valid constants");
    let r = integrate_power_tail(
        |u: f64| u / (1.0 + num_traits::Float::powf(u, alpha)),
        radius,
        alpha - 1.0,
        &spec,
    );
    match r {
        Ok(i) => i.value,
        Err(e) => e.best().value,
    }
}

/// Density and average power of the active secondary transmitters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondaryProfile {
    pub power: f64,
    pub active_density: f64,
}

impl From<&LinkAnalysis> for SecondaryProfile {
    fn from(link: &LinkAnalysis) -> Self {
        Self {
            power: link.p2(),
            active_density: link.lambda2_active(),
        }
    }
}

/// Simulator bound to one parameter set and window.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo<X: ReplicateRunner = Sequential> {
    params: SystemParams,
    window: SimWindow,
    runner: X,
    far_field: bool,
}

impl MonteCarlo<Sequential> {
    pub fn new(params: SystemParams, window: SimWindow) -> Self {
        Self::with_runner(params, window, Sequential)
    }
}

impl<X: ReplicateRunner> MonteCarlo<X> {
    pub fn with_runner(params: SystemParams, window: SimWindow, runner: X) -> Self {
        Self {
            params,
            window,
            runner,
            far_field: true,
        }
    }

    /// Disable the far-field mean correction (pure truncated-disk estimates).
    pub fn without_far_field(mut self) -> Self {
        self.far_field = false;
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn window(&self) -> &SimWindow {
        &self.window
    }

    pub fn runner(&self) -> &X {
        &self.runner
    }

    fn far_gain(&self, radius: f64) -> f64 {
        if self.far_field {
            far_field_gain(self.params.alpha, radius)
        } else {
            0.0
        }
    }

    fn run_chunks<T, F>(&self, tag: StreamTag, total: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut ChaCha8Rng, u64) -> T + Sync + Send,
    {
        let window = self.window;
        self.runner.map(window.replicates, |k| {
            let mut rng = stream_rng(window.master_seed, tag as u64, k);
            f(&mut rng, chunk_size(total, window.replicates, k))
        })
    }

    /// Realization of a TS-PPP of `density` over the window, drawn from
    /// replicate stream `replicate`.
    pub fn sample_points(&self, density: f64, fading: &FadingSpec, replicate: u32) -> Vec<TsPoint> {
        let mut rng = stream_rng(self.window.master_seed, StreamTag::Points as u64, replicate);
        sample_tsppp(density, &self.window, fading, &mut rng)
    }
}
