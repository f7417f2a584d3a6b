use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};

use super::SimWindow;
use crate::error::{Error, Result};

/// One transmitter of a time-space process: position, activation epoch and
/// the power gain of its fading channel towards the observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsPoint {
    pub x: f64,
    pub y: f64,
    pub epoch: f64,
    pub fade: f64,
}

impl TsPoint {
    pub fn distance(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingKind {
    Rayleigh,
    Rician,
}

/// Small-scale fading of a link, normalized to unit mean power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSpec {
    pub kind: FadingKind,
    /// Rician K factor (line-of-sight to diffuse power ratio); unused for Rayleigh.
    pub k_factor: f64,
}

impl Default for FadingSpec {
    fn default() -> Self {
        Self::rayleigh()
    }
}

impl FadingSpec {
    pub fn rayleigh() -> Self {
        Self {
            kind: FadingKind::Rayleigh,
            k_factor: 0.0,
        }
    }

    pub fn rician(k_factor: f64) -> Result<Self> {
        if !(k_factor >= 0.0 && k_factor.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "k_factor",
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self {
            kind: FadingKind::Rician,
            k_factor,
        })
    }

    pub fn is_rayleigh(&self) -> bool {
        self.kind == FadingKind::Rayleigh
    }

    /// Draw a power gain `|h|^2` with `E|h|^2 = 1`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            FadingKind::Rayleigh => Exp1.sample(rng),
            FadingKind::Rician => {
                let k = self.k_factor;
                let los = (k / (k + 1.0)).sqrt();
                let spread = (0.5 / (k + 1.0)).sqrt();
                let (g1, g2): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
                let re = los + spread * g1;
                let im = spread * g2;
                re * re + im * im
            }
        }
    }
}

/// Poisson-distributed point count with the given mean.
#[inline]
pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(d) => {
            let n: f64 = d.sample(rng);
            n as usize
        }
        Err(_) => 0,
    }
}

/// Distance of a point uniform on the disk of radius `radius`.
#[inline]
pub(crate) fn uniform_radius<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> f64 {
    radius * rng.random::<f64>().sqrt()
}

/// Point uniform on the disk of radius `radius`.
#[inline]
pub(crate) fn uniform_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> (f64, f64) {
    let r = uniform_radius(radius, rng);
    let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
    (r * c, r * s)
}

/// Realization of a homogeneous TS-PPP of `density` (per m^2 per s) on the
/// disk and epoch interval of `window`, with one fade per point.
pub fn sample_tsppp<R: Rng + ?Sized>(
    density: f64,
    window: &SimWindow,
    fading: &FadingSpec,
    rng: &mut R,
) -> Vec<TsPoint> {
    let n = poisson_count(density * window.area() * window.duration(), rng);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y) = uniform_disk(window.disk_radius, rng);
        let epoch = window.t_min + window.duration() * rng.random::<f64>();
        let fade = fading.sample(rng);
        points.push(TsPoint { x, y, epoch, fade });
    }
    points
}
