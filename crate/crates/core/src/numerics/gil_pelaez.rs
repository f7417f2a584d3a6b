//! CCDF of a real random variable from its characteristic function.
//!
//! `P(X > e) = 1/2 + (1/pi) int_0^inf Im[e^{-ize} F(z)] / z dz`.
//!
//! The integral is summed over consecutive blocks whose length follows the
//! local half-period of `e^{-ize} F(z)`, so block contributions alternate once
//! `F` stops shaping the phase. Summation stops when the blocks have decayed,
//! or when Wynn's epsilon extrapolation of the partial sums has settled (needed
//! when `F` decays slowly or not at all, e.g. point masses).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::quad::{integrate_adaptive, QuadratureSpec, Unconverged};
use crate::error::{Error, Result};

const MAX_BLOCKS: usize = 20_000;
const WYNN_WINDOW: usize = 40;
const SMALL_Z: f64 = 1e-9;

/// Estimate the mean from `F'(0) = i m` with a one-sided difference.
fn mean_from_charfn<F: Fn(f64) -> Complex64>(charfn: &F, scale_hint: f64) -> f64 {
    let mut h = 1e-6 / scale_hint.max(1e-300);
    let mut mean = charfn(h).im / h;
    for _ in 0..4 {
        if (h * mean).abs() <= 1e-6 {
            break;
        }
        h = 1e-6 / mean.abs();
        mean = charfn(h).im / h;
    }
    mean
}

/// Best even-column entry of Wynn's epsilon table for `sums`.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n == 0 {
        return f64::NAN;
    }
    let mut best = sums[n - 1];
    let mut prev: Vec<f64> = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut column = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for k in 0..cur.len() - 1 {
            let diff = cur[k + 1] - cur[k];
            if diff == 0.0 || !diff.is_finite() {
                return if column.is_multiple_of(2) {
                    cur[k + 1]
                } else {
                    best
                };
            }
            next.push(prev[k + 1] + 1.0 / diff);
        }
        column += 1;
        prev = cur;
        cur = next;
        if column.is_multiple_of(2) {
            let candidate = cur[cur.len() - 1];
            if candidate.is_finite() {
                best = candidate;
            }
        }
    }
    best
}

/// `P(X > threshold)` for the variable with characteristic function `charfn`.
///
/// `charfn(0)` must be 1 and `|charfn| <= 1`. The output is clamped to `[0, 1]`.
pub fn gil_pelaez_ccdf<F>(charfn: F, threshold: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    if !threshold.is_finite() {
        return Err(Error::Domain {
            op: "gil_pelaez_ccdf",
            reason: "threshold must be finite",
        });
    }
    let mean = mean_from_charfn(&charfn, threshold.abs().max(1.0));
    let scale = threshold.abs().max(mean.abs());
    if !(scale > 0.0) {
        // X = 0 almost surely and threshold = 0: the inversion formula gives 1/2.
        return Ok(0.5);
    }
    let limit_at_zero = mean - threshold;

    let integrand = |z: f64| -> f64 {
        if z < SMALL_Z {
            limit_at_zero
        } else {
            let phase = Complex64::new(0.0, -z * threshold).exp();
            (phase * charfn(z)).im / z
        }
    };

    // Local angular frequency of e^{-iz e} F(z).
    let frequency = |z: f64| -> f64 {
        if z < SMALL_Z {
            return mean - threshold;
        }
        let dz = 1e-5 * PI / scale;
        let lo = charfn((z - dz).max(0.0));
        let hi = charfn(z + dz);
        let mid = charfn(z);
        if mid.norm() < 1e-250 {
            return -threshold;
        }
        let derivative = (hi - lo) / (2.0 * dz);
        (derivative / mid).im - threshold
    };
    let floor = 0.05 * scale;

    let block_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.01,
        ..*spec
    };
    let quiet = spec.abs_tol * 0.1;

    let mut z = 0.0;
    let mut sum = 0.0;
    let mut error = 0.0;
    let mut quiet_run = 0;
    let mut partial: Vec<f64> = Vec::new();
    let mut extrapolated: Vec<f64> = Vec::new();

    for _ in 0..MAX_BLOCKS {
        let length = PI / frequency(z).abs().max(floor);
        let block = match integrate_adaptive(integrand, z, z + length, &block_spec) {
            Ok(i) => i,
            Err(Unconverged(i)) => {
                return Err(Error::NonConvergence {
                    estimate: (0.5 + (sum + i.value) / PI).clamp(0.0, 1.0),
                    abs_error: (error + i.abs_error) / PI,
                })
            }
        };
        z += length;
        sum += block.value;
        error += block.abs_error;

        if block.value.abs() < quiet {
            quiet_run += 1;
            if quiet_run >= 3 {
                return Ok((0.5 + sum / PI).clamp(0.0, 1.0));
            }
        } else {
            quiet_run = 0;
        }

        partial.push(sum);
        if partial.len() >= 6 {
            let start = partial.len().saturating_sub(WYNN_WINDOW);
            extrapolated.push(wynn_epsilon(&partial[start..]));
            let k = extrapolated.len();
            if k >= 3 {
                let (a, b, c) = (
                    extrapolated[k - 3],
                    extrapolated[k - 2],
                    extrapolated[k - 1],
                );
                if (c - b).abs() < quiet && (b - a).abs() < quiet {
                    return Ok((0.5 + c / PI).clamp(0.0, 1.0));
                }
            }
        }
    }

    Err(Error::NonConvergence {
        estimate: (0.5 + extrapolated.last().copied().unwrap_or(sum) / PI).clamp(0.0, 1.0),
        abs_error: f64::INFINITY,
    })
}
