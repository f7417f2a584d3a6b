//! Model parameters and the deterministic kernels shared by analysis and
//! simulation.

use core::ops::Deref;

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use crate::error::{Error, Result};

/// Which of the two networks a quantity refers to.
///
/// Used both for the interfering population (`I_1` from primaries, `I_2` from
/// active secondaries) and for the typical link under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Network {
    Primary,
    Secondary,
}

impl Network {
    pub const BOTH: [Network; 2] = [Network::Primary, Network::Secondary];

    pub fn label(self) -> &'static str {
        match self {
            Network::Primary => "primary",
            Network::Secondary => "secondary",
        }
    }
}

/// Raw, unvalidated parameter values in SI units.
///
/// `Default` gives the reference operating point: d = 1 m, sigma2 = -50 dBm,
/// alpha = 3, lambda1 = 0.1, lambda2 = 1, P1 = 1 W, epsilon = 0.1 J,
/// E_sat = 0.5 J, T_I = T_E = 0.5 s, rho = 2 m and zeta = -10 dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    /// Primary time-space density, transmitters per m^2 per s.
    pub lambda1: f64,
    /// Secondary time-space density, transmitters per m^2 per s.
    pub lambda2: f64,
    /// Primary transmit power, W.
    pub p1: f64,
    /// Information transmission duration, s.
    pub t_i: f64,
    /// Energy harvesting duration, s.
    pub t_e: f64,
    /// Transmitter-receiver pair distance, m.
    pub d: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Noise power, W.
    pub sigma2: f64,
    /// Energy activation threshold, J.
    pub epsilon: f64,
    /// Harvester saturation level, J.
    pub e_sat: f64,
    /// Guard-zone radius, m.
    pub rho: f64,
    /// SINR decoding threshold (linear).
    pub zeta: f64,
    /// Spectral efficiency in bpcu; `None` means `log2(1 + zeta)`.
    pub rate: Option<f64>,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self {
            lambda1: 0.1,
            lambda2: 1.0,
            p1: 1.0,
            t_i: 0.5,
            t_e: 0.5,
            d: 1.0,
            alpha: 3.0,
            sigma2: dbm_to_watts(-50.0),
            epsilon: 0.1,
            e_sat: 0.5,
            rho: 2.0,
            zeta: db_to_linear(-10.0),
            rate: None,
        }
    }
}

impl ParamSet {
    pub fn validate(self) -> Result<SystemParams> {
        fn check(ok: bool, name: &'static str, reason: &'static str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason })
            }
        }
        let finite = |v: f64| v.is_finite();

        check(
            finite(self.alpha) && self.alpha > 2.0,
            "alpha",
            "alpha must exceed 2",
        )?;
        check(
            finite(self.lambda1) && self.lambda1 >= 0.0,
            "lambda1",
            "must be finite and non-negative",
        )?;
        check(
            finite(self.lambda2) && self.lambda2 >= 0.0,
            "lambda2",
            "must be finite and non-negative",
        )?;
        check(
            finite(self.p1) && self.p1 > 0.0,
            "p1",
            "must be finite and positive",
        )?;
        check(
            finite(self.t_i) && self.t_i > 0.0,
            "t_i",
            "must be finite and positive",
        )?;
        check(
            finite(self.t_e) && self.t_e > 0.0,
            "t_e",
            "must be finite and positive",
        )?;
        check(
            finite(self.d) && self.d > 0.0,
            "d",
            "must be finite and positive",
        )?;
        check(
            finite(self.sigma2) && self.sigma2 >= 0.0,
            "sigma2",
            "must be finite and non-negative",
        )?;
        check(
            finite(self.rho) && self.rho >= 0.0,
            "rho",
            "must be finite and non-negative",
        )?;
        check(
            finite(self.epsilon) && self.epsilon > 0.0,
            "epsilon",
            "must be finite and positive",
        )?;
        check(
            finite(self.e_sat) && self.e_sat > self.epsilon,
            "e_sat",
            "saturation level must exceed epsilon",
        )?;
        check(
            finite(self.zeta) && self.zeta > 0.0,
            "zeta",
            "must be finite and positive",
        )?;
        if let Some(rate) = self.rate {
            check(
                finite(rate) && rate >= 0.0,
                "rate",
                "must be finite and non-negative",
            )?;
        }
        Ok(SystemParams(self))
    }
}

/// A validated [`ParamSet`]. Read fields through `Deref`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SystemParams(ParamSet);

impl Deref for SystemParams {
    type Target = ParamSet;

    fn deref(&self) -> &ParamSet {
        &self.0
    }
}

impl TryFrom<ParamSet> for SystemParams {
    type Error = Error;

    fn try_from(raw: ParamSet) -> Result<Self> {
        raw.validate()
    }
}

impl SystemParams {
    pub fn raw(&self) -> ParamSet {
        self.0
    }

    /// Copy with some fields changed, re-validated.
    pub fn with(&self, edit: impl FnOnce(&mut ParamSet)) -> Result<SystemParams> {
        let mut raw = self.0;
        edit(&mut raw);
        raw.validate()
    }

    /// Spectral efficiency R in bpcu.
    pub fn spectral_efficiency(&self) -> f64 {
        self.rate.unwrap_or_else(|| (1.0 + self.zeta).log2())
    }

    /// `(pi / alpha) * csc(2 pi / alpha)`, the value of
    /// `int_0^inf u / (1 + u^alpha) du`.
    pub fn radial_constant(&self) -> f64 {
        radial_constant(self.alpha)
    }

    /// Path gain of the typical link, `(1 + d^alpha)^-1`.
    pub fn link_gain(&self) -> f64 {
        path_gain_unchecked(self.d, self.alpha)
    }
}

/// `int_0^inf u / (1 + u^alpha) du = (pi / alpha) csc(2 pi / alpha)`.
pub fn radial_constant(alpha: f64) -> f64 {
    let pi = core::f64::consts::PI;
    pi / alpha / (2.0 * pi / alpha).sin()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10.0.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10.0.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Non-singular path loss `(1 + l^alpha)^-1`.
pub fn path_gain(l: f64, alpha: f64) -> Result<f64> {
    if !(l >= 0.0) {
        return Err(Error::Domain {
            op: "path_gain",
            reason: "distance must be non-negative",
        });
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain {
            op: "path_gain",
            reason: "alpha must exceed 2",
        });
    }
    Ok(path_gain_unchecked(l, alpha))
}

#[inline]
pub(crate) fn path_gain_unchecked(l: f64, alpha: f64) -> f64 {
    1.0 / (1.0 + l.powf(alpha))
}

/// Fraction of the typical slot `[0, T_I]` overlapped by an interferer that
/// starts transmitting at `t`: the triangle `(T_I - |t|) / T_I` on `[-T_I, T_I]`.
#[inline]
pub fn chi(t: f64, t_i: f64) -> f64 {
    (1.0 - t.abs() / t_i).max(0.0)
}

/// Time a primary transmitter starting at `t` (active on `[t, t + T_I]`)
/// spends inside the harvesting window `[0, T_E]`.
///
/// Piecewise linear with breakpoints at `-T_I`, `min(0, T_E - T_I)`,
/// `max(0, T_E - T_I)` and `T_E`; the plateau value is `min(T_E, T_I)`.
#[inline]
pub fn psi(t: f64, t_e: f64, t_i: f64) -> f64 {
    ((t + t_i).min(t_e) - t.max(0.0)).max(0.0)
}

/// Breakpoints of [`psi`] in increasing order, including both support ends.
pub fn psi_breakpoints(t_e: f64, t_i: f64) -> [f64; 4] {
    let shift = t_e - t_i;
    [-t_i, shift.min(0.0), shift.max(0.0), t_e]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn path_gain_examples() {
        assert_eq!(path_gain(0.0, 3.0).unwrap(), 1.0);
        assert_eq!(path_gain(1.0, 3.0).unwrap(), 0.5);
        assert_abs_diff_eq!(path_gain(2.0, 3.0).unwrap(), 1.0 / 9.0, epsilon = 1e-15);
        assert!(matches!(path_gain(-0.1, 3.0), Err(Error::Domain { .. })));
        assert!(path_gain(1.0, 2.0).is_err());
    }

    #[test]
    fn path_gain_decreasing() {
        let mut prev = path_gain(0.0, 3.5).unwrap();
        for k in 1..200 {
            let g = path_gain(k as f64 * 0.05, 3.5).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0.0, 0.5), 1.0);
        assert_eq!(chi(0.5, 0.5), 0.0);
        assert_eq!(chi(-0.5, 0.5), 0.0);
        assert_abs_diff_eq!(chi(0.25, 0.5), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(chi(-0.25, 0.5), 0.5, epsilon = 1e-15);
        assert_eq!(chi(0.9, 0.5), 0.0);
    }

    #[test]
    fn psi_examples() {
        assert_abs_diff_eq!(psi(0.1, 0.5, 0.3), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(-0.1, 0.5, 0.3), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(0.4, 0.5, 0.3), 0.1, epsilon = 1e-15);
        assert_eq!(psi(-0.3, 0.5, 0.3), 0.0);
        assert_eq!(psi(0.5, 0.5, 0.3), 0.0);
    }

    #[test]
    fn psi_matches_piecewise_cases() {
        // T_E < T_I: rise, plateau at T_E, fall.
        let (te, ti) = (0.3, 0.5);
        assert_abs_diff_eq!(psi(-0.4, te, ti), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(-0.1, te, ti), te, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(0.2, te, ti), 0.1, epsilon = 1e-15);
        // T_E = T_I: tent peaking at t = 0.
        assert_abs_diff_eq!(psi(0.0, 0.5, 0.5), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(0.2, 0.5, 0.5), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(psi(-0.2, 0.5, 0.5), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn psi_peak_is_min_duration() {
        for &(te, ti) in &[(0.5, 0.3), (0.3, 0.5), (0.4, 0.4), (1.0, 0.1)] {
            let peak = (0..=4000)
                .map(|k| -ti + (te + ti) * k as f64 / 4000.0)
                .map(|t| psi(t, te, ti))
                .fold(0.0, f64::max);
            assert_abs_diff_eq!(peak, te.min(ti), epsilon = 1e-12);
        }
    }

    #[test]
    fn defaults_validate_and_convert_units() {
        let p = SystemParams::default();
        assert!(p.raw().validate().is_ok());
        assert_abs_diff_eq!(p.sigma2, 1e-8, epsilon = 1e-20);
        assert_abs_diff_eq!(p.zeta, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(p.spectral_efficiency(), 1.1f64.log2(), epsilon = 1e-15);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let base = ParamSet::default();
        let bad = [
            ParamSet { alpha: 2.0, ..base },
            ParamSet { p1: 0.0, ..base },
            ParamSet { t_i: -1.0, ..base },
            ParamSet {
                epsilon: 0.6,
                ..base
            },
            ParamSet { rho: -1.0, ..base },
            ParamSet {
                lambda1: f64::NAN,
                ..base
            },
        ];
        for raw in bad {
            assert!(raw.validate().is_err(), "{raw:?}");
        }
        let err = ParamSet { alpha: 2.0, ..base }.validate().unwrap_err();
        assert_eq!(
            err,
            Error::InvalidParameter {
                name: "alpha",
                reason: "alpha must exceed 2"
            }
        );
    }

    #[test]
    fn radial_constant_at_alpha_three() {
        let pi = core::f64::consts::PI;
        assert_abs_diff_eq!(
            radial_constant(3.0),
            2.0 * pi / (3.0 * 3f64.sqrt()),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(radial_constant(4.0), pi / 4.0, epsilon = 1e-14);
    }
}
