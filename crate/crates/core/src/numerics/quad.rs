//! Globally adaptive 21-point Gauss-Kronrod quadrature for real and complex
//! integrands.
#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use num_complex::Complex64;

use crate::error::Error;

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> crate::Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                name: "quadrature",
                reason: "tolerances must be positive and max_subdivisions at least 1",
            });
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Same budget with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }

    fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Result of a quadrature: value, estimated absolute error and the number of
/// panels the interval ended up split into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: f64,
    pub panels: usize,
}

/// The subdivision budget ran out; holds the best estimate reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unconverged<T>(pub Integral<T>);

impl<T> Unconverged<T> {
    pub fn best(self) -> Integral<T> {
        self.0
    }
}

impl From<Unconverged<f64>> for Error {
    fn from(u: Unconverged<f64>) -> Self {
        Error::NonConvergence {
            estimate: u.0.value,
            abs_error: u.0.abs_error,
        }
    }
}

impl From<Unconverged<Complex64>> for Error {
    fn from(u: Unconverged<Complex64>) -> Self {
        Error::NonConvergence {
            estimate: f64::NAN,
            abs_error: u.0.abs_error,
        }
    }
}

pub type QuadResult<T> = core::result::Result<Integral<T>, Unconverged<T>>;

/// Take the value whether or not the tolerance was met, reporting failure
/// through `flag`. Used for inner integrals of nested quadratures.
pub fn value_or_flag<T>(r: QuadResult<T>, flag: &core::cell::Cell<bool>) -> T {
    match r {
        Ok(i) => i.value,
        Err(Unconverged(i)) => {
            flag.set(true);
            i.value
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_715_284_085_081,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut abs_sum = f_center.magnitude() * WGK[10];
    let mut gauss = T::zero();
    let mut values = [(T::zero(), T::zero()); 10];

    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        let pair = lo + hi;
        kronrod = kronrod + pair * WGK[j];
        abs_sum += (lo.magnitude() + hi.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
        *slot = (lo, hi);
    }

    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (f_center - mean).magnitude();
    for (j, (lo, hi)) in values.iter().enumerate() {
        asc += WGK[j] * ((*lo - mean).magnitude() + (*hi - mean).magnitude());
    }

    let scale = half.abs();
    let result_abs = abs_sum * scale;
    let result_asc = asc * scale;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if result_asc != 0.0 && err != 0.0 {
        err = result_asc * (200.0 * err / result_asc).powf(1.5).min(1.0);
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * result_abs);
    }

    Panel {
        a,
        b,
        value: kronrod * half,
        error: err,
    }
}

/// Integrate `f` over `[a, b]` by bisecting the panel with the largest error
/// estimate until the total error is below `max(abs_tol, rel_tol * |I|)`.
///
/// Real and complex integrands share one subdivision tree. `a > b` returns the
/// negated integral over `[b, a]`.
pub fn integrate_adaptive<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Ok(Integral {
            value: T::zero(),
            abs_error: 0.0,
            panels: 0,
        });
    }
    if a > b {
        return match integrate_adaptive(f, b, a, spec) {
            Ok(i) => Ok(Integral {
                value: i.value * -1.0,
                ..i
            }),
            Err(Unconverged(i)) => Err(Unconverged(Integral {
                value: i.value * -1.0,
                ..i
            })),
        };
    }

    let first = gauss_kronrod(&f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    // Panels too narrow to bisect are parked here with their error retained.
    let mut frozen: alloc::vec::Vec<Panel<T>> = alloc::vec::Vec::new();

    while total_err > spec.target(total.magnitude()) {
        if heap.len() + frozen.len() >= spec.max_subdivisions {
            return Err(Unconverged(Integral {
                value: total,
                abs_error: total_err,
                panels: heap.len() + frozen.len(),
            }));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
        {
            frozen.push(worst);
            continue;
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        // Re-sum from scratch now and then to stop drift in the running totals.
        if (heap.len() + frozen.len()).is_multiple_of(64) {
            let (v, e) = heap
                .iter()
                .chain(frozen.iter())
                .fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error));
            total = v;
            total_err = e;
        }
    }

    let (value, abs_error) = heap
        .iter()
        .chain(frozen.iter())
        .fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error));
    let panels = heap.len() + frozen.len();
    let result = Integral {
        value,
        abs_error,
        panels,
    };
    if abs_error > spec.target(value.magnitude()) {
        Err(Unconverged(result))
    } else {
        Ok(result)
    }
}

/// Integrate `f` over `[a, inf)` through the map `u = a + v / (1 - v)`,
/// `v in [0, 1)`. The integrand must decay at least like `u^(1 - alpha)` with
/// `alpha > 2`.
pub fn integrate_semi_infinite<T, F>(f: F, a: f64, spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_adaptive(
        |v: f64| {
            let w = 1.0 - v;
            let u = a + v / w;
            let y = f(u);
            if u.is_finite() {
                y * (1.0 / (w * w))
            } else {
                T::zero()
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// `int_a^inf f(u) du` for integrands that decay like `u^-decay`, `decay > 1`.
///
/// `[a, a + 1]` is integrated directly. On the tail, the substitution
/// `u = (a + 1) y^(-1/(decay - 1))` maps onto `(0, 1]` with a bounded integrand,
/// which [`integrate_semi_infinite`] does not achieve for slowly decaying
/// tails (`decay < 2`).
pub fn integrate_power_tail<T, F>(f: F, a: f64, decay: f64, spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    debug_assert!(decay > 1.0);
    let head = integrate_adaptive(&f, a, a + 1.0, spec);
    let c = a + 1.0;
    let k = 1.0 / (decay - 1.0);
    let tail = integrate_adaptive(
        |y: f64| {
            if y == 0.0 {
                return T::zero();
            }
            let u = c * y.powf(-k);
            if u.is_finite() {
                f(u) * (c * k * y.powf(-k - 1.0))
            } else {
                T::zero()
            }
        },
        0.0,
        1.0,
        spec,
    );
    let ok = head.is_ok() && tail.is_ok();
    let (h, t) = (
        head.unwrap_or_else(Unconverged::best),
        tail.unwrap_or_else(Unconverged::best),
    );
    let sum = Integral {
        value: h.value + t.value,
        abs_error: h.abs_error + t.abs_error,
        panels: h.panels + t.panels,
    };
    if ok {
        Ok(sum)
    } else {
        Err(Unconverged(sum))
    }
}
