//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The integrator works on small fixed-size vectors so that a function and its
//! derivative, which share almost all of their work, can be integrated over the
//! same subdivision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
pub(crate) const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point panel on [a, b]: `(x, kronrod weight, gauss weight)`.
/// Gauss weight is zero for the Kronrod-only nodes.
pub(crate) fn panel_nodes(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] * h } else { 0.0 };
        out[2 * i] = (c - h * XGK[i], WGK[i] * h, wg);
        out[2 * i + 1] = (c + h * XGK[i], WGK[i] * h, wg);
    }
    out[14] = (c, WGK[7] * h, WG[3] * h);
    out
}

/// Requested accuracy: the run stops once the error estimate is below
/// `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evaluations: usize,
    /// False when the subdivision limit was hit before the tolerance.
    pub converged: bool,
}

impl<const N: usize> Quadrature<N> {
    /// Turns a non-converged run into [`Error::Accuracy`].
    pub fn ok(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Accuracy {
                achieved: self.error,
                requested: 0.0,
            })
        }
    }
}

#[derive(Clone, Copy)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
    /// Part of `error` that is rounding in the rule itself.
    floor: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk15<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> Segment<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let mut res_abs = [0.0; N];
    for k in 0..N {
        kron[k] = fc[k] * WGK[7];
        gauss[k] = fc[k] * WG[3];
        res_abs[k] = fc[k].abs() * WGK[7];
    }
    let mut samples = [([0.0; N], [0.0; N]); 7];
    for (i, s) in samples.iter_mut().enumerate() {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for k in 0..N {
            kron[k] += WGK[i] * (f1[k] + f2[k]);
            res_abs[k] += WGK[i] * (f1[k].abs() + f2[k].abs());
            if i % 2 == 1 {
                gauss[k] += WG[i / 2] * (f1[k] + f2[k]);
            }
        }
        *s = (f1, f2);
    }
    let mut error: f64 = 0.0;
    let mut floor: f64 = 0.0;
    let mut value = [0.0; N];
    for k in 0..N {
        let mean = 0.5 * kron[k];
        let mut res_asc = WGK[7] * (fc[k] - mean).abs();
        for (i, (f1, f2)) in samples.iter().enumerate() {
            res_asc += WGK[i] * ((f1[k] - mean).abs() + (f2[k] - mean).abs());
        }
        let hk = h.abs();
        let err = rescale_error((kron[k] - gauss[k]) * h, res_abs[k] * hk, res_asc * hk);
        error = error.max(err);
        floor = floor.max(50.0 * f64::EPSILON * res_abs[k] * hk);
        value[k] = kron[k] * h;
    }
    Segment {
        a,
        b,
        value,
        error,
        floor,
    }
}

/// Integrates a vector-valued function over the finite interval [a, b].
pub fn integrate_vec<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    limit: usize,
) -> Quadrature<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let first = gk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut total = first.value;
    let mut error = first.error;
    let mut floor = first.floor;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let target = |v: &[f64; N]| {
        let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        tol.abs.max(tol.rel * scale)
    };

    // Splitting cannot remove the rounding in the rule itself, so only the
    // error above that floor is held to the tolerance.
    let mut converged = true;
    while error - floor > target(&total) {
        if heap.len() >= limit {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        // Nothing left to split.
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            converged = false;
            break;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        for k in 0..N {
            total[k] += left.value[k] + right.value[k] - worst.value[k];
        }
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
        // The running sums drift; resum once the error is nearly converged.
        if error <= 2.0 * target(&total) {
            total = [0.0; N];
            error = 0.0;
            floor = 0.0;
            for s in heap.iter() {
                for k in 0..N {
                    total[k] += s.value[k];
                }
                error += s.error;
                floor += s.floor;
            }
        }
    }
    Quadrature {
        value: total,
        error,
        evaluations,
        converged,
    }
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    limit: usize,
) -> Quadrature<1> {
    integrate_vec(|x| [f(x)], a, b, tol, limit)
}
