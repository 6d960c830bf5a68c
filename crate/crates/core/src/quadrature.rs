//! Adaptive Gauss–Kronrod quadrature and a half-period partitioned rule for
//! Fourier-sine integrals.
//!
//! The adaptive driver bisects the interval with the largest error estimate
//! until the summed estimate meets `max(abs, rel·|I|)`. Panel errors use the
//! QUADPACK rescaling of |K₃₁ − G₁₅|.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

// 31-point Kronrod extension of the 15-point Gauss rule, outermost node
// first; the last entry is the centre.
const XGK: [f64; 16] = [
    0.998_002_298_693_397_060,
    0.987_992_518_020_485_428,
    0.967_739_075_679_139_134,
    0.937_273_392_400_705_904,
    0.897_264_532_344_081_900,
    0.848_206_583_410_427_216,
    0.790_418_501_442_465_932,
    0.724_417_731_360_170_047,
    0.650_996_741_297_416_970,
    0.570_972_172_608_538_847,
    0.485_081_863_640_239_680,
    0.394_151_347_077_563_369,
    0.299_180_007_153_168_812,
    0.201_194_093_997_434_522,
    0.101_142_066_918_717_499,
    0.000_000_000_000_000_000,
];

const WGK: [f64; 16] = [
    0.005_377_479_872_923_348,
    0.015_007_947_329_316_122,
    0.025_460_847_326_715_320,
    0.035_346_360_791_375_846,
    0.044_589_751_324_764_876,
    0.053_481_524_690_928_087,
    0.062_009_567_800_670_640,
    0.069_854_121_318_728_258,
    0.076_849_680_757_720_378,
    0.083_080_502_823_133_021,
    0.088_564_443_056_211_770,
    0.093_126_598_170_825_321,
    0.096_642_726_983_623_678,
    0.099_173_598_721_791_959,
    0.100_769_845_523_875_595,
    0.101_330_007_014_791_549,
];

// Gauss weights for XGK[1], XGK[3], …, XGK[13] and the centre.
const WG: [f64; 8] = [
    0.030_753_241_996_117_268,
    0.070_366_047_488_108_124,
    0.107_159_220_467_171_935,
    0.139_570_677_926_154_314,
    0.166_269_205_816_993_933,
    0.186_161_000_015_562_211,
    0.198_431_485_327_111_576,
    0.202_578_241_925_561_272,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// One 31-point Gauss–Kronrod panel over `[a, b]`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[15] * f_center;
    let mut gauss = WG[7] * f_center;
    let mut res_abs = kronrod.abs();
    let mut values = [(0.0, 0.0); 15];
    for (j, value) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        kronrod += WGK[j] * (lo + hi);
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
        *value = (lo, hi);
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[15] * (f_center - mean).abs();
    for (j, &(lo, hi)) in values.iter().enumerate() {
        res_asc += WGK[j] * ((lo - mean).abs() + (hi - mean).abs());
    }
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let value = kronrod * half;
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Estimate {
        value,
        abs_error: err,
        evaluations: 31,
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.abs_error == other.est.abs_error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.abs_error.total_cmp(&other.est.abs_error)
    }
}

pub const DEFAULT_MAX_PANELS: usize = 4000;

/// Globally adaptive integration over the intervals between consecutive
/// `points`, which must be sorted.
pub fn integrate_points<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut total = Estimate::default();
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let est = gauss_kronrod(&f, w[0], w[1]);
        total.value += est.value;
        total.abs_error += est.abs_error;
        total.evaluations += est.evaluations;
        heap.push(Panel { a: w[0], b: w[1], est });
    }
    while total.abs_error > tol.target(total.value) {
        if heap.len() >= max_panels {
            return Err(Error::QuadratureNonConvergence {
                value: total.value,
                abs_error: total.abs_error,
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine resolution.
            return Err(Error::QuadratureNonConvergence {
                value: total.value,
                abs_error: total.abs_error,
            });
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.abs_error += left.abs_error + right.abs_error - worst.est.abs_error;
        total.evaluations += left.evaluations + right.evaluations;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let mut value = 0.0;
    let mut abs_error = 0.0;
    for p in heap.iter() {
        value += p.est.value;
        abs_error += p.est.abs_error;
    }
    Ok(Estimate {
        value,
        abs_error,
        evaluations: total.evaluations,
    })
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_points(f, &[a, b], tol, DEFAULT_MAX_PANELS)
}

/// `[0, lo, …, hi]` with `per_decade` geometric points between `lo` and `hi`.
pub fn log_breakpoints(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let mut pts = vec![0.0];
    if lo > 0.0 && hi > lo {
        let decades = (hi / lo).log10();
        let n = ((decades * per_decade as f64).ceil() as usize).max(1);
        for i in 0..n {
            pts.push(lo * 10f64.powf(decades * i as f64 / n as f64));
        }
    }
    pts.push(hi);
    pts
}

/// Above this many radians of phase the sine integral is partitioned at the
/// zeros of sin(qr) and the alternating tail is accelerated.
pub const OSCILLATION_THRESHOLD: f64 = 50.0;

const MIN_HALF_PERIODS: usize = 24;
const AVERAGING_DEPTH: usize = 12;
const MAX_HALF_PERIODS: usize = 200_000;

/// ∫₀^upper g(r)·sin(qr) dr for `g` decaying at large r.
///
/// With `q·upper ≤ 50` this is a single adaptive integral. Otherwise the
/// range is cut at r = nπ/q; the half-period integrals form an alternating
/// series with smooth magnitudes whose limit is taken by repeated pairwise
/// averaging of the partial sums. The accelerated value approximates the
/// integral to infinity, which differs from the truncated one only by the
/// tail beyond `upper`.
pub fn integrate_sine<G: Fn(f64) -> f64>(g: G, q: f64, upper: f64, tol: Tolerance) -> Result<Estimate> {
    let integrand = |r: f64| g(r) * (q * r).sin();
    let phase = q * upper;
    if phase <= OSCILLATION_THRESHOLD {
        let pts = [0.0, 0.25 * upper, 0.5 * upper, upper];
        return integrate_points(integrand, &pts, tol, DEFAULT_MAX_PANELS);
    }

    let half_period = PI / q;
    let panel_tol = Tolerance::new(tol.abs * 1e-3, tol.rel * 1e-2);
    let mut partial = Vec::with_capacity(256);
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut previous: Option<f64> = None;
    let total_panels = (phase / PI).ceil() as usize;

    for n in 0..MAX_HALF_PERIODS {
        let a = n as f64 * half_period;
        let b = a + half_period;
        let est = integrate_points(integrand, &[a, b], panel_tol, 64)?;
        sum += est.value;
        err += est.abs_error;
        evaluations += est.evaluations;
        partial.push(sum);

        if n + 1 >= total_panels && n + 1 < MIN_HALF_PERIODS {
            return Ok(Estimate {
                value: sum,
                abs_error: err,
                evaluations,
            });
        }
        if partial.len() < MIN_HALF_PERIODS {
            continue;
        }
        let accelerated = repeated_average(&partial[partial.len() - AVERAGING_DEPTH..]);
        if let Some(prev) = previous {
            let change = (accelerated - prev).abs();
            if change <= tol.target(accelerated) {
                return Ok(Estimate {
                    value: accelerated,
                    abs_error: err + change,
                    evaluations,
                });
            }
        }
        previous = Some(accelerated);
    }
    Err(Error::QuadratureNonConvergence {
        value: previous.unwrap_or(sum),
        abs_error: f64::INFINITY,
    })
}

/// Repeated neighbour averaging of alternating-series partial sums.
fn repeated_average(partial: &[f64]) -> f64 {
    let mut row = partial.to_vec();
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}
