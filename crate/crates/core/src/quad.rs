//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Intervals are bisected in order of decreasing error estimate until the
//! summed estimate meets `max(abs_tol, rel_tol * |value|)`. Semi-infinite
//! ranges are mapped onto `(0, 1]` with `x = a + (1 - u) / u`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Single 15-point Kronrod panel with the embedded 7-point Gauss estimate.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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
        self.err.total_cmp(&other.err)
    }
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (v, e) = gk15(&f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a: lo,
        b: hi,
        value: v,
        err: e,
    });
    let mut total = v;
    let mut total_err = e;
    let mut evaluations = 15;
    // panels too narrow to split further; their error is frozen
    let mut frozen_err = 0.0;
    let mut frozen_value = 0.0;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                value: sign * total,
                est_error: total_err,
            });
        }
        let Some(panel) = heap.pop() else { break };
        let mid = 0.5 * (panel.a + panel.b);
        if mid <= panel.a || mid >= panel.b || (panel.b - panel.a) < 1e-15 * mid.abs() {
            frozen_err += panel.err;
            frozen_value += panel.value;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(&f, panel.a, mid);
        let (v2, e2) = gk15(&f, mid, panel.b);
        evaluations += 30;
        total += v1 + v2 - panel.value;
        total_err += e1 + e2 - panel.err;
        heap.push(Panel {
            a: panel.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: panel.b,
            value: v2,
            err: e2,
        });
        if !total.is_finite() {
            return Err(Error::Quadrature {
                value: total,
                est_error: f64::INFINITY,
            });
        }
    }
    // re-sum to shed drift from the running updates
    let value: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen_value;
    let abs_error: f64 = heap.iter().map(|p| p.err).sum::<f64>() + frozen_err;
    let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if abs_error > target * 10.0 {
        return Err(Error::Quadrature {
            value: sign * value,
            est_error: abs_error,
        });
    }
    Ok(QuadResult {
        value: sign * value,
        abs_error,
        evaluations,
    })
}

/// Integrate `f` over `[a, ∞)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, cfg: QuadConfig) -> Result<QuadResult> {
    let mapped = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let x = a + (1.0 - u) / u;
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx / (u * u)
        }
    };
    integrate(mapped, 0.0, 1.0, cfg)
}

/// Integrate over `[0, ∞)` splitting at `split`, which should sit near the
/// bulk of the integrand.
pub fn integrate_positive_axis<F: Fn(f64) -> f64>(f: F, split: f64, cfg: QuadConfig) -> Result<QuadResult> {
    let head = integrate(&f, 0.0, split, cfg)?;
    let tail = integrate_to_infinity(&f, split, cfg)?;
    Ok(QuadResult {
        value: head.value + tail.value,
        abs_error: head.abs_error + tail.abs_error,
        evaluations: head.evaluations + tail.evaluations,
    })
}
