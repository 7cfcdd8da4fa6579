//! Estimators and goodness-of-fit statistics for comparing Monte-Carlo
//! output with theory.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative change between the variance at `n` and at `n/2` above which the
/// doubling test declares the variance non-convergent.
pub const DOUBLING_THRESHOLD: f64 = 0.25;

/// Single-pass accumulator of the first four central moments.
///
/// Updates follow Welford; [`Moments::merge`] uses the pairwise formulas
/// of Chan et al. and Pébay, so partial accumulators from parallel workers
/// combine to the single-pass result.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(samples: &[f64]) -> Self {
        let mut m = Self::new();
        for &x in samples {
            m.push(x);
        }
        m
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2 - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3 + other.m3 + d2 * delta * na * nb * (na - nb) / (n * n) + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        Moments {
            n: self.n + other.n,
            mean,
            m2,
            m3,
            m4,
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.n as f64 - 1.0)).max(0.0)
    }

    /// Standard error of the unbiased variance,
    /// `√((m₄ − (n−3)/(n−1) σ⁴) / n)` with `m₄` the fourth central moment.
    pub fn variance_std_error(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return f64::NAN;
        }
        let var = self.variance();
        let central4 = self.m4 / n;
        ((central4 - (n - 3.0) / (n - 1.0) * var * var) / n).max(0.0).sqrt()
    }

    /// Sample skewness `m₃ / m₂^{3/2}` (biased central moments).
    pub fn skewness(&self) -> f64 {
        let n = self.n as f64;
        (n.sqrt() * self.m3) / self.m2.powf(1.5)
    }

    /// Sample excess kurtosis `m₄ / m₂² − 3` (biased central moments).
    pub fn excess_kurtosis(&self) -> f64 {
        let n = self.n as f64;
        n * self.m4 / (self.m2 * self.m2) - 3.0
    }

    pub fn report(&self) -> Result<MomentReport> {
        if self.n < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: self.n as usize,
            });
        }
        Ok(MomentReport {
            n: self.n as usize,
            mean: self.mean,
            variance: self.variance(),
            std_error_of_variance: self.variance_std_error(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error_of_variance: f64,
}

pub fn empirical_variance(samples: &[f64]) -> Result<MomentReport> {
    Moments::from_slice(samples).report()
}

/// Outcome of the doubling test on a sample sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingReport {
    /// Checkpoints `n` at which the variance of the first `n` samples was
    /// compared with that of the first `n/2`.
    pub checkpoints: Vec<usize>,
    /// `(var(n/2), var(n))` for each checkpoint.
    pub variances: Vec<(f64, f64)>,
    /// True when some `|var(n)/var(n/2) − 1|` exceeds [`DOUBLING_THRESHOLD`].
    pub nonconvergent: bool,
}

/// Doubling test for variance convergence: a finite-variance law gives
/// prefix variances that stabilize, an infinite-variance law keeps
/// jumping as new extremes enter.
pub fn variance_doubling_test(samples: &[f64], checkpoints: &[usize]) -> Result<DoublingReport> {
    let largest = checkpoints.iter().copied().max().unwrap_or(0);
    if largest > samples.len() {
        return Err(Error::InsufficientData {
            needed: largest,
            got: samples.len(),
        });
    }
    let mut variances = Vec::with_capacity(checkpoints.len());
    let mut nonconvergent = false;
    for &n in checkpoints {
        if n < 4 {
            return Err(Error::InsufficientData { needed: 4, got: n });
        }
        let half = Moments::from_slice(&samples[..n / 2]).variance();
        let full = Moments::from_slice(&samples[..n]).variance();
        if (full / half - 1.0).abs() > DOUBLING_THRESHOLD {
            nonconvergent = true;
        }
        variances.push((half, full));
    }
    Ok(DoublingReport {
        checkpoints: checkpoints.to_vec(),
        variances,
        nonconvergent,
    })
}

/// Sample mean of `e^{iκX}`.
pub fn empirical_cf(samples: &[f64], kappa: f64) -> Complex64 {
    if kappa == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let n = samples.len() as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for &x in samples {
        let (s, c) = (kappa * x).sin_cos();
        re += c;
        im += s;
    }
    Complex64::new(re / n, im / n)
}

/// Sample mean of `e^{−sT}`.
pub fn empirical_laplace(samples: &[f64], s: f64) -> f64 {
    samples.iter().map(|&t| (-s * t).exp()).sum::<f64>() / samples.len() as f64
}

/// Kolmogorov-Smirnov distance `sup |F̂ − F|` to a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Two-sample Kolmogorov-Smirnov distance `sup |F̂_a − F̂_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Fixed-width histogram on `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Total number of samples, including those outside `[lo, hi)`.
    pub total: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        let w = self.width();
        (0..=self.bins()).map(|i| self.lo + i as f64 * w).collect()
    }

    pub fn centres(&self) -> Vec<f64> {
        let w = self.width();
        (0..self.bins()).map(|i| self.lo + (i as f64 + 0.5) * w).collect()
    }

    /// Counts normalized by `total · width`; integrates to the in-range mass.
    pub fn density(&self) -> Vec<f64> {
        let scale = 1.0 / (self.total as f64 * self.width());
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }
}

pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::range("bins", 0.0, "bins >= 1"));
    }
    if !(hi > lo) {
        return Err(Error::range("hi", hi, "hi > lo"));
    }
    let mut counts = vec![0u64; bins];
    let scale = bins as f64 / (hi - lo);
    for &x in samples {
        if x >= lo && x < hi {
            let k = (((x - lo) * scale) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    Ok(Histogram {
        lo,
        hi,
        counts,
        total: samples.len(),
    })
}

pub fn histogram_density(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    Ok(histogram(samples, lo, hi, bins)?.density())
}

/// Pearson statistic `Σ (O − E)² / E` over bins with expected count `E`.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() {
        return Err(Error::Format(format!(
            "{} observed bins vs {} expected",
            observed.len(),
            expected.len()
        )));
    }
    let mut stat = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        if !(e > 0.0) {
            return Err(Error::range("expected", e, "expected count > 0"));
        }
        let d = o as f64 - e;
        stat += d * d / e;
    }
    Ok(stat)
}

/// Lag-1 sample autocorrelation.
pub fn lag1_autocorrelation(samples: &[f64]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let denom: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    let num: f64 = samples.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
    Ok(num / denom)
}
