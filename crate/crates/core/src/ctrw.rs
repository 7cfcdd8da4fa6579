//! Continuous-time random walks: path generation, càdlàg evaluation, the
//! Montroll-Weiss transform and two discrete oracles for the sojourn
//! probability (compound Poisson and the renewal series).

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sampling::{JumpLaw, RngStream, WaitingTimeLaw};
use crate::special::ln_gamma;

const LANE_WAITS: u8 = 0;
const LANE_JUMPS: u8 = 1;
/// Tolerance on the total mass of a lattice distribution.
const MASS_TOL: f64 = 1e-12;

/// One CTRW realization as its sparse event list. The particle starts at
/// the origin at `t = 0`; `x_positions[n]` is its position from
/// `t_events[n]` until the next event.
#[derive(Debug, Clone, PartialEq)]
pub struct CtrwPath {
    t_events: Vec<f64>,
    x_positions: Vec<f64>,
    horizon: f64,
}

impl CtrwPath {
    pub fn t_events(&self) -> &[f64] {
        &self.t_events
    }

    pub fn x_positions(&self) -> &[f64] {
        &self.x_positions
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of jumps up to the horizon.
    pub fn len(&self) -> usize {
        self.t_events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_events.is_empty()
    }

    /// Number of jumps in `[0, t]`.
    pub fn events_by(&self, t: f64) -> usize {
        self.t_events.partition_point(|&te| te <= t)
    }

    /// Right-continuous position at time `t ∈ [0, horizon]`.
    pub fn position_at(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(Error::range("t", t, "0 <= t <= horizon"));
        }
        Ok(match self.events_by(t) {
            0 => 0.0,
            k => self.x_positions[k - 1],
        })
    }

    /// CSV dump with header `n,t,x`; row 0 is the starting point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,t,x")?;
        writeln!(out, "0,{:?},{:?}", 0.0f64, 0.0f64)?;
        for (i, (t, x)) in self.t_events.iter().zip(&self.x_positions).enumerate() {
            writeln!(out, "{},{:?},{:?}", i + 1, t, x)?;
        }
        Ok(())
    }
}

/// Free function form of [`CtrwPath::position_at`].
pub fn position_at(path: &CtrwPath, t: f64) -> Result<f64> {
    path.position_at(t)
}

/// Simulate one uncoupled CTRW up to `horizon`. Waiting times and jumps
/// come from separate lanes of `rng`, so the two sequences are independent
/// and each is reproducible on its own.
pub fn simulate_ctrw(wait: &WaitingTimeLaw, jump: &JumpLaw, horizon: f64, rng: RngStream) -> Result<CtrwPath> {
    wait.validate()?;
    jump.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::range("horizon", horizon, "0 < horizon < inf"));
    }
    let mut waits = rng.lane(LANE_WAITS);
    let mut jumps = rng.lane(LANE_JUMPS);
    let mut t_events = Vec::new();
    let mut x_positions = Vec::new();
    let (mut t, mut x) = (0.0f64, 0.0f64);
    loop {
        let next = t + wait.sample(&mut waits);
        if next > horizon {
            break;
        }
        assert!(next > t, "coincident CTRW events at t = {t}");
        t = next;
        x += jump.sample(&mut jumps);
        t_events.push(t);
        x_positions.push(x);
    }
    Ok(CtrwPath {
        t_events,
        x_positions,
        horizon,
    })
}

/// Probabilities on consecutive integer sites `offset, offset + 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePmf {
    offset: i64,
    probs: Vec<f64>,
}

impl LatticePmf {
    /// A probability distribution: nonnegative entries summing to 1.
    pub fn new(offset: i64, probs: Vec<f64>) -> Result<Self> {
        let pmf = Self::sub_probability(offset, probs)?;
        let mass = pmf.mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::range("mass", mass, "probabilities sum to 1"));
        }
        Ok(pmf)
    }

    /// Nonnegative entries with total mass at most 1, as produced by
    /// truncated series.
    pub fn sub_probability(offset: i64, probs: Vec<f64>) -> Result<Self> {
        if let Some(&p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return Err(Error::range("probability", p, "finite and >= 0"));
        }
        let pmf = LatticePmf { offset, probs };
        let mass = pmf.mass();
        if mass > 1.0 + MASS_TOL {
            return Err(Error::range("mass", mass, "total mass <= 1"));
        }
        Ok(pmf)
    }

    pub fn delta() -> Self {
        LatticePmf {
            offset: 0,
            probs: vec![1.0],
        }
    }

    /// `±1` with probability ½ each.
    pub fn two_point() -> Self {
        LatticePmf {
            offset: -1,
            probs: vec![0.5, 0.0, 0.5],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest site with an entry.
    pub fn max_site(&self) -> i64 {
        self.offset + self.probs.len() as i64 - 1
    }

    pub fn prob(&self, site: i64) -> f64 {
        let k = site - self.offset;
        if k < 0 {
            return 0.0;
        }
        self.probs.get(k as usize).copied().unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(site, probability)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(k, &p)| (self.offset + k as i64, p))
    }

    pub fn convolve(&self, other: &LatticePmf) -> LatticePmf {
        let mut probs = vec![0.0; self.probs.len() + other.probs.len() - 1];
        for (i, &a) in self.probs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.probs.iter().enumerate() {
                probs[i + j] += a * b;
            }
        }
        LatticePmf {
            offset: self.offset + other.offset,
            probs,
        }
    }

    /// `self + weight · other`, widening the support as needed.
    fn add_scaled(&mut self, other: &LatticePmf, weight: f64) {
        let lo = self.offset.min(other.offset);
        let hi = self.max_site().max(other.max_site());
        if lo < self.offset || hi > self.max_site() {
            let mut probs = vec![0.0; (hi - lo + 1) as usize];
            let shift = (self.offset - lo) as usize;
            probs[shift..shift + self.probs.len()].copy_from_slice(&self.probs);
            self.probs = probs;
            self.offset = lo;
        }
        let shift = (other.offset - self.offset) as usize;
        for (k, &p) in other.probs.iter().enumerate() {
            self.probs[shift + k] += weight * p;
        }
    }

    fn zeros_like(support: &LatticePmf) -> LatticePmf {
        LatticePmf {
            offset: support.offset,
            probs: vec![0.0; support.probs.len()],
        }
    }
}

/// Sojourn probability of the compound Poisson walk with rate `m` and
/// lattice jump law `jump` at time `t`:
/// `p = Σ_k e^{−mt} (mt)^k / k! · w^{*k}`, truncated once the Poisson tail
/// mass falls below `tol`.
pub fn compound_poisson_pmf(m: f64, t: f64, jump: &LatticePmf, tol: f64) -> Result<LatticePmf> {
    if !(m > 0.0) {
        return Err(Error::range("m", m, "m > 0"));
    }
    if !(t > 0.0) {
        return Err(Error::range("t", t, "t > 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::range("tol", tol, "tol > 0"));
    }
    let mt = m * t;
    let ln_mt = mt.ln();
    let mut power = LatticePmf::delta();
    let mut result = LatticePmf::delta();
    result.probs[0] = 0.0;
    let mut cumulative = 0.0;
    let mut k = 0u64;
    loop {
        let kf = k as f64;
        let weight = (kf * ln_mt - mt - ln_gamma(kf + 1.0)).exp();
        result.add_scaled(&power, weight);
        cumulative += weight;
        // past the mode the tail after k is below w_k r/(1 − r), r = mt/(k+1)
        let r = mt / (kf + 1.0);
        if r < 1.0 && (weight * r / (1.0 - r) < tol || 1.0 - cumulative < tol) {
            break;
        }
        power = power.convolve(jump);
        k += 1;
    }
    Ok(result)
}

/// Uniform time grid `t_i = i · step`, `i = 0, …, len − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::range("step", step, "step > 0"));
        }
        if len < 2 {
            return Err(Error::range("len", len as f64, "len >= 2"));
        }
        Ok(TimeGrid { step, len })
    }

    /// Grid from 0 to `t_end` inclusive with the given step.
    pub fn up_to(t_end: f64, step: f64) -> Result<Self> {
        let len = (t_end / step).round() as usize + 1;
        Self::new(step, len)
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.time(i)).collect()
    }
}

/// Probability mass not captured by the truncated renewal series,
/// `1 − Σ_{n ≤ n_max} v_n(t_i)`, per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationWarning {
    pub unaccounted: Vec<f64>,
}

impl TruncationWarning {
    pub fn max_unaccounted(&self) -> f64 {
        self.unaccounted.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesDensity {
    pub grid: TimeGrid,
    /// `p(·, t_i)` for each grid point.
    pub pmfs: Vec<LatticePmf>,
    /// `v_n(t_i)` for `n = 0..=n_max`, outer index `n`.
    pub renewal_weights: Vec<Vec<f64>>,
    pub truncation: TruncationWarning,
}

/// Trapezoidal `(a ∗ b)(t_i) = ∫_0^{t_i} a(t_i − u) b(u) du` on a uniform grid.
fn trapezoid_convolve(a: &[f64], b: &[f64], h: f64) -> Vec<f64> {
    let len = a.len();
    let mut out = vec![0.0; len];
    for i in 1..len {
        let mut acc = 0.5 * (a[i] * b[0] + a[0] * b[i]);
        for j in 1..i {
            acc += a[i - j] * b[j];
        }
        out[i] = h * acc;
    }
    out
}

/// Renewal-series oracle `p(x, t) = Σ_{n ≤ n_max} v_n(t) w^{*n}(x)` with
/// `v_0 = Ψ` and `v_n = v_{n−1} ∗ φ` by trapezoidal convolution.
///
/// The `n = 0` term `Ψ(t) δ(x)` is carried exactly. The trapezoidal error
/// is `O(step²)` for smooth densities and `O(step)` where `φ` jumps or
/// diverges; choosing a step fine enough is the caller's responsibility.
/// A density that is infinite at the origin is replaced there by the value
/// that gives the first grid cell its exact mass `1 − Ψ(step)`.
pub fn ctrw_series_density(wait: &WaitingTimeLaw, jump: &LatticePmf, grid: TimeGrid, n_max: usize) -> Result<SeriesDensity> {
    wait.validate()?;
    let h = grid.step;
    let survival: Vec<f64> = (0..grid.len).map(|i| wait.survival(grid.time(i))).collect::<Result<_>>()?;
    let mut density: Vec<f64> = (0..grid.len).map(|i| wait.density(grid.time(i))).collect::<Result<_>>()?;
    if !density[0].is_finite() {
        let cell_mass = 1.0 - survival[1];
        density[0] = (2.0 * cell_mass / h - density[1]).max(0.0);
    }

    let mut weights = vec![survival];
    for n in 1..=n_max {
        let next = trapezoid_convolve(&weights[n - 1], &density, h);
        weights.push(next);
    }

    let mut powers = vec![LatticePmf::delta()];
    for n in 1..=n_max {
        powers.push(powers[n - 1].convolve(jump));
    }
    let support = powers.iter().fold(LatticePmf::delta(), |acc, p| {
        let mut a = acc;
        a.add_scaled(p, 0.0);
        a
    });

    let mut pmfs = Vec::with_capacity(grid.len);
    let mut unaccounted = Vec::with_capacity(grid.len);
    #[allow(clippy::needless_range_loop)]
    for i in 0..grid.len {
        let mut p = LatticePmf::zeros_like(&support);
        let mut total = 0.0;
        for (n, power) in powers.iter().enumerate() {
            let v = weights[n][i].max(0.0);
            p.add_scaled(power, v);
            total += v;
        }
        // clip round-off so the result is a valid sub-probability
        if total > 1.0 {
            let scale = 1.0 / total;
            p.probs.iter_mut().for_each(|q| *q *= scale);
            total = 1.0;
        }
        pmfs.push(p);
        unaccounted.push(1.0 - total);
    }
    Ok(SeriesDensity {
        grid,
        pmfs,
        renewal_weights: weights,
        truncation: TruncationWarning { unaccounted },
    })
}

/// Montroll-Weiss transform
/// `p̂̃(κ, s) = (1 − φ̃(s))/s · 1/(1 − ŵ(κ) φ̃(s))`; exactly `1/s` at `κ = 0`.
pub fn montroll_weiss_lt<P, W>(wait_lt: P, jump_cf: W, kappa: f64, s: f64) -> Complex64
where
    P: Fn(f64) -> f64,
    W: Fn(f64) -> Complex64,
{
    if kappa == 0.0 {
        return Complex64::new(1.0 / s, 0.0);
    }
    let phi = wait_lt(s);
    let w = jump_cf(kappa);
    Complex64::new((1.0 - phi) / s, 0.0) / (Complex64::new(1.0, 0.0) - w * phi)
}

/// Montroll-Weiss transform from the deficits `1 − φ̃(s)` and `1 − ŵ(κ)`,
/// using `1 − ŵφ̃ = (1 − φ̃) + φ̃(1 − ŵ)` to avoid cancellation in the
/// small-`κ`, small-`s` regime of diffusion limits.
pub fn montroll_weiss_from_deficits(phi_deficit: f64, w_deficit: Complex64, s: f64) -> Complex64 {
    let phi = 1.0 - phi_deficit;
    let denom = w_deficit * phi + phi_deficit;
    if denom == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0 / s, 0.0);
    }
    Complex64::new(phi_deficit / s, 0.0) / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_before_first_wait_gives_empty_path() {
        let wait = WaitingTimeLaw::Pareto { beta: 0.5, t0: 10.0 };
        let path = simulate_ctrw(&wait, &JumpLaw::TwoPoint, 5.0, RngStream::new(1, 0)).unwrap();
        assert!(path.is_empty());
        assert_eq!(path.position_at(5.0).unwrap(), 0.0);
    }

    #[test]
    fn path_invariants() {
        let wait = WaitingTimeLaw::MittagLeffler { beta: 0.7 };
        let jump = JumpLaw::Gaussian { sigma2: 1.0 };
        let path = simulate_ctrw(&wait, &jump, 100.0, RngStream::new(3, 9)).unwrap();
        assert_eq!(path.t_events().len(), path.x_positions().len());
        assert!(path.t_events().windows(2).all(|w| w[0] < w[1]));
        assert!(*path.t_events().last().unwrap() <= 100.0);
    }

    #[test]
    fn right_continuous_lookup() {
        let path = CtrwPath {
            t_events: vec![1.0, 2.0],
            x_positions: vec![1.0, 0.0],
            horizon: 3.0,
        };
        assert_eq!(path.position_at(0.0).unwrap(), 0.0);
        assert_eq!(path.position_at(1.0 - 1e-12).unwrap(), 0.0);
        assert_eq!(path.position_at(1.0).unwrap(), 1.0);
        assert_eq!(path.position_at(2.5).unwrap(), 0.0);
        assert!(path.position_at(3.5).is_err());
        assert!(path.position_at(-0.1).is_err());
    }

    #[test]
    fn csv_layout() {
        let path = CtrwPath {
            t_events: vec![0.5],
            x_positions: vec![-1.0],
            horizon: 1.0,
        };
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,t,x\n0,0.0,0.0\n1,0.5,-1.0\n");
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticePmf::new(0, vec![0.5, 0.4]).is_err());
        assert!(LatticePmf::new(0, vec![0.5, -0.1, 0.6]).is_err());
        assert!(LatticePmf::sub_probability(0, vec![0.5, 0.4]).is_ok());
        let c = LatticePmf::two_point().convolve(&LatticePmf::two_point());
        assert_eq!(c.offset(), -2);
        assert_eq!(c.probs(), &[0.25, 0.0, 0.5, 0.0, 0.25]);
    }

    #[test]
    fn compound_poisson_site_zero() {
        // e^{−1} I₀(1), with I₀(1) = Σ_j 1/(j!)²
        let p = compound_poisson_pmf(1.0, 1.0, &LatticePmf::two_point(), 1e-12).unwrap();
        assert!((p.prob(0) - 0.465_759_607_593_640_4).abs() < 1e-12, "{}", p.prob(0));
        assert!(p.mass() >= 1.0 - 1e-12);
        // symmetric in the site
        for k in 1..6 {
            assert!((p.prob(k) - p.prob(-k)).abs() < 1e-16);
        }
    }

    #[test]
    fn compound_poisson_at_vanishing_time() {
        let p = compound_poisson_pmf(1.0, 1e-12, &LatticePmf::two_point(), 1e-12).unwrap();
        assert!((p.prob(0) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn compound_poisson_large_rate_does_not_underflow() {
        let p = compound_poisson_pmf(1.0, 900.0, &LatticePmf::two_point(), 1e-10).unwrap();
        assert!((p.mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn series_density_first_term() {
        let wait = WaitingTimeLaw::Exponential { m: 1.0 };
        let grid = TimeGrid::up_to(1.0, 1e-2).unwrap();
        let s = ctrw_series_density(&wait, &LatticePmf::two_point(), grid, 0).unwrap();
        let last = s.pmfs.last().unwrap();
        assert!((last.prob(0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((last.mass() - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn series_mass_grows_with_terms() {
        let wait = WaitingTimeLaw::MittagLeffler { beta: 0.8 };
        let grid = TimeGrid::up_to(1.0, 1e-2).unwrap();
        let mut prev = 0.0;
        for n_max in [0, 1, 2, 4, 8] {
            let s = ctrw_series_density(&wait, &LatticePmf::two_point(), grid, n_max).unwrap();
            let mass = s.pmfs.last().unwrap().mass();
            assert!(mass >= prev - 1e-15 && mass <= 1.0 + 1e-12, "n_max {n_max}: {mass}");
            prev = mass;
        }
    }

    #[test]
    fn trapezoid_convolution_of_exponentials() {
        // (e^{−t} ∗ e^{−t})(t) = t e^{−t}
        let h = 1e-3;
        let a: Vec<f64> = (0..=1000).map(|i| (-(i as f64) * h).exp()).collect();
        let c = trapezoid_convolve(&a, &a, h);
        assert!((c[1000] - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn montroll_weiss_conservation_and_exponential_case() {
        let cf = |k: f64| Complex64::new(k.cos(), 0.0);
        assert_eq!(montroll_weiss_lt(|s| 1.0 / (1.0 + s), cf, 0.0, 2.0), Complex64::new(0.5, 0.0));
        for &(k, s) in &[(0.3, 0.5), (1.0, 1.0), (2.0, 4.0)] {
            let mw = montroll_weiss_lt(|s| 1.0 / (1.0 + s), cf, k, s);
            let want = 1.0 / (s + (1.0 - k.cos()));
            assert!((mw.re - want).abs() < 1e-15 && mw.im == 0.0);
        }
    }

    #[test]
    fn deficit_form_agrees() {
        let (k, s, beta, alpha) = (0.7f64, 0.3f64, 0.6f64, 1.5f64);
        let phi = 1.0 / (1.0 + s.powf(beta));
        let w = (-k.powf(alpha)).exp();
        let direct = montroll_weiss_lt(|_| phi, |_| Complex64::new(w, 0.0), k, s);
        let deficit = montroll_weiss_from_deficits(1.0 - phi, Complex64::new(1.0 - w, 0.0), s);
        assert!((direct - deficit).norm() < 1e-14);
    }
}
