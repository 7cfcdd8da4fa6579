//! Trajectories of space-time fractional diffusion by parametric
//! subordination, and the subordination integral as a density oracle.
//!
//! A parent stable motion `x = Y(t*)` and a leading extremal stable
//! subordinator `t = T(t*)` are sampled on a common grid of operational
//! time `t*_n = nT/N`; plotting `(t_n, x_n)` and eliminating `t*` gives the
//! process in physical time. Between grid points the path is held constant
//! and then jumps, so positions are read off by predecessor lookup.

use std::cell::Cell;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::params::{check_beta, FracParams};
use crate::quad::{integrate_positive_axis, QuadConfig};
use crate::sampling::feller_unchecked;
use crate::sampling::{sample_extremal_stable, RngStream};
use crate::stable_density::symmetric_stable_density_at;

pub use crate::stable_density::{one_sided_stable_density, StableDensityEval};

/// Operational-time grid `t*_n = nT/N`, `n = 0..=N`.
pub fn operational_grid(n_steps: usize, horizon: f64) -> Result<Vec<f64>> {
    check_grid_args(n_steps, horizon)?;
    let n = n_steps as f64;
    Ok((0..=n_steps).map(|i| i as f64 * horizon / n).collect())
}

fn check_grid_args(n_steps: usize, horizon: f64) -> Result<()> {
    if n_steps == 0 {
        return Err(Error::range("N", 0.0, "N >= 1"));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::range("T", horizon, "T > 0"));
    }
    Ok(())
}

/// Partial sums of `N` scaled iid increments, starting at 0.
fn cumulate<F: FnMut() -> f64>(n_steps: usize, scale: f64, mut draw: F) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut acc = 0.0;
    out.push(acc);
    for _ in 0..n_steps {
        acc += scale * draw();
        out.push(acc);
    }
    out
}

/// Parent process `x = Y(t*)` on the operational grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ParentPath {
    params: FracParams,
    t_star: Vec<f64>,
    x: Vec<f64>,
}

impl ParentPath {
    pub fn params(&self) -> &FracParams {
        &self.params
    }

    pub fn t_star(&self) -> &[f64] {
        &self.t_star
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }
}

/// Leading process `t = T(t*)` on the operational grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingPath {
    beta: f64,
    t_star: Vec<f64>,
    t_phys: Vec<f64>,
}

impl LeadingPath {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t_star(&self) -> &[f64] {
        &self.t_star
    }

    pub fn t_phys(&self) -> &[f64] {
        &self.t_phys
    }
}

/// `x_n = Σ_{k≤n} (T/N)^{1/α} S_k` with `S_k` iid Feller-stable `(α, θ)`.
pub fn build_parent_path(p: &FracParams, n_steps: usize, horizon: f64, mut rng: RngStream) -> Result<ParentPath> {
    let t_star = operational_grid(n_steps, horizon)?;
    let (alpha, theta) = (p.alpha(), p.theta());
    let scale = (horizon / n_steps as f64).powf(1.0 / alpha);
    let x = cumulate(n_steps, scale, || feller_unchecked(alpha, theta, &mut rng));
    Ok(ParentPath { params: *p, t_star, x })
}

/// `t_n = Σ_{k≤n} (T/N)^{1/β} T_k` with `T_k` iid extremal β-stable.
/// At `β = 1` physical and operational time coincide and no draws are made.
pub fn build_leading_path(beta: f64, n_steps: usize, horizon: f64, mut rng: RngStream) -> Result<LeadingPath> {
    check_beta(beta)?;
    let t_star = operational_grid(n_steps, horizon)?;
    let t_phys = if beta == 1.0 {
        t_star.clone()
    } else {
        let scale = (horizon / n_steps as f64).powf(1.0 / beta);
        cumulate(n_steps, scale, || sample_extremal_stable(beta, &mut rng))
    };
    Ok(LeadingPath { beta, t_star, t_phys })
}

/// Aligned triples `(t*_n, t_n, x_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinationPath {
    params: FracParams,
    horizon: f64,
    t_star: Vec<f64>,
    t_phys: Vec<f64>,
    x: Vec<f64>,
}

impl SubordinationPath {
    pub fn params(&self) -> &FracParams {
        &self.params
    }

    /// Operational horizon `T`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Stored step count: `N`, or fewer for a truncated path.
    pub fn n_steps(&self) -> usize {
        self.t_star.len() - 1
    }

    pub fn t_star(&self) -> &[f64] {
        &self.t_star
    }

    pub fn t_phys(&self) -> &[f64] {
        &self.t_phys
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Physical time reached at the end of the operational horizon.
    pub fn physical_horizon(&self) -> f64 {
        self.t_phys[self.t_phys.len() - 1]
    }

    /// See [`position_at_physical_time`].
    pub fn position_at(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.physical_horizon()) {
            return Err(Error::range("t", t, "0 <= t <= realized physical horizon"));
        }
        let n = self.t_phys.partition_point(|&s| s <= t);
        Ok(self.x[n - 1])
    }

    /// CSV dump with header `n,t_star,t,x`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,t_star,t,x")?;
        for (i, ((s, t), x)) in self.t_star.iter().zip(&self.t_phys).zip(&self.x).enumerate() {
            writeln!(out, "{},{:?},{:?},{:?}", i, s, t, x)?;
        }
        Ok(())
    }
}

/// Zip a parent and a leading path built on the same operational grid.
pub fn subordinate(parent: ParentPath, leading: LeadingPath) -> Result<SubordinationPath> {
    if parent.t_star != leading.t_star {
        return Err(Error::GridMismatch);
    }
    if parent.params.beta() != leading.beta {
        return Err(Error::range("beta", leading.beta, "leading beta equals the parent's beta"));
    }
    let horizon = parent.t_star[parent.t_star.len() - 1];
    Ok(SubordinationPath {
        params: parent.params,
        horizon,
        t_star: parent.t_star,
        t_phys: leading.t_phys,
        x: parent.x,
    })
}

/// Parent on lane 0 and leader on lane 1 of `rng`, zipped.
pub fn simulate_subordination(p: &FracParams, n_steps: usize, horizon: f64, rng: RngStream) -> Result<SubordinationPath> {
    let parent = build_parent_path(p, n_steps, horizon, rng.lane(0))?;
    let leading = build_leading_path(p.beta(), n_steps, horizon, rng.lane(1))?;
    subordinate(parent, leading)
}

/// [`simulate_subordination`] stopped at the first grid point whose
/// physical time exceeds `t_max` (or at `N`). Both lanes are consumed in
/// order, so the stored prefix is bit-identical to the full path's and
/// positions up to `t_max` agree with it.
pub fn simulate_subordination_until(p: &FracParams, n_steps: usize, horizon: f64, t_max: f64, rng: RngStream) -> Result<SubordinationPath> {
    if !(t_max >= 0.0) {
        return Err(Error::range("t_max", t_max, "t_max >= 0"));
    }
    let mut t_star = operational_grid(n_steps, horizon)?;
    let beta = p.beta();
    let t_phys = if beta == 1.0 {
        let end = t_star.partition_point(|&s| s <= t_max).min(n_steps) + 1;
        t_star.truncate(end);
        t_star.clone()
    } else {
        let mut lead = rng.lane(1);
        let scale = (horizon / n_steps as f64).powf(1.0 / beta);
        let mut t_phys = vec![0.0];
        let mut acc = 0.0;
        while acc <= t_max && t_phys.len() <= n_steps {
            acc += scale * sample_extremal_stable(beta, &mut lead);
            t_phys.push(acc);
        }
        t_star.truncate(t_phys.len());
        t_phys
    };
    let (alpha, theta) = (p.alpha(), p.theta());
    let mut parent = rng.lane(0);
    let scale = (horizon / n_steps as f64).powf(1.0 / alpha);
    let x = cumulate(t_star.len() - 1, scale, || feller_unchecked(alpha, theta, &mut parent));
    Ok(SubordinationPath {
        params: *p,
        horizon,
        t_star,
        t_phys,
        x,
    })
}

/// `X(t) = x_{n*}` with `n* = max{n : t_n ≤ t}`.
pub fn position_at_physical_time(path: &SubordinationPath, t: f64) -> Result<f64> {
    path.position_at(t)
}

/// Draw of `X(t)` without a path: the inverse subordinator at `t` is
/// distributed as `(t/S)^β` with `S` extremal β-stable, so
/// `X(t) = (t/S)^{β/α} Z` with `Z` Feller `(α, θ)`-stable.
pub fn sample_subordinated_position(p: &FracParams, t: f64, rng: &mut RngStream) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::range("t", t, "t >= 0"));
    }
    let s = sample_extremal_stable(p.beta(), rng);
    let z = feller_unchecked(p.alpha(), p.theta(), rng);
    Ok((t / s).powf(p.beta() / p.alpha()) * z)
}

/// Weight `g_β(t*, t) = (t/β) ḡ_β(t t*^{−1/β}) t*^{−1/β−1}` of the
/// subordination integral, a probability density in `t*` for fixed `t`.
pub fn subordination_weight(beta: f64, t_star: f64, t: f64) -> Result<StableDensityEval> {
    check_beta(beta)?;
    if beta == 1.0 {
        return Err(Error::Unsupported("the weight is a point mass at t* = t when beta = 1"));
    }
    if !(t_star > 0.0) {
        return Err(Error::range("t_star", t_star, "t_star > 0"));
    }
    if !(t > 0.0) {
        return Err(Error::range("t", t, "t > 0"));
    }
    let inv = 1.0 / beta;
    let g = one_sided_stable_density(beta, t * t_star.powf(-inv))?;
    let k = t * inv * t_star.powf(-inv - 1.0);
    Ok(StableDensityEval {
        value: k * g.value,
        est_error: k * g.est_error,
    })
}

/// `u_β(x, t) = ∫_0^∞ f_{α,0}(x, t*) g_β(t*, t) dt*` by adaptive quadrature.
/// At `β = 1` the weight degenerates and `f_{α,0}(x, t)` is returned.
pub fn subordination_integral_density(p: &FracParams, x: f64, t: f64, cfg: QuadConfig) -> Result<StableDensityEval> {
    if !p.is_symmetric() {
        return Err(Error::Unsupported("subordination integral needs theta = 0"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::range("t", t, "t > 0"));
    }
    let (alpha, beta) = (p.alpha(), p.beta());
    if beta == 1.0 {
        return symmetric_stable_density_at(alpha, x, t);
    }
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |ts: f64| {
        if ts <= 0.0 {
            return 0.0;
        }
        let eval = symmetric_stable_density_at(alpha, x, ts).and_then(|f| Ok(f.value * subordination_weight(beta, ts, t)?.value));
        match eval {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let r = integrate_positive_axis(integrand, t.powf(beta), cfg);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = r?;
    Ok(StableDensityEval {
        value: r.value.max(0.0),
        est_error: r.abs_error,
    })
}
