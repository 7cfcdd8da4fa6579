//! Rescaling and respeeding of waiting-time laws, the small-argument
//! transform asymptotics `1 − ŵ(κ) ~ μ|κ|^α`, `1 − φ̃(s) ~ λs^β`, and the
//! well-scaled passage to the space-time fractional diffusion limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ctrw::montroll_weiss_from_deficits;
use crate::error::{Error, Result};
use crate::sampling::{JumpLaw, JumpTail, WaitingTail, WaitingTimeLaw};
use crate::special::{gamma, sin_pi};

/// Slack allowed when checking that ratio errors shrink along a grid.
const MONOTONE_SLACK: f64 = 1e-12;
/// Tolerance of the well-scaledness relation `λτ^β = μh^α`.
const WELL_SCALED_TOL: f64 = 1e-12;

/// Geometric grid `10^{−1}, …, 10^{−5}` used for the asymptotic checks.
pub fn default_asymptotic_grid() -> Vec<f64> {
    (1..=5).map(|k| 10f64.powi(-k)).collect()
}

/// Time and space rescaling `(τ, h)`, tail constants `(λ, μ)` and respeed
/// factor `a` of a CTRW on its way to the diffusion limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFactors {
    pub tau: f64,
    pub h: f64,
    pub lambda: f64,
    pub mu: f64,
    pub a: f64,
}

impl ScalingFactors {
    pub fn new(tau: f64, h: f64, lambda: f64, mu: f64, a: f64) -> Result<Self> {
        for (name, v) in [("tau", tau), ("h", h), ("lambda", lambda), ("mu", mu), ("a", a)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::range(name, v, "strictly positive"));
            }
        }
        Ok(ScalingFactors { tau, h, lambda, mu, a })
    }

    /// Factors for space step `h` with `τ` chosen by [`well_scaled_tau`].
    pub fn well_scaled(alpha: f64, beta: f64, lambda: f64, mu: f64, h: f64) -> Result<Self> {
        let tau = well_scaled_tau(alpha, beta, lambda, mu, h)?;
        Self::new(tau, h, lambda, mu, 1.0)
    }

    /// `r(h, τ) = μh^α / (λτ^β)`.
    pub fn ratio(&self, alpha: f64, beta: f64) -> f64 {
        self.mu * self.h.powf(alpha) / (self.lambda * self.tau.powf(beta))
    }

    pub fn is_well_scaled(&self, alpha: f64, beta: f64) -> bool {
        (1.0 / self.ratio(alpha, beta) - 1.0).abs() < WELL_SCALED_TOL
    }
}

/// `μ` of `1 − ŵ(κ) ~ μ|κ|^α`: `σ²/2` for finite variance, else
/// `bπ / (Γ(α+1) sin(απ/2))`.
pub fn lemma1_mu(jump: &JumpLaw) -> Result<f64> {
    jump.validate()?;
    Ok(match jump.tail()? {
        JumpTail::FiniteVariance(sigma2) => 0.5 * sigma2,
        JumpTail::PowerLaw { b, alpha } => b * PI / (gamma(alpha + 1.0) * sin_pi(0.5 * alpha)),
    })
}

/// `λ` of `1 − φ̃(s) ~ λs^β`: the mean `ρ` for finite mean, else
/// `cπ / (Γ(β+1) sin(βπ))`.
pub fn lemma2_lambda(wait: &WaitingTimeLaw) -> Result<f64> {
    wait.validate()?;
    Ok(match wait.tail() {
        WaitingTail::FiniteMean(rho) => rho,
        WaitingTail::PowerLaw { c, beta } => c * PI / (gamma(beta + 1.0) * sin_pi(beta)),
    })
}

fn jump_exponent(jump: &JumpLaw) -> Result<f64> {
    Ok(match jump.tail()? {
        JumpTail::FiniteVariance(_) => 2.0,
        JumpTail::PowerLaw { alpha, .. } => alpha,
    })
}

fn wait_exponent(wait: &WaitingTimeLaw) -> f64 {
    match wait.tail() {
        WaitingTail::FiniteMean(_) => 1.0,
        WaitingTail::PowerLaw { beta, .. } => beta,
    }
}

/// One grid point of an asymptotic ratio check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub law: String,
    pub grid_point: f64,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub law: String,
    /// `μ` or `λ`.
    pub constant: f64,
    /// `α` or `β`.
    pub exponent: f64,
    pub records: Vec<LemmaRecord>,
    pub pass: bool,
}

/// Records pass while `|ratio − 1|` does not grow along the grid; the last
/// record must in addition be within `rel_tol` of 1.
fn ratio_report(law: String, constant: f64, exponent: f64, grid: &[f64], ratios: Vec<f64>, rel_tol: f64) -> LemmaReport {
    let mut records = Vec::with_capacity(grid.len());
    let mut prev_gap = f64::INFINITY;
    for (i, (&g, &r)) in grid.iter().zip(&ratios).enumerate() {
        let gap = (r - 1.0).abs();
        let mut pass = r.is_finite() && gap <= prev_gap + MONOTONE_SLACK;
        if i + 1 == grid.len() {
            pass &= gap <= rel_tol;
        }
        prev_gap = gap;
        records.push(LemmaRecord {
            law: law.clone(),
            grid_point: g,
            ratio: r,
            pass,
        });
    }
    let pass = !records.is_empty() && records.iter().all(|r| r.pass);
    LemmaReport {
        law,
        constant,
        exponent,
        records,
        pass,
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if let Some(&g) = grid.iter().find(|g| !(**g > 0.0)) {
        return Err(Error::range("grid_point", g, "grid points > 0"));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::range("grid", grid[0], "strictly decreasing grid"));
    }
    Ok(())
}

/// Ratios `(1 − ŵ(κ)) / (μκ^α)` over a decreasing `κ` grid.
pub fn verify_lemma1(jump: &JumpLaw, kappa_grid: &[f64], rel_tol: f64) -> Result<LemmaReport> {
    check_grid(kappa_grid)?;
    let mu = lemma1_mu(jump)?;
    let alpha = jump_exponent(jump)?;
    let ratios = kappa_grid
        .iter()
        .map(|&k| Ok(jump.cf_deficit(k)? / (mu * k.powf(alpha))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ratio_report(jump.name(), mu, alpha, kappa_grid, ratios, rel_tol))
}

/// Ratios `(1 − φ̃(s)) / (λs^β)` over a decreasing `s` grid.
pub fn verify_lemma2(wait: &WaitingTimeLaw, s_grid: &[f64], rel_tol: f64) -> Result<LemmaReport> {
    check_grid(s_grid)?;
    let lambda = lemma2_lambda(wait)?;
    let beta = wait_exponent(wait);
    let ratios = s_grid
        .iter()
        .map(|&s| Ok(wait.laplace_deficit(s)? / (lambda * s.powf(beta))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ratio_report(wait.name(), lambda, beta, s_grid, ratios, rel_tol))
}

/// Rescaled and respeeded transform
/// `φ̃_{τ,a}(s) = aφ̃(τs) / (1 − (1 − a)φ̃(τs))`.
pub fn respeed_waiting_lt<P: Fn(f64) -> f64>(phi_lt: P, tau: f64, a: f64, s: f64) -> f64 {
    respeed_from_deficit(1.0 - phi_lt(tau * s), a)
}

/// The same transform from the deficit `d = 1 − φ̃(τs)`:
/// `a(1 − d) / (d + a(1 − d))`.
pub fn respeed_from_deficit(deficit: f64, a: f64) -> f64 {
    let scaled = a * (1.0 - deficit);
    scaled / (deficit + scaled)
}

/// [`respeed_waiting_lt`] for a shipped law, evaluated through its
/// cancellation-free deficit.
pub fn respeed_law_lt(wait: &WaitingTimeLaw, tau: f64, a: f64, s: f64) -> Result<f64> {
    Ok(respeed_from_deficit(wait.laplace_deficit(tau * s)?, a))
}

/// Memory function transform `H̃(s) = (1 − φ̃(s)) / (s φ̃(s))`.
pub fn memory_function_lt<P: Fn(f64) -> f64>(phi_lt: P, s: f64) -> f64 {
    let phi = phi_lt(s);
    (1.0 - phi) / (s * phi)
}

/// Waiting-law transform recovered from the memory function,
/// `φ̃(s) = 1 / (1 + s H̃(s))`.
pub fn waiting_from_memory_lt(h_tilde: f64, s: f64) -> f64 {
    1.0 / (1.0 + s * h_tilde)
}

/// Solution of the transformed evolution equation with memory,
/// `H̃(s)[s û − 1] = −|κ|^α û`, i.e. `û = H̃ / (s H̃ + |κ|^α)`.
pub fn memory_evolution_lt(h_tilde: f64, alpha: f64, kappa: f64, s: f64) -> f64 {
    h_tilde / (s * h_tilde + kappa.abs().powf(alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalityRecord {
    pub law: String,
    pub tau: f64,
    pub sup_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalityReport {
    pub law: String,
    pub lambda: f64,
    pub beta: f64,
    pub records: Vec<UniversalityRecord>,
    pub pass: bool,
}

/// Distance of the respeeded law `φ̃_{τ, λτ^β}` from the Mittag-Leffler
/// transform `1/(1 + s^β)`, as a supremum over `s_grid`, for each `τ` of a
/// decreasing sequence. Passes iff the deviations do not grow and the last
/// one is below `tol`.
pub fn universality_sweep(wait: &WaitingTimeLaw, s_grid: &[f64], taus: &[f64], tol: f64) -> Result<UniversalityReport> {
    check_grid(taus)?;
    if s_grid.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let lambda = lemma2_lambda(wait)?;
    let beta = wait_exponent(wait);
    let law = wait.name();
    let mut records = Vec::with_capacity(taus.len());
    let mut prev = f64::INFINITY;
    for (i, &tau) in taus.iter().enumerate() {
        let a = lambda * tau.powf(beta);
        let mut sup = 0.0f64;
        for &s in s_grid {
            let v = respeed_law_lt(wait, tau, a, s)?;
            sup = sup.max((v - 1.0 / (1.0 + s.powf(beta))).abs());
        }
        let mut pass = sup <= prev + MONOTONE_SLACK;
        if i + 1 == taus.len() {
            pass &= sup < tol;
        }
        prev = sup;
        records.push(UniversalityRecord {
            law: law.clone(),
            tau,
            sup_deviation: sup,
            pass,
        });
    }
    let pass = records.iter().all(|r| r.pass);
    Ok(UniversalityReport {
        law,
        lambda,
        beta,
        records,
        pass,
    })
}

/// Time scale `τ = (μh^α/λ)^{1/β}` satisfying `λτ^β = μh^α`.
pub fn well_scaled_tau(alpha: f64, beta: f64, lambda: f64, mu: f64, h: f64) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("lambda", lambda), ("mu", mu), ("h", h)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::range(name, v, "strictly positive"));
        }
    }
    Ok((mu * h.powf(alpha) / lambda).powf(1.0 / beta))
}

/// Fourier-Laplace transform of the diffusion limit,
/// `s^{β−1} / (|κ|^α + s^β)`; exactly `1/s` at `κ = 0`.
pub fn diffusion_limit_lt(alpha: f64, beta: f64, kappa: f64, s: f64) -> f64 {
    if kappa == 0.0 {
        return 1.0 / s;
    }
    let sb = s.powf(beta);
    sb / s / (kappa.abs().powf(alpha) + sb)
}

/// Montroll-Weiss transform of the CTRW with waiting times scaled by `τ`
/// and jumps by `h`: `(1 − φ̃(τs))/s · 1/(1 − ŵ(hκ)φ̃(τs))`.
pub fn rescaled_montroll_weiss(wait: &WaitingTimeLaw, jump: &JumpLaw, tau: f64, h: f64, kappa: f64, s: f64) -> Result<Complex64> {
    if kappa == 0.0 {
        return Ok(Complex64::new(1.0 / s, 0.0));
    }
    let phi_deficit = wait.laplace_deficit(tau * s)?;
    let w_deficit = if jump.is_symmetric() {
        Complex64::new(jump.cf_deficit(h * kappa)?, 0.0)
    } else {
        Complex64::new(1.0, 0.0) - jump.cf(h * kappa)?
    };
    Ok(montroll_weiss_from_deficits(phi_deficit, w_deficit, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mittag_leffler::ml_laplace;
    use crate::params::{fl_green_function, validate_params};

    #[test]
    fn mu_examples() {
        assert_eq!(lemma1_mu(&JumpLaw::Gaussian { sigma2: 2.0 }).unwrap(), 1.0);
        assert_eq!(lemma1_mu(&JumpLaw::TwoPoint).unwrap(), 0.5);
        let mu = lemma1_mu(&JumpLaw::SymmetricPareto { alpha: 1.5, x0: 1.0 }).unwrap();
        // 0.75π / (Γ(2.5) sin(3π/4)) = π / √(π/2)... = √(2π)
        assert!((mu - (2.0 * PI).sqrt()).abs() < 1e-14, "{mu}");
        let stable = lemma1_mu(&JumpLaw::SymmetricStable { alpha: 1.2 }).unwrap();
        assert!((stable - 1.0).abs() < 1e-14);
        assert!(lemma1_mu(&JumpLaw::FellerStable { alpha: 1.5, theta: 0.2 }).is_err());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lemma2_lambda(&WaitingTimeLaw::Exponential { m: 1.0 }).unwrap(), 1.0);
        for &beta in &[0.3, 0.7] {
            let l = lemma2_lambda(&WaitingTimeLaw::MittagLeffler { beta }).unwrap();
            assert!((l - 1.0).abs() < 1e-14, "{l}");
            let e = lemma2_lambda(&WaitingTimeLaw::ExtremalStable { beta }).unwrap();
            assert!((e - 1.0).abs() < 1e-14, "{e}");
        }
        let p = lemma2_lambda(&WaitingTimeLaw::Pareto { beta: 0.5, t0: 1.0 }).unwrap();
        assert!((p - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lemma_ratio_examples() {
        let g = verify_lemma1(&JumpLaw::Gaussian { sigma2: 2.0 }, &[1e-3], 1e-6).unwrap();
        assert!((g.records[0].ratio - 1.0).abs() < 1e-6);
        let ml = verify_lemma2(&WaitingTimeLaw::MittagLeffler { beta: 0.7 }, &[0.5, 1e-2], 0.02).unwrap();
        for r in &ml.records {
            assert!((r.ratio - 1.0 / (1.0 + r.grid_point.powf(0.7))).abs() < 1e-14);
        }
        let e = verify_lemma2(&WaitingTimeLaw::Exponential { m: 1.0 }, &[1e-3], 1e-3).unwrap();
        assert!((e.records[0].ratio - 1.0 / (1.0 + 1e-3)).abs() < 1e-15);
        assert!(e.pass);
    }

    #[test]
    fn non_monotone_grid_is_rejected() {
        let r = verify_lemma2(&WaitingTimeLaw::Exponential { m: 1.0 }, &[1e-3, 1e-2], 0.1);
        assert!(r.is_err());
    }

    #[test]
    fn respeed_identity_and_fixed_points() {
        let phi = |s: f64| 1.0 / (1.0 + s.powf(0.6));
        for &s in &[0.1, 1.0, 10.0] {
            assert_eq!(respeed_waiting_lt(phi, 1.0, 1.0, s), phi(s));
            let exp = respeed_waiting_lt(|s| 1.0 / (1.0 + s), 0.01, 0.01, s);
            assert!((exp - 1.0 / (1.0 + s)).abs() < 1e-13);
        }
    }

    #[test]
    fn ml_self_similarity_under_respeeding() {
        for &beta in &[0.3, 0.6, 0.9] {
            for &(tau, a) in &[(0.1, 2.0), (10.0, 0.5), (1e-3, 1.0)] {
                for &s in &[0.1, 1.0, 10.0] {
                    let r = respeed_waiting_lt(|u| ml_laplace(beta, u), tau, a, s);
                    let want = ml_laplace(beta, tau * s / a.powf(1.0 / beta));
                    assert!((r - want).abs() < 1e-13, "beta {beta} tau {tau} a {a} s {s}");
                }
            }
        }
    }

    #[test]
    fn memory_function_examples() {
        for &s in &[0.1, 1.0, 7.0] {
            assert!((memory_function_lt(|u| 1.0 / (1.0 + u), s) - 1.0).abs() < 1e-15);
        }
        assert!((memory_function_lt(|u| ml_laplace(0.5, u), 4.0) - 0.5).abs() < 1e-15);
        for &s in &[0.01, 0.5, 3.0] {
            let phi = ml_laplace(0.8, s);
            let back = waiting_from_memory_lt(memory_function_lt(|u| ml_laplace(0.8, u), s), s);
            assert!((back - phi).abs() < 1e-14);
        }
    }

    #[test]
    fn memory_choice_reproduces_diffusion_limit() {
        for &(alpha, beta) in &[(2.0, 1.0), (1.5, 0.75), (0.7, 0.4)] {
            for &k in &[0.0, 0.3, 2.0] {
                for &s in &[0.05f64, 1.0, 20.0] {
                    let u = memory_evolution_lt(s.powf(beta - 1.0), alpha, k, s);
                    let want = diffusion_limit_lt(alpha, beta, k, s);
                    assert!((u - want).abs() <= 1e-14 * want, "{alpha} {beta} {k} {s}");
                }
            }
        }
    }

    #[test]
    fn well_scaled_examples() {
        assert!((well_scaled_tau(2.0, 1.0, 1.0, 1.0, 0.1).unwrap() - 0.01).abs() < 1e-16);
        assert!((well_scaled_tau(1.5, 0.75, 1.0, 1.0, 0.01).unwrap() - 1e-4).abs() < 1e-18);
        let f = ScalingFactors::well_scaled(1.3, 0.6, 1.7, 0.4, 0.05).unwrap();
        assert!((f.ratio(1.3, 0.6) - 1.0).abs() < 1e-14);
        assert!(f.is_well_scaled(1.3, 0.6));
        assert!(ScalingFactors::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn diffusion_limit_is_green_function() {
        for &(alpha, beta) in &[(2.0, 1.0), (1.2, 0.5), (0.5, 0.9)] {
            let p = validate_params(alpha, 0.0, beta).unwrap();
            for &k in &[0.0, 0.1, 1.0, 5.0] {
                for &s in &[0.01, 1.0, 30.0] {
                    let a = diffusion_limit_lt(alpha, beta, k, s);
                    let b = fl_green_function(&p, k, s);
                    assert!((a - b.re).abs() <= 1e-15 * a && b.im == 0.0);
                }
            }
        }
    }

    #[test]
    fn rescaled_montroll_weiss_converges() {
        let (alpha, beta) = (1.5, 0.9);
        let wait = WaitingTimeLaw::MittagLeffler { beta };
        let jump = JumpLaw::SymmetricStable { alpha };
        let tau = 1e-3f64;
        let h = (tau.powf(beta)).powf(1.0 / alpha);
        let mut worst = 0.0f64;
        for i in 0..=10 {
            for j in 0..=10 {
                let k = 0.5 + 1.5 * i as f64 / 10.0;
                let s = 0.5 + 1.5 * j as f64 / 10.0;
                let mw = rescaled_montroll_weiss(&wait, &jump, tau, h, k, s).unwrap();
                let lim = diffusion_limit_lt(alpha, beta, k, s);
                worst = worst.max((mw.re - lim).abs() / lim);
            }
        }
        assert!(worst < 0.01, "{worst}");
    }
}
