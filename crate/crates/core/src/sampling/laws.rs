use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use super::variates::{
    feller_unchecked, sample_extremal_stable, sample_ml_waiting, sample_pareto_waiting, sample_powerlaw_jump, sample_symmetric_stable,
};
use crate::error::{Error, Result};
use crate::mittag_leffler::{ml_laplace, ml_survival, ml_waiting_density};
use crate::params::{check_beta, check_feller};
use crate::quad::{integrate, integrate_to_infinity, QuadConfig};
use crate::special::{gamma, rgamma, sin_pi};
use crate::stable_density::{one_sided_stable_density, one_sided_stable_survival};

/// Large-time behaviour of a waiting law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingTail {
    /// Finite mean `ρ`.
    FiniteMean(f64),
    /// `Ψ(t) ~ c β⁻¹ t^{−β}` with `0 < β < 1`.
    PowerLaw { c: f64, beta: f64 },
}

/// Large-`|x|` behaviour of a jump law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpTail {
    /// Finite variance `σ²`.
    FiniteVariance(f64),
    /// Upper tail `P(X > x) ~ b α⁻¹ x^{−α}` with `0 < α < 2`.
    PowerLaw { b: f64, alpha: f64 },
}

/// Distribution of the waiting time between CTRW jumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaitingTimeLaw {
    /// Rate-`m` exponential.
    Exponential { m: f64 },
    /// Survival `E_β(−t^β)`.
    MittagLeffler { beta: f64 },
    /// Survival `(t/t0)^{−β}` for `t ≥ t0`.
    Pareto { beta: f64, t0: f64 },
    /// One-sided stable with Laplace transform `exp(−s^β)`.
    ExtremalStable { beta: f64 },
}

impl WaitingTimeLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WaitingTimeLaw::Exponential { m } => {
                if !(m > 0.0 && m.is_finite()) {
                    return Err(Error::range("m", m, "m > 0"));
                }
            }
            WaitingTimeLaw::MittagLeffler { beta } | WaitingTimeLaw::ExtremalStable { beta } => check_beta(beta)?,
            WaitingTimeLaw::Pareto { beta, t0 } => {
                if !(beta > 0.0 && beta < 1.0) {
                    return Err(Error::range("beta", beta, "0 < beta < 1"));
                }
                if !(t0 > 0.0 && t0.is_finite()) {
                    return Err(Error::range("t0", t0, "t0 > 0"));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match *self {
            WaitingTimeLaw::Exponential { m } => format!("exponential(m={m})"),
            WaitingTimeLaw::MittagLeffler { beta } => format!("mittag_leffler(beta={beta})"),
            WaitingTimeLaw::Pareto { beta, t0 } => format!("pareto(beta={beta},t0={t0})"),
            WaitingTimeLaw::ExtremalStable { beta } => format!("extremal_stable(beta={beta})"),
        }
    }

    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match *self {
            WaitingTimeLaw::Exponential { m } => rng.exponential() / m,
            WaitingTimeLaw::MittagLeffler { beta } => sample_ml_waiting(beta, rng),
            WaitingTimeLaw::Pareto { beta, t0 } => sample_pareto_waiting(beta, t0, rng),
            WaitingTimeLaw::ExtremalStable { beta } => sample_extremal_stable(beta, rng),
        }
    }

    /// Survival `Ψ(t) = P(T > t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(1.0);
        }
        match *self {
            WaitingTimeLaw::Exponential { m } => Ok((-m * t).exp()),
            WaitingTimeLaw::MittagLeffler { beta } => ml_survival(beta, t),
            WaitingTimeLaw::Pareto { beta, t0 } => Ok(if t < t0 { 1.0 } else { (t / t0).powf(-beta) }),
            WaitingTimeLaw::ExtremalStable { beta } => {
                if beta == 1.0 {
                    return Ok(if t < 1.0 { 1.0 } else { 0.0 });
                }
                one_sided_stable_survival(beta, t)
            }
        }
    }

    /// Density `φ(t)`; `+∞` where it diverges (`t → 0⁺` for ML with `β < 1`).
    pub fn density(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Ok(0.0);
        }
        match *self {
            WaitingTimeLaw::Exponential { m } => Ok(m * (-m * t).exp()),
            WaitingTimeLaw::MittagLeffler { beta } => {
                if t == 0.0 {
                    return Ok(if beta < 1.0 { f64::INFINITY } else { 1.0 });
                }
                ml_waiting_density(beta, t)
            }
            WaitingTimeLaw::Pareto { beta, t0 } => Ok(if t < t0 { 0.0 } else { beta / t0 * (t / t0).powf(-beta - 1.0) }),
            WaitingTimeLaw::ExtremalStable { beta } => {
                if beta == 1.0 {
                    return Err(Error::Unsupported("the beta = 1 extremal law is a point mass"));
                }
                Ok(one_sided_stable_density(beta, t)?.value)
            }
        }
    }

    /// Laplace transform `φ̃(s)`.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        match *self {
            WaitingTimeLaw::Exponential { m } => Ok(m / (m + s)),
            WaitingTimeLaw::MittagLeffler { beta } => Ok(ml_laplace(beta, s)),
            WaitingTimeLaw::ExtremalStable { beta } => Ok((-s.powf(beta)).exp()),
            WaitingTimeLaw::Pareto { .. } => Ok(1.0 - self.laplace_deficit(s)?),
        }
    }

    /// `1 − φ̃(s)`, computed without cancellation for small `s`.
    pub fn laplace_deficit(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::range("s", s, "s >= 0"));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        match *self {
            WaitingTimeLaw::Exponential { m } => Ok(s / (m + s)),
            WaitingTimeLaw::MittagLeffler { beta } => {
                let sb = s.powf(beta);
                Ok(sb / (1.0 + sb))
            }
            WaitingTimeLaw::ExtremalStable { beta } => Ok(-(-s.powf(beta)).exp_m1()),
            WaitingTimeLaw::Pareto { beta, t0 } => pareto_laplace_deficit(beta, s * t0),
        }
    }

    pub fn tail(&self) -> WaitingTail {
        match *self {
            WaitingTimeLaw::Exponential { m } => WaitingTail::FiniteMean(1.0 / m),
            WaitingTimeLaw::MittagLeffler { beta } | WaitingTimeLaw::ExtremalStable { beta } if beta == 1.0 => WaitingTail::FiniteMean(1.0),
            // Ψ(t) ~ t^{−β}/Γ(1−β) for both ML and the one-sided stable law
            WaitingTimeLaw::MittagLeffler { beta } | WaitingTimeLaw::ExtremalStable { beta } => WaitingTail::PowerLaw {
                c: beta * rgamma(1.0 - beta),
                beta,
            },
            WaitingTimeLaw::Pareto { beta, t0 } => WaitingTail::PowerLaw {
                c: beta * t0.powf(beta),
                beta,
            },
        }
    }
}

/// `1 − φ̃(s)` for the Pareto law at `y0 = s t0`:
/// `β y0^β ∫_{y0}^∞ (1 − e^{−y}) y^{−β−1} dy`.
fn pareto_laplace_deficit(beta: f64, y0: f64) -> Result<f64> {
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_intervals: 2000,
    };
    let split = y0.max(1.0);
    let head = integrate(|y: f64| -(-y).exp_m1() * y.powf(-beta - 1.0), y0, split, cfg)?;
    // beyond the split: ∫ y^{−β−1} exactly, minus the fast-decaying e^{−y} part
    let decay = integrate_to_infinity(|y: f64| (-y).exp() * y.powf(-beta - 1.0), split, cfg)?;
    let tail = split.powf(-beta) / beta - decay.value;
    Ok(beta * y0.powf(beta) * (head.value + tail))
}

/// Distribution of a single CTRW jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JumpLaw {
    /// `±1` with probability ½ each.
    TwoPoint,
    /// Centred Gaussian with variance `sigma2`.
    Gaussian { sigma2: f64 },
    /// Characteristic function `exp(−|κ|^α)`.
    SymmetricStable { alpha: f64 },
    /// Characteristic function `exp(−|κ|^α e^{i sign(κ) θπ/2})`.
    FellerStable { alpha: f64, theta: f64 },
    /// Uniform sign, `P(|X| > x) = (x/x0)^{−α}` for `x ≥ x0`.
    SymmetricPareto { alpha: f64, x0: f64 },
}

impl JumpLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpLaw::TwoPoint => {}
            JumpLaw::Gaussian { sigma2 } => {
                if !(sigma2 > 0.0 && sigma2.is_finite()) {
                    return Err(Error::range("sigma2", sigma2, "sigma2 > 0"));
                }
            }
            JumpLaw::SymmetricStable { alpha } => check_feller(alpha, 0.0)?,
            JumpLaw::FellerStable { alpha, theta } => check_feller(alpha, theta)?,
            JumpLaw::SymmetricPareto { alpha, x0 } => {
                if !(alpha > 0.0 && alpha < 2.0) {
                    return Err(Error::range("alpha", alpha, "0 < alpha < 2"));
                }
                if !(x0 > 0.0 && x0.is_finite()) {
                    return Err(Error::range("x0", x0, "x0 > 0"));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match *self {
            JumpLaw::TwoPoint => "two_point".to_string(),
            JumpLaw::Gaussian { sigma2 } => format!("gaussian(sigma2={sigma2})"),
            JumpLaw::SymmetricStable { alpha } => format!("symmetric_stable(alpha={alpha})"),
            JumpLaw::FellerStable { alpha, theta } => format!("feller_stable(alpha={alpha},theta={theta})"),
            JumpLaw::SymmetricPareto { alpha, x0 } => format!("symmetric_pareto(alpha={alpha},x0={x0})"),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(*self, JumpLaw::FellerStable { theta, .. } if theta != 0.0)
    }

    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match *self {
            JumpLaw::TwoPoint => rng.sign(),
            JumpLaw::Gaussian { sigma2 } => sigma2.sqrt() * rng.standard_normal(),
            JumpLaw::SymmetricStable { alpha } => sample_symmetric_stable(alpha, rng),
            JumpLaw::FellerStable { alpha, theta } => feller_unchecked(alpha, theta, rng),
            JumpLaw::SymmetricPareto { alpha, x0 } => sample_powerlaw_jump(alpha, x0, rng),
        }
    }

    /// Characteristic function `ŵ(κ) = E e^{iκX}`.
    pub fn cf(&self, kappa: f64) -> Result<Complex64> {
        match *self {
            JumpLaw::FellerStable { alpha, theta } if theta != 0.0 => {
                if kappa == 0.0 {
                    return Ok(Complex64::new(1.0, 0.0));
                }
                let psi = Complex64::from_polar(kappa.abs().powf(alpha), kappa.signum() * theta * FRAC_PI_2);
                Ok((-psi).exp())
            }
            _ => Ok(Complex64::new(1.0 - self.cf_deficit(kappa)?, 0.0)),
        }
    }

    /// `1 − ŵ(κ)` for symmetric laws, computed without cancellation for
    /// small `|κ|`.
    pub fn cf_deficit(&self, kappa: f64) -> Result<f64> {
        let k = kappa.abs();
        if k == 0.0 {
            return Ok(0.0);
        }
        match *self {
            JumpLaw::TwoPoint => {
                let h = (0.5 * k).sin();
                Ok(2.0 * h * h)
            }
            JumpLaw::Gaussian { sigma2 } => Ok(-(-0.5 * sigma2 * k * k).exp_m1()),
            JumpLaw::SymmetricStable { alpha } => Ok(-(-k.powf(alpha)).exp_m1()),
            JumpLaw::FellerStable { alpha, theta } => {
                if theta != 0.0 {
                    return Err(Error::Unsupported("cf_deficit requires a symmetric law"));
                }
                Ok(-(-k.powf(alpha)).exp_m1())
            }
            JumpLaw::SymmetricPareto { alpha, x0 } => pareto_cf_deficit(alpha, k * x0),
        }
    }

    pub fn tail(&self) -> Result<JumpTail> {
        match *self {
            JumpLaw::TwoPoint => Ok(JumpTail::FiniteVariance(1.0)),
            JumpLaw::Gaussian { sigma2 } => Ok(JumpTail::FiniteVariance(sigma2)),
            JumpLaw::FellerStable { theta, .. } if theta != 0.0 => Err(Error::Unsupported("tail constants for skewed jumps")),
            JumpLaw::SymmetricStable { alpha } | JumpLaw::FellerStable { alpha, .. } => {
                if alpha == 2.0 {
                    return Ok(JumpTail::FiniteVariance(2.0));
                }
                // P(X > x) ~ Γ(α) sin(απ/2)/π · x^{−α}, so b = Γ(α+1) sin(απ/2)/π
                Ok(JumpTail::PowerLaw {
                    b: gamma(alpha + 1.0) * sin_pi(0.5 * alpha) / PI,
                    alpha,
                })
            }
            JumpLaw::SymmetricPareto { alpha, x0 } => Ok(JumpTail::PowerLaw {
                b: 0.5 * alpha * x0.powf(alpha),
                alpha,
            }),
        }
    }
}

/// `1 − ŵ(κ)` of the symmetric Pareto law at `y0 = |κ| x0`:
/// `α y0^α ∫_{y0}^∞ (1 − cos y) y^{−α−1} dy`.
///
/// The oscillatory integral is summed period by period up to `Y = 2πM`;
/// beyond `Y` the non-oscillating part is exact and the cosine part is
/// bounded by `2(α+1) Y^{−α−2}` after one integration by parts.
fn pareto_cf_deficit(alpha: f64, y0: f64) -> Result<f64> {
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 500,
    };
    let f = |y: f64| {
        let h = (0.5 * y).sin();
        2.0 * h * h * y.powf(-alpha - 1.0)
    };
    // first panel to the next multiple of 2π, then whole periods
    let mut lo = y0;
    let mut hi = (y0 / TAU).floor() * TAU + TAU;
    let mut sum = 0.0;
    let mut err = 0.0;
    loop {
        let r = integrate_small_tol(&f, lo, hi, cfg, sum)?;
        sum += r.0;
        err += r.1;
        let bound = 2.0 * (alpha + 1.0) * hi.powf(-alpha - 2.0);
        if bound <= 1e-14 * sum {
            let tail = hi.powf(-alpha) / alpha;
            let total = sum + tail;
            if err > 1e-10 * total {
                return Err(Error::Quadrature {
                    value: total,
                    est_error: err + bound,
                });
            }
            return Ok(alpha * y0.powf(alpha) * total);
        }
        lo = hi;
        hi += TAU;
    }
}

fn integrate_small_tol<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: QuadConfig, running: f64) -> Result<(f64, f64)> {
    let cfg = QuadConfig {
        abs_tol: 1e-16 * running,
        ..cfg
    };
    let r = integrate(f, a, b, cfg)?;
    Ok((r.value, r.abs_error))
}
