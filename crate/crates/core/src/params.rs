//! The `(α, θ, β)` parameter triple and the closed-form Fourier-Laplace
//! quantities of the space-time fractional diffusion equation.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mittag_leffler;
use crate::special::gamma;

/// Orders of the space (`alpha`) and time (`beta`) derivatives and the
/// skewness `theta`, restricted to the Feller region
/// `0 < α ≤ 2`, `|θ| ≤ min{α, 2 − α}`, `0 < β ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    alpha: f64,
    theta: f64,
    beta: f64,
}

impl FracParams {
    pub fn new(alpha: f64, theta: f64, beta: f64) -> Result<Self> {
        validate_params(alpha, theta, beta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_symmetric(&self) -> bool {
        self.theta == 0.0
    }
}

/// Check `(α, θ)` against the Feller region only.
pub(crate) fn check_feller(alpha: f64, theta: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 2.0 {
        return Err(Error::range("alpha", alpha, "0 < alpha <= 2"));
    }
    if !theta.is_finite() || theta.abs() > alpha.min(2.0 - alpha) {
        return Err(Error::range("theta", theta, "|theta| <= min(alpha, 2 - alpha)"));
    }
    Ok(())
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 || beta > 1.0 {
        return Err(Error::range("beta", beta, "0 < beta <= 1"));
    }
    Ok(())
}

pub fn validate_params(alpha: f64, theta: f64, beta: f64) -> Result<FracParams> {
    check_feller(alpha, theta)?;
    check_beta(beta)?;
    Ok(FracParams { alpha, theta, beta })
}

/// Spread of the fundamental solution at a given time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variance {
    Finite(f64),
    Infinite,
}

impl Variance {
    pub fn finite(self) -> Option<f64> {
        match self {
            Variance::Finite(v) => Some(v),
            Variance::Infinite => None,
        }
    }
}

/// Fourier symbol `ψ(κ) = |κ|^α e^{i sign(κ) θπ/2}` of the Riesz-Feller
/// derivative (which acts on transforms as multiplication by `−ψ`).
pub fn riesz_feller_symbol(p: &FracParams, kappa: f64) -> Complex64 {
    if kappa == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let modulus = kappa.abs().powf(p.alpha);
    if p.theta == 0.0 {
        return Complex64::new(modulus, 0.0);
    }
    let phase = kappa.signum() * p.theta * FRAC_PI_2;
    Complex64::from_polar(modulus, phase)
}

/// Fourier-Laplace transform of the Green function,
/// `û(κ, s) = s^{β−1} / (s^β + ψ(κ))`.
pub fn fl_green_function(p: &FracParams, kappa: f64, s: f64) -> Complex64 {
    if kappa == 0.0 {
        return Complex64::new(1.0 / s, 0.0);
    }
    let sb = s.powf(p.beta);
    Complex64::new(sb / s, 0.0) / (riesz_feller_symbol(p, kappa) + sb)
}

/// `σ²(t)` of the symmetric fundamental solution.
pub fn theoretical_variance(p: &FracParams, t: f64) -> Result<Variance> {
    if p.theta != 0.0 {
        return Err(Error::Unsupported("variance is defined for theta = 0 only"));
    }
    if !(t > 0.0) {
        return Err(Error::range("t", t, "t > 0"));
    }
    if p.alpha < 2.0 {
        return Ok(Variance::Infinite);
    }
    if p.beta == 1.0 {
        return Ok(Variance::Finite(2.0 * t));
    }
    Ok(Variance::Finite(2.0 * t.powf(p.beta) / gamma(1.0 + p.beta)))
}

/// Fourier transform in space at physical time `t`:
/// `û(κ, t) = E_β(−|κ|^α t^β)`, symmetric case only.
pub fn fourier_green_time(p: &FracParams, kappa: f64, t: f64) -> Result<f64> {
    if p.theta != 0.0 {
        return Err(Error::Unsupported("fourier_green_time requires theta = 0"));
    }
    if !(t >= 0.0) {
        return Err(Error::range("t", t, "t >= 0"));
    }
    let arg = kappa.abs().powf(p.alpha) * t.powf(p.beta);
    Ok(mittag_leffler::mittag_leffler(p.beta, arg)?.value)
}
