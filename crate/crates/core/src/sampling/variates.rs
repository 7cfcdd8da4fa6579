//! Exact variate generators.
//!
//! Stable laws use the Chambers-Mallows-Stuck construction. The generator's
//! native skewness angle relates to the Feller skewness by `αB = −θπ/2`,
//! which turns the textbook formula into
//!
//! `X = sin(αV − θπ/2) / cos(V)^{1/α} · [cos((1 − α)V + θπ/2) / W]^{(1−α)/α}`
//!
//! with `V ~ U(−π/2, π/2)` and `W ~ Exp(1)`, so that
//! `E e^{iκX} = exp(−|κ|^α e^{i sign(κ) θπ/2})`. With `α = β < 1` and
//! `θ = −β` this is Kanter's one-sided form with Laplace transform
//! `exp(−s^β)`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use super::rng::RngStream;
use crate::error::Result;
use crate::params::check_feller;

/// Symmetric α-stable deviate with characteristic function `exp(−|κ|^α)`;
/// `α = 2` is the Gaussian with variance 2.
pub fn sample_symmetric_stable(alpha: f64, rng: &mut RngStream) -> f64 {
    assert!(alpha > 0.0 && alpha <= 2.0, "alpha must be in (0, 2]");
    if alpha == 2.0 {
        return SQRT_2 * rng.standard_normal();
    }
    let v = PI * (rng.uniform_open() - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w = rng.exponential();
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Feller-parametrized stable deviate with characteristic function
/// `exp(−|κ|^α e^{i sign(κ) θπ/2})`. `θ = 0` delegates to
/// [`sample_symmetric_stable`] and consumes the stream identically.
pub fn sample_feller_stable(alpha: f64, theta: f64, rng: &mut RngStream) -> Result<f64> {
    check_feller(alpha, theta)?;
    Ok(feller_unchecked(alpha, theta, rng))
}

#[inline]
pub(crate) fn feller_unchecked(alpha: f64, theta: f64, rng: &mut RngStream) -> f64 {
    if theta == 0.0 {
        return sample_symmetric_stable(alpha, rng);
    }
    let shift = theta * FRAC_PI_2;
    let v = PI * (rng.uniform_open() - 0.5);
    if alpha == 1.0 {
        // Cauchy with scale cos(θπ/2), centred at −sin(θπ/2)
        return shift.cos() * v.tan() - shift.sin();
    }
    let w = rng.exponential();
    (alpha * v - shift).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v + shift).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Extremal (one-sided) β-stable deviate with Laplace transform
/// `exp(−s^β)`. `β = 1` is the point mass at 1.
pub fn sample_extremal_stable(beta: f64, rng: &mut RngStream) -> f64 {
    assert!(beta > 0.0 && beta <= 1.0, "beta must be in (0, 1]");
    if beta == 1.0 {
        return 1.0;
    }
    let u = PI * rng.uniform_open();
    let w = rng.exponential();
    let (su, cu) = u.sin_cos();
    let (sb, cb) = (beta * u).sin_cos();
    // sin((1 − β)u); its rounding error is damped by the exponent (1 − β)/β
    let sc = su * cb - cu * sb;
    let inv = 1.0 / beta;
    (sb.ln() - inv * su.ln() + (inv - 1.0) * (sc.ln() - w.ln())).exp()
}

/// Mittag-Leffler waiting time, survival `E_β(−t^β)`, as the product
/// `E^{1/β} · S` of a unit exponential and an extremal β-stable deviate.
pub fn sample_ml_waiting(beta: f64, rng: &mut RngStream) -> f64 {
    assert!(beta > 0.0 && beta <= 1.0, "beta must be in (0, 1]");
    let e = rng.exponential();
    if beta == 1.0 {
        return e;
    }
    e.powf(1.0 / beta) * sample_extremal_stable(beta, rng)
}

/// Inverse survival of the Pareto waiting law `Ψ(t) = (t/t0)^{−β}`, `t ≥ t0`.
pub fn pareto_quantile(beta: f64, t0: f64, u: f64) -> f64 {
    t0 * u.powf(-1.0 / beta)
}

/// Pareto waiting time with `Ψ(t) = (t/t0)^{−β}` for `t ≥ t0`.
pub fn sample_pareto_waiting(beta: f64, t0: f64, rng: &mut RngStream) -> f64 {
    assert!(beta > 0.0 && beta < 1.0, "beta must be in (0, 1)");
    assert!(t0 > 0.0, "t0 must be positive");
    pareto_quantile(beta, t0, rng.uniform_open())
}

/// Symmetric power-law jump: uniform sign, magnitude with
/// `P(|X| > x) = (x/x0)^{−α}` for `x ≥ x0`.
pub fn sample_powerlaw_jump(alpha: f64, x0: f64, rng: &mut RngStream) -> f64 {
    assert!(alpha > 0.0 && alpha < 2.0, "alpha must be in (0, 2)");
    assert!(x0 > 0.0, "x0 must be positive");
    let sign = rng.sign();
    sign * x0 * rng.uniform_open().powf(-1.0 / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremal_is_feller_with_theta_minus_beta() {
        // same construction, same stream consumption
        for &b in &[0.3, 0.5, 0.8] {
            let mut r1 = RngStream::new(5, 0);
            let mut r2 = RngStream::new(5, 0);
            for _ in 0..1000 {
                let x = sample_extremal_stable(b, &mut r1);
                let y = sample_feller_stable(b, -b, &mut r2).unwrap();
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1e-300), "{x} {y}");
            }
        }
    }

    #[test]
    fn symmetric_reduction_is_bitwise() {
        let mut r1 = RngStream::new(9, 2);
        let mut r2 = RngStream::new(9, 2);
        for _ in 0..1000 {
            let x = sample_symmetric_stable(1.3, &mut r1);
            let y = sample_feller_stable(1.3, 0.0, &mut r2).unwrap();
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn feller_rejects_outside_region() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_feller_stable(1.5, 0.6, &mut rng).is_err());
        assert!(sample_feller_stable(2.5, 0.0, &mut rng).is_err());
    }

    #[test]
    fn extremal_degenerate_at_beta_one() {
        let mut rng = RngStream::new(0, 0);
        for _ in 0..100 {
            assert_eq!(sample_extremal_stable(1.0, &mut rng), 1.0);
        }
    }

    #[test]
    fn pareto_quantile_inverse() {
        assert_eq!(pareto_quantile(0.5, 1.0, 0.25), 16.0);
        assert_eq!(pareto_quantile(0.5, 1.0, 0.5), 4.0);
        assert_eq!(pareto_quantile(0.5, 2.0, 1.0), 2.0);
    }

    #[test]
    fn powerlaw_magnitude_support() {
        let mut rng = RngStream::new(3, 3);
        for _ in 0..100_000 {
            assert!(sample_powerlaw_jump(1.5, 0.7, &mut rng).abs() >= 0.7);
        }
    }
}
