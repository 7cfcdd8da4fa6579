//! Densities of the standardized stable laws used by the subordination
//! oracle: the one-sided law with Laplace transform `exp(−s^β)` and the
//! symmetric law with characteristic function `exp(−|κ|^α)`.
//!
//! Both are evaluated by their convergent or asymptotic power series far
//! from the origin and by Zolotarev-type integral representations with a
//! positive integrand elsewhere:
//!
//! * one-sided (Kanter): `ḡ_β(r) = q/π · r^{−q−1} ∫_0^π A(u) e^{−A(u) r^{−q}} du`,
//!   `q = β/(1−β)`, `A(u) = [sin^β(βu) sin^{1−β}((1−β)u) / sin u]^{1/(1−β)}`;
//! * symmetric (Nolan): `f_α(x) = α x^{1/(α−1)} / (π|α−1|) ∫_0^{π/2} V(φ) e^{−x^{α/(α−1)} V(φ)} dφ`,
//!   `V(φ) = (cos φ / sin αφ)^{α/(α−1)} cos((α−1)φ) / cos φ`.
//!
//! Both integrands are unimodal; the quadrature splits at the mode and
//! refines geometrically towards it, which keeps the adaptive rule from
//! stepping over a narrow peak.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::special::{gamma, ln_gamma, sin_pi};

/// Target relative accuracy for the series branches.
const SERIES_REL_TOL: f64 = 1e-13;
const MAX_SERIES_TERMS: usize = 4000;
/// Geometric refinement levels on each side of the integrand's mode.
const REFINE_LEVELS: i32 = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableDensityEval {
    pub value: f64,
    pub est_error: f64,
}

impl StableDensityEval {
    fn exact(value: f64) -> Self {
        StableDensityEval { value, est_error: 0.0 }
    }
}

fn check_open_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::range("beta", beta, "0 < beta < 1"));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::range("alpha", alpha, "0 < alpha <= 2"));
    }
    Ok(())
}

/// Sum `Σ_{k≥1} (−1)^{k+1} Γ(ak+1)/k! · sin(kπa/2·w) · y^{−ak}` where the
/// sine argument is passed as `phase(k)`, stopping at the smallest term for
/// divergent cases. Returns `(sum, error estimate)` or `None` when the
/// terms overflow or cancellation ruins the result.
fn power_series(a: f64, ln_y: f64, phase: impl Fn(usize) -> f64) -> Option<(f64, f64)> {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut prev_env = f64::INFINITY;
    let mut tail = f64::INFINITY;
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        let ln_env = ln_gamma(a * kf + 1.0) - ln_gamma(kf + 1.0) - a * kf * ln_y;
        if ln_env > 700.0 {
            return None;
        }
        let env = ln_env.exp();
        if env > prev_env && k > 2 {
            // asymptotic regime: terms started growing, stop at the minimum
            tail = prev_env;
            break;
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * env * phase(k);
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        abs_sum += term.abs();
        if env <= 1e-17 * sum.abs() {
            tail = env;
            break;
        }
        prev_env = env;
    }
    let est = tail + abs_sum * 4.0 * f64::EPSILON;
    if !sum.is_finite() || !est.is_finite() {
        return None;
    }
    Some((sum, est))
}

/// Integrate a unimodal integrand on `[lo, hi]`, splitting at `mode` and
/// refining geometrically towards it on both sides.
fn integrate_unimodal<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, mode: f64) -> Result<(f64, f64)> {
    let mode = mode.clamp(lo, hi);
    let mut points = vec![mode];
    let left = mode - lo;
    let right = hi - mode;
    for j in 0..=REFINE_LEVELS {
        let scale = 4f64.powi(-j);
        if left > 0.0 {
            points.push(mode - left * scale);
        }
        if right > 0.0 {
            points.push(mode + right * scale);
        }
    }
    points.push(lo);
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut value = 0.0f64;
    let mut err = 0.0;
    // integrate outwards from the mode so the running total sets the
    // absolute tolerance of the negligible outer pieces
    let mut pieces: Vec<(f64, f64)> = points.windows(2).map(|w| (w[0], w[1])).collect();
    pieces.sort_by(|p, q| {
        let dp = (0.5 * (p.0 + p.1) - mode).abs();
        let dq = (0.5 * (q.0 + q.1) - mode).abs();
        dp.total_cmp(&dq)
    });
    for (a, b) in pieces {
        let cfg = QuadConfig {
            abs_tol: (1e-15 * value.abs()).max(1e-300),
            rel_tol: 1e-12,
            max_intervals: 2000,
        };
        let r = integrate(&f, a, b, cfg)?;
        value += r.value;
        err += r.abs_error;
    }
    Ok((value, err))
}

/// Bisection for the point where an increasing-or-decreasing function of
/// `u` crosses `level`; returns an endpoint when there is no crossing.
fn crossing<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, level: f64) -> f64 {
    let eps = 1e-12 * (hi - lo);
    let (glo, ghi) = (g(lo + eps), g(hi - eps));
    let increasing = ghi > glo;
    if (increasing && level <= glo) || (!increasing && level >= glo) {
        return lo;
    }
    if (increasing && level >= ghi) || (!increasing && level <= ghi) {
        return hi;
    }
    let (mut a, mut b) = (lo + eps, hi - eps);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if (g(m) < level) == increasing {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `ln A(u)` of Kanter's representation.
fn kanter_ln_a(beta: f64, u: f64) -> f64 {
    (beta * (beta * u).sin().ln() + (1.0 - beta) * ((1.0 - beta) * u).sin().ln() - u.sin().ln()) / (1.0 - beta)
}

/// `A(0⁺) = (1 − β) β^{β/(1−β)}`, the minimum of `A` on `(0, π)`.
fn kanter_a0(beta: f64) -> f64 {
    (1.0 - beta) * beta.powf(beta / (1.0 - beta))
}

fn levy_density(r: f64) -> f64 {
    (-0.25 / r).exp() / (2.0 * PI.sqrt() * r.powf(1.5))
}

/// Density `ḡ_β(r)` of the one-sided stable law with Laplace transform
/// `exp(−s^β)`, `0 < β < 1`. Zero for `r ≤ 0`.
pub fn one_sided_stable_density(beta: f64, r: f64) -> Result<StableDensityEval> {
    check_open_beta(beta)?;
    if r.is_nan() {
        return Err(Error::range("r", r, "r > 0"));
    }
    if r <= 0.0 || r.is_infinite() {
        return Ok(StableDensityEval::exact(0.0));
    }
    if beta == 0.5 {
        return Ok(StableDensityEval {
            value: levy_density(r),
            est_error: 4.0 * f64::EPSILON * levy_density(r),
        });
    }
    if let Some((s, e)) = power_series(beta, r.ln(), |k| sin_pi(k as f64 * beta)) {
        let value = s / (PI * r);
        let est = e / (PI * r);
        if est <= SERIES_REL_TOL * value.abs() {
            return Ok(StableDensityEval { value, est_error: est });
        }
    }
    kanter_density(beta, r)
}

fn kanter_density(beta: f64, r: f64) -> Result<StableDensityEval> {
    let q = beta / (1.0 - beta);
    let ln_z = -q * r.ln();
    let z = ln_z.exp();
    let a0 = kanter_a0(beta);
    let ln_pref = (q / PI).ln() - (q + 1.0) * r.ln() - a0 * z;
    if ln_pref < -745.0 {
        return Ok(StableDensityEval::exact(0.0));
    }
    let integrand = |u: f64| {
        let ln_a = kanter_ln_a(beta, u);
        let a = ln_a.exp();
        if !a.is_finite() {
            return 0.0;
        }
        (ln_a - (a - a0) * z).exp()
    };
    let mode = crossing(|u| kanter_ln_a(beta, u), 0.0, PI, -ln_z);
    let (v, e) = integrate_unimodal(integrand, 0.0, PI, mode)?;
    let pref = ln_pref.exp();
    Ok(StableDensityEval {
        value: pref * v,
        est_error: pref * e,
    })
}

/// Survival `P(S > r)` of the one-sided stable law.
pub fn one_sided_stable_survival(beta: f64, r: f64) -> Result<f64> {
    check_open_beta(beta)?;
    if r.is_nan() {
        return Err(Error::range("r", r, "r > 0"));
    }
    if r <= 0.0 {
        return Ok(1.0);
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    // termwise integral of the density series: Γ(βk+1)/(βk) = Γ(βk)
    let ln_r = r.ln();
    if let Some((s, e)) = power_series(beta, ln_r, |k| sin_pi(k as f64 * beta) / (beta * k as f64)) {
        let value = s / PI;
        if e / PI <= SERIES_REL_TOL * value.abs() && value <= 1.0 {
            return Ok(value);
        }
    }
    Ok(1.0 - one_sided_cdf_integral(beta, r)?)
}

/// Distribution function `P(S ≤ r)` of the one-sided stable law.
pub fn one_sided_stable_cdf(beta: f64, r: f64) -> Result<f64> {
    check_open_beta(beta)?;
    if r.is_nan() {
        return Err(Error::range("r", r, "r > 0"));
    }
    if r <= 0.0 {
        return Ok(0.0);
    }
    let cdf = one_sided_cdf_integral(beta, r)?;
    if cdf > 0.5 {
        return Ok(1.0 - one_sided_stable_survival(beta, r)?);
    }
    Ok(cdf)
}

fn one_sided_cdf_integral(beta: f64, r: f64) -> Result<f64> {
    let q = beta / (1.0 - beta);
    let ln_z = -q * r.ln();
    let z = ln_z.exp();
    let a0 = kanter_a0(beta);
    if a0 * z > 745.0 {
        return Ok(0.0);
    }
    let integrand = |u: f64| {
        let a = kanter_ln_a(beta, u).exp();
        if !a.is_finite() {
            return 0.0;
        }
        (-(a - a0) * z).exp()
    };
    let mode = crossing(|u| kanter_ln_a(beta, u), 0.0, PI, -ln_z);
    let (v, _) = integrate_unimodal(integrand, 0.0, PI, mode)?;
    Ok((-a0 * z).exp() * v / PI)
}

/// Density of the standard symmetric α-stable law, characteristic
/// function `exp(−|κ|^α)`.
pub fn symmetric_stable_density(alpha: f64, x: f64) -> Result<StableDensityEval> {
    check_alpha(alpha)?;
    if x.is_nan() {
        return Err(Error::range("x", x, "finite x"));
    }
    let x = x.abs();
    if x.is_infinite() {
        return Ok(StableDensityEval::exact(0.0));
    }
    if alpha == 2.0 {
        let v = (-0.25 * x * x).exp() / (2.0 * PI.sqrt());
        return Ok(StableDensityEval {
            value: v,
            est_error: 4.0 * f64::EPSILON * v,
        });
    }
    if alpha == 1.0 {
        let v = 1.0 / (PI * (1.0 + x * x));
        return Ok(StableDensityEval {
            value: v,
            est_error: 2.0 * f64::EPSILON * v,
        });
    }
    if x == 0.0 {
        let v = gamma(1.0 + 1.0 / alpha) / PI;
        return Ok(StableDensityEval {
            value: v,
            est_error: 1e-14 * v,
        });
    }
    if x >= 1.0 {
        if let Some((s, e)) = power_series(alpha, x.ln(), |k| sin_pi(0.5 * k as f64 * alpha)) {
            let value = s / (PI * x);
            let est = e / (PI * x);
            if est <= SERIES_REL_TOL * value.abs() {
                return Ok(StableDensityEval { value, est_error: est });
            }
        }
    }
    nolan_density(alpha, x)
}

fn nolan_ln_v(alpha: f64, phi: f64) -> f64 {
    let c = phi.cos().ln();
    alpha / (alpha - 1.0) * (c - (alpha * phi).sin().ln()) + ((alpha - 1.0) * phi).cos().ln() - c
}

fn nolan_density(alpha: f64, x: f64) -> Result<StableDensityEval> {
    let k = alpha / (alpha - 1.0);
    let ln_zeta = k * x.ln();
    let zeta = ln_zeta.exp();
    let integrand = |phi: f64| {
        let ln_v = nolan_ln_v(alpha, phi);
        let v = ln_v.exp();
        if !v.is_finite() || v * zeta > 745.0 {
            return 0.0;
        }
        (ln_v - zeta * v).exp()
    };
    let mode = crossing(|phi| nolan_ln_v(alpha, phi), 0.0, FRAC_PI_2, -ln_zeta);
    let (v, e) = integrate_unimodal(integrand, 0.0, FRAC_PI_2, mode)?;
    let pref = alpha * (x.ln() / (alpha - 1.0)).exp() / (PI * (alpha - 1.0).abs());
    Ok(StableDensityEval {
        value: pref * v,
        est_error: pref * e,
    })
}

/// Symmetric stable density at operational time `t*`:
/// `f_{α,0}(x, t*) = t*^{−1/α} f_α(x t*^{−1/α})`.
pub fn symmetric_stable_density_at(alpha: f64, x: f64, t_star: f64) -> Result<StableDensityEval> {
    if !(t_star > 0.0) {
        return Err(Error::range("t_star", t_star, "t_star > 0"));
    }
    let scale = t_star.powf(-1.0 / alpha);
    let e = symmetric_stable_density(alpha, x * scale)?;
    Ok(StableDensityEval {
        value: scale * e.value,
        est_error: scale * e.est_error,
    })
}
