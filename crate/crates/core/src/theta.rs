//! Riemann–Siegel theta: the truncated phase θ₁, the full asymptotic θ and
//! the inverse of θ₁ on its monotone branch.

use std::f64::consts::{E, FRAC_PI_8, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower end of the supported branch. θ₁ has its minimum at 2π; everything
/// above this floor is strictly increasing and well conditioned.
pub const T_FLOOR: f64 = 10.0;

/// Which phase produced a [`ThetaValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaEngine {
    Truncated,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaValue {
    pub t: f64,
    pub value: f64,
    pub engine: ThetaEngine,
    /// Bound on |value − θ(t)| from series truncation plus rounding.
    pub error_bound: f64,
}

fn check_positive(t: f64) -> Result<()> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("theta needs finite t > 0, got {t}")));
    }
    Ok(())
}

/// θ₁(t) = (t/2)·ln(t/2π) − t/2 − π/8 without argument checks.
#[inline]
pub fn theta1_unchecked(t: f64) -> f64 {
    0.5 * t * ((t / TAU).ln() - 1.0) - FRAC_PI_8
}

/// θ₁'(t) = ½·ln(t/2π) without argument checks.
#[inline]
pub fn theta1_derivative_unchecked(t: f64) -> f64 {
    0.5 * (t / TAU).ln()
}

pub fn theta1(t: f64) -> Result<f64> {
    check_positive(t)?;
    Ok(theta1_unchecked(t))
}

pub fn theta1_derivative(t: f64) -> Result<f64> {
    check_positive(t)?;
    Ok(theta1_derivative_unchecked(t))
}

/// Correction θ(t) − θ₁(t) from the four leading terms of the Stirling
/// expansion of arg Γ(1/4 + it/2).
#[inline]
pub fn theta_correction(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0))))
}

/// Full theta for t ≥ [`T_FLOOR`], no checks.
#[inline]
pub fn theta_full_unchecked(t: f64) -> f64 {
    theta1_unchecked(t) + theta_correction(t)
}

/// θ(t) including the correction series through t⁻⁷.
///
/// The omitted tail is dominated by twice its first term 511/(1216512·t⁹)
/// on the supported range.
pub fn theta_full(t: f64) -> Result<ThetaValue> {
    check_positive(t)?;
    if t < T_FLOOR {
        return Err(Error::domain(format!(
            "theta_full needs t >= {T_FLOOR} (got {t}); use the Euler–Maclaurin oracle engine below that"
        )));
    }
    let value = theta_full_unchecked(t);
    let truncation = 2.0 * 511.0 / (1_216_512.0 * t.powi(9));
    let rounding = 4.0 * f64::EPSILON * (0.5 * t * (t / TAU).ln().abs() + 0.5 * t + 1.0);
    Ok(ThetaValue {
        t,
        value,
        engine: ThetaEngine::Full,
        error_bound: truncation + rounding,
    })
}

pub fn theta1_value(t: f64) -> Result<ThetaValue> {
    let value = theta1(t)?;
    Ok(ThetaValue {
        t,
        value,
        engine: ThetaEngine::Truncated,
        error_bound: 4.0 * f64::EPSILON * (0.5 * t * (t / TAU).ln().abs() + 0.5 * t + 1.0),
    })
}

/// Principal branch of Lambert W for x > −1/e, by Halley iteration.
fn lambert_w0(x: f64) -> f64 {
    let mut w = if x < 1.0 {
        x.ln_1p()
    } else {
        let l = x.ln();
        l - l.max(1.0).ln()
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    w
}

/// Starting point for inverting θ₁: with u = t/(2πe), θ₁ = πe·u·ln u − π/8,
/// so u = exp(W(x)) for x = (y + π/8)/(πe).
pub fn theta1_inverse_seed(y: f64) -> f64 {
    let x = (y + FRAC_PI_8) / (PI * E);
    let t = TAU * E * lambert_w0(x).exp();
    t.max(T_FLOOR)
}

/// Tolerance on |θ₁(t) − y| accepted by [`theta1_inverse`].
pub fn inverse_tolerance(y: f64) -> f64 {
    1e-12 * y.abs().max(1.0)
}

/// Solve θ₁(t) = y for t on the monotone branch t ≥ 10.
pub fn theta1_inverse(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::domain(format!("theta1_inverse needs finite y, got {y}")));
    }
    let floor = theta1_unchecked(T_FLOOR);
    if y < floor {
        return Err(Error::domain(format!(
            "theta1_inverse: y = {y} below the monotone-branch floor θ₁(10) = {floor}"
        )));
    }
    let tol = inverse_tolerance(y);
    let mut t = theta1_inverse_seed(y);
    for _ in 0..64 {
        let r = theta1_unchecked(t) - y;
        if r.abs() <= tol {
            return Ok(t);
        }
        let step = r / theta1_derivative_unchecked(t);
        let next = t - step;
        // Stay on the branch; the floor itself is a valid iterate.
        t = if next < T_FLOOR { 0.5 * (t + T_FLOOR) } else { next };
        if step.abs() <= 2.0 * f64::EPSILON * t {
            let r = theta1_unchecked(t) - y;
            if r.abs() <= tol {
                return Ok(t);
            }
        }
    }
    Err(Error::numerical(format!(
        "theta1_inverse: Newton did not converge for y = {y} in 64 iterations"
    )))
}
