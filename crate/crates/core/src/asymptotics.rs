//! Closed-form main terms and parameter arithmetic, plus a comparison of
//! measured counts with them.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::census::{CensusReport, PsiFunction};
use crate::error::{Error, Result};
use crate::gram::{index_range, p0};

/// A predicted main term under both log conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub name: String,
    pub anchor: String,
    pub value: f64,
    pub value_ln_t2pi: f64,
    pub t: f64,
    pub u: f64,
    pub psi: Option<String>,
    pub epsilon: Option<f64>,
}

impl Prediction {
    fn new(name: &str, anchor: &str, t: f64, u: f64, value: f64, value_ln_t2pi: f64) -> Self {
        Prediction {
            name: name.to_string(),
            anchor: anchor.to_string(),
            value,
            value_ln_t2pi,
            t,
            u,
            psi: None,
            epsilon: None,
        }
    }
}

/// U = T^{5/12}·ψ(T)·ln³T.
#[allow(non_snake_case)]
pub fn U_of(t: f64, psi: &PsiFunction) -> Result<f64> {
    if !(t.is_finite() && t > 1.0) {
        return Err(Error::domain(format!("U_of needs T > 1, got {t}")));
    }
    let v = psi.eval(t);
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain(format!("psi({t}) = {v} is not positive")));
    }
    Ok(t.powf(5.0 / 12.0) * v * t.ln().powi(3))
}

/// (1/π)·U·ln T, with the ln(T/2π) variant.
pub fn predicted_gram_count(t: f64, u: f64) -> Prediction {
    Prediction::new(
        "gram_count",
        "sum 1 over Gram points ~ U ln T / pi",
        t,
        u,
        u * t.ln() / PI,
        u * (t / TAU).ln() / PI,
    )
}

pub fn exact_gram_count(t: f64, u: f64, tau: f64) -> Result<u64> {
    Ok(index_range(t, u, tau)?.count)
}

/// (1/2π)·U·ln T, with the ln(T/2π) variant.
pub fn predicted_zero_count(t: f64, u: f64) -> Prediction {
    Prediction::new(
        "zero_count",
        "N(T+U) - N(T) ~ U ln T / 2pi",
        t,
        u,
        u * t.ln() / TAU,
        u * (t / TAU).ln() / TAU,
    )
}

/// Parameters of the H₁ window for a given ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H1Window {
    pub t: f64,
    pub epsilon: f64,
    pub a1: f64,
    pub a2: f64,
    /// ξ = (T/2π)^{ε/10} = P₀^{ε/5}
    pub xi: f64,
    pub omega: f64,
    pub p0: f64,
    /// H₁ ∈ [a₁, a₂√(ln P₀)]
    pub h1_bounds: (f64, f64),
    /// Integer H₁ values inside the bounds, if any.
    pub h1_integers: Option<(u64, u64)>,
    /// 1/ln ξ ≤ H ≤ 1/√(ln ξ)
    pub h_bounds: (f64, f64),
    /// H₁·ω over the H₁ bounds.
    pub h_from_h1: (f64, f64),
    /// a₁ω ≥ 1/ln ξ (holds with equality up to rounding).
    pub lower_consistent: bool,
    /// a₂√(ln P₀)·ω ≤ 1/√(ln ξ).
    pub upper_consistent: bool,
    pub h_range_empty: bool,
}

pub fn h1_window(t: f64, epsilon: f64) -> Result<H1Window> {
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(Error::domain(format!("h1_window needs 0 < epsilon <= 1/10, got {epsilon}")));
    }
    let p0 = p0(t);
    if !(p0.is_finite() && p0 > 1.0) {
        return Err(Error::domain(format!("h1_window needs T > 2π, got {t}")));
    }
    let lnp0 = p0.ln();
    let omega = PI / (2.0 * lnp0);
    let a1 = 10.0 / (PI * epsilon);
    let a2 = a1 * (2.0 / PI).sqrt();
    let xi = p0.powf(epsilon / 5.0);
    let ln_xi = epsilon / 5.0 * lnp0;
    let h1_bounds = (a1, a2 * lnp0.sqrt());
    let lo = h1_bounds.0.ceil();
    let hi = h1_bounds.1.floor();
    let h1_integers = (lo <= hi).then_some((lo as u64, hi as u64));
    let h_bounds = (1.0 / ln_xi, 1.0 / ln_xi.sqrt());
    let h_from_h1 = (h1_bounds.0 * omega, h1_bounds.1 * omega);
    let slack = 1e-12 * h_bounds.0;
    Ok(H1Window {
        t,
        epsilon,
        a1,
        a2,
        xi,
        omega,
        p0,
        h1_bounds,
        h1_integers,
        h_bounds,
        h_from_h1,
        lower_consistent: h_from_h1.0 + slack >= h_bounds.0,
        upper_consistent: h_from_h1.1 <= h_bounds.1 * (1.0 + 1e-12),
        h_range_empty: h_bounds.0 > h_bounds.1,
    })
}

/// T^{27/82 + ε}
#[allow(non_snake_case)]
pub fn karatsuba_exponent_U(t: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/10], got {epsilon}")));
    }
    Ok(t.powf(27.0 / 82.0 + epsilon))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub empirical: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub ratio_ln_t2pi: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub infinite_ratio: bool,
    pub overrides: String,
    pub mode: crate::Mode,
}

/// Compare hits of a census with a prediction on the same window.
pub fn compare(empirical: &CensusReport, prediction: &Prediction, tolerance: f64) -> Result<Verdict> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    if !close(empirical.t, prediction.t) || !close(empirical.u, prediction.u) {
        return Err(Error::validation(format!(
            "window mismatch: report ({}, {}) vs prediction ({}, {})",
            empirical.t, empirical.u, prediction.t, prediction.u
        )));
    }
    let x = empirical.hits as f64;
    let p = prediction.value;
    let ratio = crate::census::report_ratio(x, p);
    let abs_deviation = (x - p).abs();
    let rel_deviation = if p == 0.0 { ratio } else { abs_deviation / p.abs() };
    let infinite_ratio = ratio.is_infinite();
    Ok(Verdict {
        name: prediction.name.clone(),
        empirical: x,
        predicted: p,
        ratio,
        ratio_ln_t2pi: crate::census::report_ratio(x, prediction.value_ln_t2pi),
        abs_deviation,
        rel_deviation,
        tolerance,
        pass: !infinite_ratio && rel_deviation <= tolerance,
        infinite_ratio,
        overrides: empirical.overrides.clone(),
        mode: empirical.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::PsiKind;
    use std::f64::consts::E;

    #[test]
    fn u_of_identities() {
        let one = PsiFunction::psi(PsiKind::Const(1.0));
        assert!((U_of(E, &one).unwrap() - E.powf(5.0 / 12.0)).abs() < 1e-14);
        let two = PsiFunction::psi(PsiKind::Const(2.0));
        assert_eq!(U_of(1e6, &two).unwrap(), 2.0 * U_of(1e6, &one).unwrap());
        let l = PsiFunction::default_psi();
        let t = 1e6f64;
        let direct = t.powf(5.0 / 12.0) * t.ln().ln().ln() * t.ln().powi(3);
        assert!((U_of(t, &l).unwrap() / direct - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gram_count_vs_prediction() {
        let exact = exact_gram_count(1e6, 1e3, 0.0).unwrap() as f64;
        let p = predicted_gram_count(1e6, 1e3);
        assert!((exact / p.value - 1.0).abs() <= 0.15);
        assert!((exact / p.value_ln_t2pi - 1.0).abs() <= 0.01);
        let w = crate::gram::omega(1e6).unwrap();
        assert!((predicted_gram_count(1e6, 2.0 * w).value_ln_t2pi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_count_is_half_gram_count() {
        let z = predicted_zero_count(1e6, 200.0);
        let g = predicted_gram_count(1e6, 200.0);
        assert!((2.0 * z.value - g.value).abs() < 1e-12);
        assert_eq!(predicted_zero_count(1e6, 0.0).value, 0.0);
    }

    #[test]
    fn h1_window_arithmetic() {
        let w = h1_window(1e6, 0.1).unwrap();
        assert!((w.a1 - 100.0 / PI).abs() < 1e-12);
        assert!((w.a2 / w.a1 - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!((w.xi - w.p0.powf(0.02)).abs() < 1e-14);
        assert!((w.omega - crate::gram::omega(1e6).unwrap()).abs() < 1e-15);
        assert!(w.lower_consistent);
        assert!(!w.upper_consistent);
        assert!(w.h_range_empty);
        assert_eq!(w.h1_integers, Some((32, 62)));
        assert!(matches!(h1_window(1e6, 0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn karatsuba_exponent() {
        let t = 82f64.exp();
        let v = karatsuba_exponent_U(t, 0.05).unwrap();
        assert!((v.ln() - (27.0 + 82.0 * 0.05)).abs() < 1e-10);
    }
}
