//! Translated Gram sequences g_ν(τ), window enumeration and the geometric
//! spacing predictor for consecutive points.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::Mode;
use crate::theta::{
    inverse_tolerance, theta1_derivative_unchecked, theta1_inverse, theta1_unchecked, T_FLOOR,
};

/// Smallest window start accepted by the enumeration routines.
pub const MIN_WINDOW_T: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GramPoint {
    pub nu: u64,
    pub tau: f64,
    pub t: f64,
    /// θ₁(t) − πν/2 − τ/2
    pub residual: f64,
}

/// Target phase πν/2 + τ/2, written as (π/2)(ν + τ/π) so that (ν, π) and
/// (ν + 2, −π) produce the same bits.
#[inline]
pub fn target_phase(nu: u64, tau: f64) -> f64 {
    FRAC_PI_2 * (nu as f64 + tau / PI)
}

fn check_tau(tau: f64) -> Result<()> {
    if !(-PI..=PI).contains(&tau) {
        return Err(Error::domain(format!("tau must lie in [-π, π], got {tau}")));
    }
    Ok(())
}

fn residual_bound(nu: u64) -> f64 {
    1e-10 * (FRAC_PI_2 * nu as f64).max(1.0)
}

fn bisect_theta1(y: f64) -> Result<f64> {
    let mut lo = T_FLOOR;
    let mut hi = 2.0 * T_FLOOR;
    while theta1_unchecked(hi) < y {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::numerical(format!("no bracket for θ₁(t) = {y}")));
        }
    }
    let tol = inverse_tolerance(y);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let r = theta1_unchecked(mid) - y;
        if r.abs() <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::numerical(format!("bisection for θ₁(t) = {y} did not terminate")))
}

/// Solve θ₁(t) = πν/2 + τ/2 on the monotone branch.
pub fn gram_point(nu: u64, tau: f64) -> Result<GramPoint> {
    check_tau(tau)?;
    if nu == 0 {
        return Err(Error::domain("Gram index must be positive"));
    }
    let y = target_phase(nu, tau);
    if y < theta1_unchecked(T_FLOOR) {
        return Err(Error::domain(format!(
            "Gram index {nu} with tau {tau} falls below the monotone branch t > {T_FLOOR}"
        )));
    }
    let t = match theta1_inverse(y) {
        Ok(t) => t,
        Err(Error::Numerical(_)) => bisect_theta1(y)?,
        Err(e) => return Err(e),
    };
    let residual = theta1_unchecked(t) - y;
    if residual.abs() > residual_bound(nu) {
        return Err(Error::numerical(format!(
            "Gram point ({nu}, {tau}) residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(GramPoint { nu, tau, t, residual })
}

/// Step ω = π / ln(T/2π) = π/(2 ln P₀).
pub fn omega(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= TAU * 1.01 {
        return Err(Error::domain(format!("omega needs T > 2π·1.01, got {t}")));
    }
    Ok(PI / (t / TAU).ln())
}

/// P₀ = √(T/2π)
pub fn p0(t: f64) -> f64 {
    (t / TAU).sqrt()
}

/// Gram indices whose points g_ν(τ) lie in the closed window [T, T + U].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexRange {
    /// ν̄₁, the first index in the window.
    pub nu_first: u64,
    /// Number of Gram points in the window.
    pub count: u64,
    pub tau: f64,
}

impl IndexRange {
    /// Offset N₁ of the last point from the first: g_{ν̄₁+N₁} is the largest
    /// point in the window.
    pub fn n1(&self) -> u64 {
        self.count.saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn indices(&self) -> std::ops::Range<u64> {
        self.nu_first..self.nu_first + self.count
    }

    /// Sub-range `[start, start + len)` measured in offsets from `nu_first`.
    pub fn slice(&self, start: u64, len: u64) -> IndexRange {
        let start = start.min(self.count);
        IndexRange {
            nu_first: self.nu_first + start,
            count: len.min(self.count - start),
            tau: self.tau,
        }
    }

    pub fn points(&self) -> Result<Vec<GramPoint>> {
        self.indices().map(|nu| gram_point(nu, self.tau)).collect()
    }
}

fn clamp_index(x: f64) -> u64 {
    if x < 1.0 {
        1
    } else {
        x as u64
    }
}

/// Exact enumeration of the Gram points of shift `tau` in [T, T + U].
pub fn index_range(t: f64, u: f64, tau: f64) -> Result<IndexRange> {
    check_tau(tau)?;
    if !t.is_finite() || t < MIN_WINDOW_T {
        return Err(Error::domain(format!("index_range needs T >= {MIN_WINDOW_T}, got {t}")));
    }
    if !u.is_finite() || u <= 0.0 {
        return Err(Error::domain(format!("index_range needs U > 0, got {u}")));
    }
    let end = t + u;
    let mut first = clamp_index(((2.0 * theta1_unchecked(t) - tau) / PI).ceil());
    while first > 1 && gram_point(first - 1, tau)?.t >= t {
        first -= 1;
    }
    while gram_point(first, tau)?.t < t {
        first += 1;
    }
    let mut last = clamp_index(((2.0 * theta1_unchecked(end) - tau) / PI).floor());
    while gram_point(last + 1, tau)?.t <= end {
        last += 1;
    }
    while last >= first && gram_point(last, tau)?.t > end {
        last -= 1;
    }
    let count = if last >= first { last - first + 1 } else { 0 };
    Ok(IndexRange {
        nu_first: first,
        count,
        tau,
    })
}

/// The counting formula ⌊(2θ₁(T+U) − τ)/π⌋ − ⌈(2θ₁(T) − τ)/π⌉ + 1, exact
/// whenever no Gram point sits on a window boundary to within rounding.
pub fn count_by_phase(t: f64, u: f64, tau: f64) -> i64 {
    let hi = ((2.0 * theta1_unchecked(t + u) - tau) / PI).floor() as i64;
    let lo = ((2.0 * theta1_unchecked(t) - tau) / PI).ceil() as i64;
    (hi - lo + 1).max(0)
}

/// Sampling grid anchored at one Gram point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t: f64,
    pub u: f64,
    pub omega: f64,
    pub m: u32,
    pub tau: f64,
    pub mode: Mode,
    pub warnings: Vec<String>,
}

impl GridSpec {
    /// Build a grid for window [T, T+U] with M steps of ω(T). In paper mode
    /// ln T < M < T^{1/3}·ln T is enforced.
    pub fn new(t: f64, u: f64, m: u32, tau: f64, mode: Mode) -> Result<GridSpec> {
        check_tau(tau)?;
        if !u.is_finite() || u <= 0.0 {
            return Err(Error::domain(format!("grid window needs U > 0, got {u}")));
        }
        let omega = omega(t)?;
        let mut warnings = Vec::new();
        let ln_t = t.ln();
        let mf = m as f64;
        mode.check(
            ln_t < mf && mf < t.cbrt() * ln_t,
            || {
                format!(
                    "M = {m} outside ln T < M < T^(1/3) ln T = ({ln_t:.3}, {:.3})",
                    t.cbrt() * ln_t
                )
            },
            &mut warnings,
        )?;
        Ok(GridSpec {
            t,
            u,
            omega,
            m,
            tau,
            mode,
            warnings,
        })
    }

    pub fn index_range(&self) -> Result<IndexRange> {
        index_range(self.t, self.u, self.tau)
    }
}

/// Abscissae g.t + k·ω for k = 0..=M.
pub fn grid_samples(g: &GramPoint, spec: &GridSpec) -> Result<Vec<f64>> {
    if g.tau != spec.tau {
        return Err(Error::validation(format!(
            "Gram point shift {} does not match grid shift {}",
            g.tau, spec.tau
        )));
    }
    Ok((0..=spec.m).map(|k| g.t + k as f64 * spec.omega).collect())
}

/// Geometric model of consecutive spacings across a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacingModel {
    /// ω̄₀: the first spacing at the window anchor.
    pub omega_bar0: f64,
    /// Q = π/(T ln²(T/2π)), the per-step relative shrink of spacings.
    pub q: f64,
    /// g_{ν̄₁}(τ)
    pub anchor: f64,
    pub n1: u64,
}

impl SpacingModel {
    pub fn new(t: f64, range: &IndexRange) -> Result<SpacingModel> {
        if range.is_empty() {
            return Err(Error::domain("spacing model needs a non-empty window"));
        }
        let anchor = gram_point(range.nu_first, range.tau)?.t;
        let l = (t / TAU).ln();
        let omega_bar0 = PI / l - PI * PI / (2.0 * t * l.powi(3)) - PI * (anchor - t) / (t * l * l);
        Ok(SpacingModel {
            omega_bar0,
            q: PI / (t * l * l),
            anchor,
            n1: range.n1(),
        })
    }

    /// g_{ν̄₁}(τ) + ω̄₀·p − ω̄₀·D(p) for 0 ≤ p ≤ N₁ − 1.
    pub fn predict(&self, p: u64) -> Result<f64> {
        if self.n1 == 0 || p > self.n1 - 1 {
            return Err(Error::domain(format!(
                "spacing_predict needs 0 <= p <= N1 - 1 = {}, got {p}",
                self.n1 as i64 - 1
            )));
        }
        let pf = p as f64;
        Ok(self.anchor + self.omega_bar0 * pf - self.omega_bar0 * d_closed(p, self.q))
    }
}

pub fn spacing_predict(p: u64, model: &SpacingModel) -> Result<f64> {
    model.predict(p)
}

/// f(x) = e^{−x} − 1 + x without cancellation for small x.
fn expm1_residual(x: f64) -> f64 {
    if x > 0.1 {
        return (-x).exp_m1() + x;
    }
    // x²/2 − x³/6 + x⁴/24 − …
    let mut term = x * x / 2.0;
    let mut acc: f64 = 0.0;
    let mut k = 2.0;
    while term.abs() > 1e-18 * acc.abs().max(f64::MIN_POSITIVE) {
        acc += term;
        k += 1.0;
        term *= -x / k;
    }
    acc
}

/// a − Q with a = −ln(1 − Q), i.e. Q²/2 + Q³/3 + …
fn log_excess(q: f64) -> f64 {
    if q > 0.1 {
        return -(-q).ln_1p() - q;
    }
    let mut acc: f64 = 0.0;
    let mut pow = q * q;
    let mut k = 2.0;
    while pow / k > 1e-18 * acc.max(f64::MIN_POSITIVE) {
        acc += pow / k;
        pow *= q;
        k += 1.0;
    }
    acc
}

/// D(p) = Σ_{q=1}^{p} (1 − (1 − Q)^q) in closed form.
///
/// With a = −ln(1 − Q) and E = 1 − e^{−pa},
/// D(p) = p − (1 − Q)·E/Q = [f(pa) − p(a − Q)]/Q + E, f(x) = e^{−x} − 1 + x,
/// which keeps full relative accuracy for tiny Q.
pub fn d_closed(p: u64, q: f64) -> f64 {
    if p == 0 {
        return 0.0;
    }
    let pf = p as f64;
    let a = -(-q).ln_1p();
    let e = -(-pf * a).exp_m1();
    (expm1_residual(pf * a) - pf * log_excess(q)) / q + e
}

/// Measured accuracy of the spacing predictor over a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingCheck {
    pub t: f64,
    pub u: f64,
    pub tau: f64,
    pub n1: u64,
    /// max_p |predict(p) − g_{ν̄₁+p}(τ)|
    pub max_error: f64,
    /// max_p |predict(p) − g_{ν̄₁+p+1}(τ)|, the comparison with the index shifted by one.
    pub max_error_next_index: f64,
    /// U³/(T² ln T)
    pub envelope: f64,
    pub ratio: f64,
    /// Least-squares slope of ln error against ln p over log-spaced p ≥ 10.
    pub fit_exponent: f64,
    pub samples: Vec<(u64, f64)>,
}

/// Compare the spacing predictor with directly solved Gram points.
pub fn spacing_check(t: f64, u: f64, tau: f64) -> Result<SpacingCheck> {
    let range = index_range(t, u, tau)?;
    let model = SpacingModel::new(t, &range)?;
    let points = range.points()?;
    if points.len() < 3 {
        return Err(Error::domain("spacing check needs at least three Gram points"));
    }
    let mut max_error: f64 = 0.0;
    let mut max_next: f64 = 0.0;
    let mut errors = Vec::with_capacity(points.len());
    for p in 0..model.n1 {
        let pred = model.predict(p)?;
        let e = (pred - points[p as usize].t).abs();
        max_error = max_error.max(e);
        max_next = max_next.max((pred - points[p as usize + 1].t).abs());
        errors.push(e);
    }
    let mut samples = Vec::new();
    let mut p = 10.0f64;
    while (p as u64) < model.n1 {
        let idx = p as u64;
        if samples.last().map(|&(q, _)| q) != Some(idx) {
            samples.push((idx, errors[idx as usize]));
        }
        p *= 1.15;
    }
    let fit: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(p, e)| ((p as f64).ln(), e.ln()))
        .collect();
    let fit_exponent = least_squares_slope(&fit);
    let envelope = u.powi(3) / (t * t * t.ln());
    Ok(SpacingCheck {
        t,
        u,
        tau,
        n1: model.n1,
        max_error,
        max_error_next_index: max_next,
        envelope,
        ratio: max_error / envelope,
        fit_exponent,
        samples,
    })
}

pub(crate) fn least_squares_slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    if xy.len() < 2 {
        return f64::NAN;
    }
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Newton step count is tiny; exposed for the derivative used by the solver.
pub fn gram_derivative(g: &GramPoint) -> f64 {
    theta1_derivative_unchecked(g.t)
}
