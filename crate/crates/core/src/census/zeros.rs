use std::f64::consts::{PI, TAU};

use super::report::{CensusReport, ReportHeader, Tally};
use super::{check_subrange, default_scan_step, interval_outcome, Outcome, PsiFunction, PsiRole};
use crate::asymptotics::U_of;
use crate::error::{Error, Result};
use crate::gram::{gram_point, index_range, IndexRange};
use crate::hardy_z::{scan_zeros, ScanOptions, ZSource};
use crate::mode::Mode;
use crate::parallel::try_ordered_map;

/// Largest admissible pairing proxy ψ̄(T+U)/ψ(T)^{1/3} in paper mode.
pub const PAIRING_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Params {
    pub t: f64,
    pub psi: PsiFunction,
    pub psi_bar: PsiFunction,
    pub tau: f64,
    pub u_override: Option<f64>,
    pub scan_step: Option<f64>,
    pub mode: Mode,
}

impl Theorem1Params {
    pub fn new(t: f64, tau: f64) -> Self {
        let psi = PsiFunction::default_psi();
        let psi_bar = PsiFunction::default_psi_bar(&psi);
        Theorem1Params {
            t,
            psi,
            psi_bar,
            tau,
            u_override: None,
            scan_step: None,
            mode: Mode::Paper,
        }
    }

    /// Resolve U, the mode actually used, and the window index range.
    pub fn window(&self) -> Result<(f64, Mode, IndexRange)> {
        let (u, mode) = match self.u_override {
            Some(u) => (u, Mode::Exploration),
            None => (U_of(self.t, &self.psi)?, self.mode),
        };
        Ok((u, mode, index_range(self.t, u, self.tau)?))
    }
}

/// Hit census of the intervals (g_ν(τ), g_ν(τ) + ψ̄(g_ν(τ))) over the window.
pub fn census_theorem1<S: ZSource + ?Sized>(src: &S, p: &Theorem1Params) -> Result<CensusReport> {
    let (_, _, range) = p.window()?;
    census_theorem1_range(src, p, &range)
}

/// The same census restricted to a contiguous piece of the window's index
/// range. Reports over a cover of the range merge to the full report.
pub fn census_theorem1_range<S: ZSource + ?Sized>(
    src: &S,
    p: &Theorem1Params,
    range: &IndexRange,
) -> Result<CensusReport> {
    let (u, mode, full) = p.window()?;
    check_subrange(&full, range)?;
    if p.psi.role != PsiRole::Psi || p.psi_bar.role != PsiRole::PsiBar {
        return Err(Error::validation("psi and psi_bar roles are swapped"));
    }
    let mut warnings = Vec::new();
    let mut overrides = Vec::new();
    if let Some(o) = p.u_override {
        overrides.push(format!("U_override={o}"));
        if p.mode.is_paper() {
            warnings.push("U_override given: run in exploration mode".to_string());
        }
    }
    let (lo, hi) = (p.t, p.t + u);
    p.psi.validate(lo, hi, mode, &mut warnings)?;
    p.psi_bar.validate(lo, hi, mode, &mut warnings)?;
    let pairing = p.psi_bar.eval(hi) / p.psi.eval(lo).cbrt();
    mode.check(
        pairing <= PAIRING_LIMIT,
        || format!("psi_bar(T+U)/psi(T)^(1/3) = {pairing:.4} exceeds {PAIRING_LIMIT}"),
        &mut warnings,
    )?;
    let step = match p.scan_step {
        Some(s) => {
            overrides.push(format!("scan_step={s}"));
            s
        }
        None => default_scan_step(p.t)?,
    };
    let outcomes = try_ordered_map(range.nu_first, range.nu_first + range.count, |nu| {
        let g = gram_point(nu, p.tau)?.t;
        interval_outcome(src, g, g + p.psi_bar.eval(g), step)
    })?;
    let tally: Tally = outcomes.into_iter().collect();
    let header = ReportHeader {
        command: "census-theorem1",
        mode,
        t: p.t,
        u,
        tau: p.tau,
        anchor: "G(T, psi, psi_bar) ~ U ln T / pi",
        params: format!("psi={};psi_bar={};scan_step={step}", p.psi.kind, p.psi_bar.kind),
        overrides,
        warnings,
    };
    Ok(CensusReport::build(
        header,
        range.nu_first,
        range.count,
        tally,
        (u * p.t.ln() / PI, u * (p.t / TAU).ln() / PI),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelbergParams {
    pub t: f64,
    pub epsilon: f64,
    pub psi: PsiFunction,
    pub grid_step: f64,
    pub span_override: Option<f64>,
    pub scan_step: Option<f64>,
    pub mode: Mode,
}

impl SelbergParams {
    pub fn span(&self) -> f64 {
        self.span_override
            .unwrap_or_else(|| self.t.powf(0.5 + self.epsilon))
    }

    /// Grid abscissae T + i·grid_step in [T, T + span].
    pub fn grid(&self) -> Vec<f64> {
        let n = (self.span() / self.grid_step).floor() as u64;
        (0..=n).map(|i| self.t + i as f64 * self.grid_step).collect()
    }
}

/// Fraction of grid points t whose interval (t, t + ψ(t)/ln t) holds a zero.
#[allow(non_snake_case)]
pub fn census_selberg_C<S: ZSource + ?Sized>(src: &S, p: &SelbergParams) -> Result<CensusReport> {
    if !(p.epsilon > 0.0 && p.epsilon <= 0.5) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/2], got {}", p.epsilon)));
    }
    if !(p.grid_step.is_finite() && p.grid_step > 0.0) {
        return Err(Error::domain(format!("grid_step must be positive, got {}", p.grid_step)));
    }
    let span = p.span();
    let mut warnings = Vec::new();
    let mut overrides = Vec::new();
    let mode = match p.span_override {
        Some(s) => {
            overrides.push(format!("span_override={s}"));
            Mode::Exploration
        }
        None => p.mode,
    };
    p.psi.validate(p.t, p.t + span, mode, &mut warnings)?;
    let step = match p.scan_step {
        Some(s) => {
            overrides.push(format!("scan_step={s}"));
            s
        }
        None => default_scan_step(p.t)?,
    };
    let grid = p.grid();
    let outcomes: Vec<Outcome> = try_ordered_map(0, grid.len() as u64, |i| {
        let t = grid[i as usize];
        interval_outcome(src, t, t + p.psi.eval(t) / t.ln(), step)
    })?;
    let tally: Tally = outcomes.into_iter().collect();
    let n = grid.len() as f64;
    let header = ReportHeader {
        command: "census-selberg-c",
        mode,
        t: p.t,
        u: span,
        tau: 0.0,
        anchor: "m(S) ~ T^(1/2 + eps)",
        params: format!(
            "psi={};epsilon={};grid_step={};scan_step={step}",
            p.psi.kind, p.epsilon, p.grid_step
        ),
        overrides,
        warnings,
    };
    // The measure m(S) is predicted to fill the span; on the grid that is
    // every point.
    Ok(CensusReport::build(header, 0, grid.len() as u64, tally, (n, n)))
}

/// Certified odd-order zeros in [T, T + U] found on the lattice T + i·step.
pub fn n0_increment<S: ZSource + ?Sized>(
    src: &S,
    t: f64,
    u: f64,
    scan_step: f64,
) -> Result<CensusReport> {
    let scan = scan_zeros(src, t, t + u, scan_step, ScanOptions::default())?;
    let tally = Tally {
        hits: scan.brackets.len() as u64,
        misses: 0,
        uncertain: scan.uncertain as u64,
    };
    let header = ReportHeader {
        command: "n0",
        mode: Mode::Exploration,
        t,
        u,
        tau: 0.0,
        anchor: "N(T+U) - N(T) ~ U ln T / 2pi",
        params: format!("scan_step={scan_step};samples={}", scan.samples),
        overrides: Vec::new(),
        warnings: Vec::new(),
    };
    Ok(CensusReport::build(
        header,
        0,
        scan.brackets.len() as u64,
        tally,
        (u * t.ln() / TAU, u * (t / TAU).ln() / TAU),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::PsiKind;
    use crate::hardy_z::SignSample;

    /// Z-like pattern with zeros at c + j·d.
    fn comb(c: f64, d: f64) -> impl Fn(f64) -> SignSample + Sync {
        move |t: f64| SignSample::new(t, (PI * (t - c) / d).sin(), 1e-9)
    }

    fn params(scale: f64) -> Theorem1Params {
        let mut p = Theorem1Params::new(1e5, 0.0);
        p.psi_bar = PsiFunction::psi_bar(PsiKind::Const(scale));
        p.u_override = Some(30.0);
        p
    }

    #[test]
    fn zero_width_intervals_never_hit() {
        let r = census_theorem1(&comb(0.1, 0.6), &params(1e-300)).unwrap();
        assert_eq!(r.hits, 0);
        assert!(r.total > 0);
        assert_eq!(r.hits + r.misses + r.uncertain, r.total);
    }

    #[test]
    fn wide_intervals_always_hit() {
        let r = census_theorem1(&comb(0.1, 0.6), &params(0.7)).unwrap();
        assert_eq!(r.hits, r.total);
        assert_eq!(r.mode, Mode::Exploration);
        assert!(r.overrides.contains("U_override=30"));
    }

    #[test]
    fn paper_mode_rejects_default_pairing() {
        let p = Theorem1Params::new(1e6, 0.0);
        let err = census_theorem1(&comb(0.0, 0.5), &p).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
    }

    #[test]
    fn subranges_merge_to_full() {
        let src = comb(0.05, 0.37);
        let p = params(0.3);
        let full = census_theorem1(&src, &p).unwrap();
        let (_, _, range) = p.window().unwrap();
        let a = census_theorem1_range(&src, &p, &range.slice(0, 17)).unwrap();
        let b = census_theorem1_range(&src, &p, &range.slice(17, range.count)).unwrap();
        assert_eq!(a.merge(&b).unwrap(), full);
    }

    #[test]
    fn selberg_wide_intervals_fill() {
        let p = SelbergParams {
            t: 1e5,
            epsilon: 0.1,
            psi: PsiFunction::psi(PsiKind::PowLog { a: 0.5, c: 1.0 }),
            grid_step: 0.3,
            span_override: Some(20.0),
            scan_step: None,
            mode: Mode::Paper,
        };
        // Zeros every 0.2 < sqrt(ln t)/ln t ≈ 0.29.
        let r = census_selberg_C(&comb(0.0, 0.2), &p).unwrap();
        assert_eq!(r.hits, r.total);
        assert_eq!(r.total, 67);
    }

    #[test]
    fn n0_counts_comb_zeros() {
        let r = n0_increment(&comb(0.05, 0.5), 1e5, 10.0, 0.1).unwrap();
        assert_eq!(r.hits, 20);
        let r = n0_increment(&comb(0.05, 0.5), 1e5 + 0.1, 0.3, 0.05).unwrap();
        assert_eq!(r.hits, 0);
    }
}
