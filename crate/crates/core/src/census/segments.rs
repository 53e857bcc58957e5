use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::report::{CensusReport, ReportHeader, Tally};
use super::{check_subrange, Outcome};
use crate::asymptotics::h1_window;
use crate::error::{Error, Result};
use crate::gram::{gram_point, index_range, omega, GridSpec, IndexRange};
use crate::hardy_z::{Sign, ZSource};
use crate::mode::Mode;
use crate::parallel::try_ordered_map;

/// R: Gram points whose samples Z(g + kω), k = 1..M, keep one certain sign.
#[allow(non_snake_case)]
pub fn count_sign_preserving_R<S: ZSource + ?Sized>(src: &S, spec: &GridSpec) -> Result<CensusReport> {
    let range = spec.index_range()?;
    count_sign_preserving_R_range(src, spec, &range)
}

#[allow(non_snake_case)]
pub fn count_sign_preserving_R_range<S: ZSource + ?Sized>(
    src: &S,
    spec: &GridSpec,
    range: &IndexRange,
) -> Result<CensusReport> {
    check_subrange(&spec.index_range()?, range)?;
    let outcomes = try_ordered_map(range.nu_first, range.nu_first + range.count, |nu| {
        let g = gram_point(nu, spec.tau)?.t;
        let mut seen: Option<Sign> = None;
        let mut uncertain = false;
        for k in 1..=spec.m {
            let s = src.sample(g + k as f64 * spec.omega).sign;
            if !s.is_certain() {
                uncertain = true;
                continue;
            }
            match seen {
                Some(prev) if prev.opposes(s) => return Ok(Outcome::Miss),
                _ => seen = Some(s),
            }
        }
        Ok(if uncertain { Outcome::Uncertain } else { Outcome::Hit })
    })?;
    let tally: Tally = outcomes.into_iter().collect();
    let m = spec.m.max(1) as f64;
    let header = ReportHeader {
        command: "sign-preserving-r",
        mode: spec.mode,
        t: spec.t,
        u: spec.u,
        tau: spec.tau,
        anchor: "R < A U ln^2 T / M",
        params: format!("M={}", spec.m),
        overrides: Vec::new(),
        warnings: spec.warnings.clone(),
    };
    Ok(CensusReport::build(
        header,
        range.nu_first,
        range.count,
        tally,
        (
            spec.u * spec.t.ln().powi(2) / m,
            spec.u * (spec.t / TAU).ln().powi(2) / m,
        ),
    ))
}

/// A lattice segment [start, end] with opposite certain signs of Z at its ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub nu: u64,
    /// Lattice offset of the left end: the segment is [g + kω, g + (k+1)ω].
    pub k: u32,
    pub start: f64,
    pub end: f64,
}

/// Per-ν result of the first-fit search.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    segment: Option<Segment>,
    saw_uncertain: bool,
}

/// Smallest k in `0..=k_max` whose segment [g + kω, g + (k+1)ω] is good and
/// ends inside the window.
fn first_fit<S: ZSource + ?Sized>(
    src: &S,
    nu: u64,
    g: f64,
    omega: f64,
    k_max: u32,
    window_end: f64,
) -> Candidate {
    let mut saw_uncertain = false;
    let mut left = src.sample(g);
    for k in 0..=k_max {
        let end = g + (k + 1) as f64 * omega;
        if end > window_end {
            break;
        }
        let right = src.sample(end);
        if !left.sign.is_certain() || !right.sign.is_certain() {
            saw_uncertain = true;
        } else if left.sign.opposes(right.sign) {
            return Candidate {
                segment: Some(Segment {
                    nu,
                    k,
                    start: g + k as f64 * omega,
                    end,
                }),
                saw_uncertain,
            };
        }
        left = right;
    }
    Candidate {
        segment: None,
        saw_uncertain,
    }
}

/// Greedy left-to-right sweep in ν order: a segment is accepted when it
/// starts strictly after the last accepted one ends.
fn sweep(cands: &[Candidate], accept: impl Fn(&Segment) -> bool) -> (Tally, Vec<Segment>) {
    let mut tally = Tally::default();
    let mut chosen = Vec::new();
    let mut last_end = f64::NEG_INFINITY;
    for c in cands {
        match c.segment.filter(|s| accept(s)) {
            Some(s) if s.start > last_end => {
                last_end = s.end;
                chosen.push(s);
                tally.add(Outcome::Hit);
            }
            Some(_) => tally.add(Outcome::Miss),
            None if c.saw_uncertain => tally.add(Outcome::Uncertain),
            None => tally.add(Outcome::Miss),
        }
    }
    (tally, chosen)
}

fn candidates<S: ZSource + ?Sized>(
    src: &S,
    range: &IndexRange,
    omega: f64,
    k_max: u32,
    window_end: f64,
) -> Result<Vec<Candidate>> {
    try_ordered_map(range.nu_first, range.nu_first + range.count, |nu| {
        let g = gram_point(nu, range.tau)?.t;
        Ok(first_fit(src, nu, g, omega, k_max, window_end))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G1Params {
    pub t: f64,
    pub u: f64,
    pub delta: f64,
    pub tau: f64,
}

impl G1Params {
    /// M₂ = ⌊δ ln T⌋
    pub fn m2(&self) -> u32 {
        (self.delta * self.t.ln()).floor() as u32
    }
}

/// G₁: non-intersecting good segments [g + kω, g + (k+1)ω], 0 ≤ k ≤ M₂.
#[allow(non_snake_case)]
pub fn good_segments_G1<S: ZSource + ?Sized>(src: &S, p: &G1Params) -> Result<(CensusReport, Vec<Segment>)> {
    let range = index_range(p.t, p.u, p.tau)?;
    good_segments_G1_range(src, p, &range)
}

/// G₁ over part of the window's index range. The sweep is sequential, so
/// only a range that starts at the window's first index reproduces the
/// prefix of the full sweep; use [`G1Part`] to combine pieces exactly.
#[allow(non_snake_case)]
pub fn good_segments_G1_range<S: ZSource + ?Sized>(
    src: &S,
    p: &G1Params,
    range: &IndexRange,
) -> Result<(CensusReport, Vec<Segment>)> {
    let part = G1Part::compute(src, p, range)?;
    Ok((part.report, part.segments))
}

/// A piece of a G₁ sweep that keeps its per-ν first-fit candidates, so that
/// adjacent pieces can be re-swept in order into the full result.
#[derive(Debug, Clone, PartialEq)]
pub struct G1Part {
    pub report: CensusReport,
    pub segments: Vec<Segment>,
    params: G1Params,
    candidates: Vec<Candidate>,
}

impl G1Part {
    pub fn compute<S: ZSource + ?Sized>(src: &S, p: &G1Params, range: &IndexRange) -> Result<G1Part> {
        if p.delta.is_nan() || p.delta <= 1.0 {
            return Err(Error::domain(format!("delta must exceed 1, got {}", p.delta)));
        }
        check_subrange(&index_range(p.t, p.u, p.tau)?, range)?;
        let cands = candidates(src, range, omega(p.t)?, p.m2(), p.t + p.u)?;
        Ok(G1Part::from_candidates(*p, range.nu_first, cands))
    }

    fn from_candidates(p: G1Params, nu_first: u64, candidates: Vec<Candidate>) -> G1Part {
        let (tally, segments) = sweep(&candidates, |_| true);
        let header = ReportHeader {
            command: "good-segments-1",
            mode: Mode::Exploration,
            t: p.t,
            u: p.u,
            tau: p.tau,
            anchor: "G1(T, U, delta, tau) > A U",
            params: format!("delta={};M2={}", p.delta, p.m2()),
            overrides: Vec::new(),
            warnings: Vec::new(),
        };
        let count = candidates.len() as u64;
        G1Part {
            report: CensusReport::build(header, nu_first, count, tally, (p.u, p.u)),
            segments,
            params: p,
            candidates,
        }
    }

    /// `self` followed by the piece that starts where `self` ends.
    pub fn then(&self, next: &G1Part) -> Result<G1Part> {
        if self.params != next.params {
            return Err(Error::validation("G1 pieces come from different parameters"));
        }
        let end = self.report.first_index + self.report.index_count;
        if next.report.first_index != end {
            return Err(Error::validation(format!(
                "G1 pieces must be adjacent and in order: next starts at {}, expected {end}",
                next.report.first_index
            )));
        }
        let mut cands = self.candidates.clone();
        cands.extend_from_slice(&next.candidates);
        Ok(G1Part::from_candidates(self.params, self.report.first_index, cands))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G3Params {
    pub t: f64,
    pub u: f64,
    /// Fixed budget H₁; `None` scans the integer H₁ window.
    pub h1: Option<u64>,
    pub tau: f64,
    pub epsilon: f64,
    pub mode: Mode,
}

/// G₃: non-intersecting good segments [g + (k−1)ω, g + kω] with
/// 1 ≤ k ≤ min(H₁, N₁). When H₁ is not fixed, every integer H₁ in the
/// window is tried and the smallest maximizer is reported.
#[allow(non_snake_case)]
pub fn good_segments_G3<S: ZSource + ?Sized>(src: &S, p: &G3Params) -> Result<(CensusReport, Vec<Segment>)> {
    let win = h1_window(p.t, p.epsilon)?;
    let range = index_range(p.t, p.u, p.tau)?;
    let mut warnings = Vec::new();
    if win.h_range_empty || !win.upper_consistent {
        warnings.push(format!(
            "H window [{:.4}, {:.4}] and H1*omega range [{:.4}, {:.4}] are inconsistent",
            win.h_bounds.0, win.h_bounds.1, win.h_from_h1.0, win.h_from_h1.1
        ));
    }
    let candidates_h1: Vec<u64> = match (p.h1, win.h1_integers) {
        (Some(h), ints) => {
            let inside = ints.is_some_and(|(lo, hi)| (lo..=hi).contains(&h));
            p.mode.check(
                inside,
                || format!("H1 = {h} outside [{:.3}, {:.3}]", win.h1_bounds.0, win.h1_bounds.1),
                &mut warnings,
            )?;
            vec![h]
        }
        (None, Some((lo, hi))) => (lo..=hi).collect(),
        (None, None) => {
            return Err(Error::validation(format!(
                "no integer H1 in [{:.3}, {:.3}]",
                win.h1_bounds.0, win.h1_bounds.1
            )))
        }
    };
    if candidates_h1.contains(&0) {
        return Err(Error::domain("H1 must be at least 1"));
    }
    let n1 = range.n1().max(1);
    let cap = |h: u64| h.min(n1);
    let k_max = cap(*candidates_h1.iter().max().unwrap_or(&1));
    // first_fit's k is the left offset; this definition's k is one larger.
    let cands = candidates(src, &range, win.omega, (k_max - 1) as u32, p.t + p.u)?;
    let mut best: Option<(u64, Tally, Vec<Segment>)> = None;
    for &h in &candidates_h1 {
        let budget = cap(h);
        let (tally, chosen) = sweep(&cands, |s| (s.k as u64) < budget);
        if best.as_ref().is_none_or(|b| tally.hits > b.1.hits) {
            best = Some((h, tally, chosen));
        }
    }
    let (h1, tally, chosen) = best.expect("at least one H1");
    let scanned = format!(
        "{}..={}",
        candidates_h1.first().unwrap(),
        candidates_h1.last().unwrap()
    );
    let header = ReportHeader {
        command: "good-segments-2",
        mode: p.mode,
        t: p.t,
        u: p.u,
        tau: p.tau,
        anchor: "A(eps) U ln T < G3(T, U, tau) < A U ln T",
        params: format!("H1={h1};H1_scanned={scanned};epsilon={};N1={}", p.epsilon, range.n1()),
        overrides: Vec::new(),
        warnings,
    };
    Ok((
        CensusReport::build(
            header,
            range.nu_first,
            range.count,
            tally,
            (p.u * p.t.ln(), p.u * (p.t / TAU).ln()),
        ),
        chosen,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy_z::SignSample;

    /// Alternating sign on every ω-step after g: every pair changes sign.
    fn comb(c: f64, d: f64) -> impl Fn(f64) -> SignSample + Sync {
        move |t: f64| SignSample::new(t, (std::f64::consts::PI * (t - c) / d).sin(), 1e-9)
    }

    #[test]
    fn r_with_single_sample_counts_certainty() {
        let spec = GridSpec::new(1e5, 20.0, 1, 0.0, Mode::Exploration).unwrap();
        let src = |t: f64| SignSample::new(t, if t.fract() < 0.1 { 0.0 } else { 1.0 }, 1e-6);
        let r = count_sign_preserving_R(&src, &spec).unwrap();
        assert_eq!(r.misses, 0);
        assert_eq!(r.hits + r.uncertain, r.total);
        assert!(r.uncertain > 0);
    }

    #[test]
    fn r_is_nonincreasing_in_m() {
        let src = comb(0.3, 1.7);
        let mut last = u64::MAX;
        for m in [1, 2, 4, 8, 16] {
            let spec = GridSpec::new(1e5, 30.0, m, 0.0, Mode::Exploration).unwrap();
            let r = count_sign_preserving_R(&src, &spec).unwrap();
            assert!(r.hits <= last);
            last = r.hits;
        }
    }

    #[test]
    fn saturated_pattern() {
        let t = 1e5;
        let w = omega(t).unwrap();
        let src = |x: f64| SignSample::new(x, 1.0, 0.1);
        let p = G1Params {
            t,
            u: 40.0,
            delta: 1.5,
            tau: 0.0,
        };
        assert_eq!(good_segments_G1(&src, &p).unwrap().0.hits, 0);
        // A source that flips sign on every ω-step puts a good segment at
        // k = 0 for every ν; the sweep keeps those that do not touch.
        let src = comb(0.0, w);
        let (r, segs) = good_segments_G1(&src, &p).unwrap();
        let range = index_range(t, p.u, 0.0).unwrap();
        let pts = range.points().unwrap();
        let mut last = f64::NEG_INFINITY;
        let mut expect = 0;
        for g in &pts {
            if g.t + w <= t + p.u && g.t > last {
                last = g.t + w;
                expect += 1;
            }
        }
        assert_eq!(r.hits, expect);
        assert!(segs.windows(2).all(|s| s[1].start > s[0].end));
    }

    #[test]
    fn g3_with_unit_budget_is_the_pairwise_census() {
        let src = comb(0.13, 0.71);
        let p = G3Params {
            t: 1e5,
            u: 40.0,
            h1: Some(1),
            tau: 0.0,
            epsilon: 0.1,
            mode: Mode::Exploration,
        };
        let (r, segs) = good_segments_G3(&src, &p).unwrap();
        assert!(!r.warnings.is_empty());
        assert!(segs.iter().all(|s| s.k == 0));
        let w = omega(1e5).unwrap();
        let mut last = f64::NEG_INFINITY;
        let mut n = 0;
        for g in index_range(1e5, 40.0, 0.0).unwrap().points().unwrap() {
            let (a, b) = (src(g.t), src(g.t + w));
            if g.t + w <= 1e5 + 40.0 && a.sign.opposes(b.sign) && g.t > last {
                last = g.t + w;
                n += 1;
            }
        }
        assert_eq!(r.hits, n);
        let paper = G3Params { mode: Mode::Paper, ..p };
        assert!(matches!(good_segments_G3(&src, &paper), Err(Error::Validation(_))));
    }
}
