//! Lattice scans for certified sign changes of Z.
//!
//! Samples are taken at `lo + i·h`. Around every uncertain lattice sample the
//! scan adds probes at `±h/2, ±h/4, …, ±h/2^m` (m = `max_halvings`); probe
//! positions are written as `lo + (i·2^j ± 1)·(h/2^j)` so that the lattice
//! for step h/2 reproduces every sample of the lattice for step h bit for bit.
//! Halving the step therefore only ever adds samples, and the number of sign
//! changes between consecutive certain samples cannot drop.

use serde::{Deserialize, Serialize};

use super::{HardyZ, SignSample, ZSource, RS_MIN_T};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// How many times the step is halved around an uncertain sample.
    pub max_halvings: u32,
    /// Required bracket width relative to max(1, lo) after refinement.
    pub refine_rel: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            max_halvings: 4,
            refine_rel: 1e-9,
        }
    }
}

/// An interval with certified opposite signs of Z at its ends, so it holds a
/// zero of odd order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
    pub refinement_width: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroScan {
    pub brackets: Vec<ZeroBracket>,
    pub samples: usize,
    pub uncertain: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstZero {
    pub zero: Option<ZeroBracket>,
    pub samples: usize,
    pub uncertain: usize,
}

struct Walker<'a, S: ?Sized> {
    src: &'a S,
    lo: f64,
    h: f64,
    halvings: u32,
    last: Option<SignSample>,
    samples: usize,
    uncertain: usize,
}

impl<'a, S: ZSource + ?Sized> Walker<'a, S> {
    fn new(src: &'a S, lo: f64, h: f64, halvings: u32) -> Self {
        Walker {
            src,
            lo,
            h,
            halvings,
            last: None,
            samples: 0,
            uncertain: 0,
        }
    }

    fn lattice(&self, i: u64) -> f64 {
        self.lo + i as f64 * self.h
    }

    /// lo + (i·2^j + dir)·(h/2^j)
    fn probe(&self, i: u64, j: u32, dir: f64) -> f64 {
        let scale = (1u64 << j) as f64;
        self.lo + (i as f64 * scale + dir) * (self.h / scale)
    }

    fn sample(&mut self, t: f64) -> SignSample {
        self.samples += 1;
        self.src.sample(t)
    }

    /// Feed one sample in increasing-t order; returns a bracket when the sign
    /// flips relative to the previous certain sample.
    fn feed(&mut self, s: SignSample) -> Option<(SignSample, SignSample)> {
        if !s.sign.is_certain() {
            self.uncertain += 1;
            return None;
        }
        let out = match self.last {
            Some(prev) if prev.sign.opposes(s.sign) => Some((prev, s)),
            _ => None,
        };
        self.last = Some(s);
        out
    }

    /// Walk the cell from lattice point `i` (already fed, sample `left`) to
    /// `end`. `end_index` is `Some(i + 1)` for interior cells and `None` when
    /// the cell closes at the exact interval end.
    fn cell(
        &mut self,
        i: u64,
        left: SignSample,
        end: f64,
        end_index: Option<u64>,
        found: &mut Vec<(SignSample, SignSample)>,
    ) -> SignSample {
        let right = self.sample(end);
        let mut probes: Vec<f64> = Vec::new();
        if !left.sign.is_certain() {
            for j in (1..=self.halvings).rev() {
                probes.push(self.probe(i, j, 1.0));
            }
        }
        if !right.sign.is_certain() {
            for j in 1..=self.halvings {
                let t = match end_index {
                    Some(k) => self.probe(k, j, -1.0),
                    None => end - self.h / (1u64 << j) as f64,
                };
                probes.push(t);
            }
        }
        probes.retain(|&t| t > left.t && t < end);
        probes.sort_by(|a, b| a.total_cmp(b));
        probes.dedup();
        for t in probes {
            let s = self.sample(t);
            if let Some(b) = self.feed(s) {
                found.push(b);
            }
        }
        if let Some(b) = self.feed(right) {
            found.push(b);
        }
        right
    }
}

/// Bisect a certified bracket until the midpoint sign is no longer decidable
/// or the interval cannot be split further in binary64.
fn refine<S: ZSource + ?Sized>(src: &S, mut a: SignSample, mut b: SignSample) -> ZeroBracket {
    for _ in 0..200 {
        let width = b.t - a.t;
        let mid = a.t + 0.5 * width;
        if mid <= a.t || mid >= b.t {
            break;
        }
        let mut decided = false;
        for frac in [0.5, 0.25, 0.75] {
            let x = a.t + frac * width;
            if x <= a.t || x >= b.t {
                continue;
            }
            let s = src.sample(x);
            if !s.sign.is_certain() {
                continue;
            }
            if s.sign == a.sign {
                a = s;
            } else {
                b = s;
            }
            decided = true;
            break;
        }
        if !decided {
            break;
        }
    }
    ZeroBracket {
        lo: a.t,
        hi: b.t,
        root: a.t + 0.5 * (b.t - a.t),
        refinement_width: b.t - a.t,
    }
}

fn check_scan_args(lo: f64, hi: f64, step: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!("scan needs finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain(format!("scan step must be positive, got {step}")));
    }
    Ok(())
}

/// All certified sign changes of `src` on [lo, hi].
pub fn scan_zeros<S: ZSource + ?Sized>(
    src: &S,
    lo: f64,
    hi: f64,
    step: f64,
    opts: ScanOptions,
) -> Result<ZeroScan> {
    check_scan_args(lo, hi, step)?;
    let mut w = Walker::new(src, lo, step, opts.max_halvings);
    let mut found = Vec::new();
    let mut left = w.sample(lo);
    w.feed(left);
    let mut i = 0u64;
    loop {
        let next = w.lattice(i + 1);
        if next >= hi {
            w.cell(i, left, hi, None, &mut found);
            break;
        }
        left = w.cell(i, left, next, Some(i + 1), &mut found);
        i += 1;
    }
    let brackets = found.into_iter().map(|(a, b)| refine(src, a, b)).collect();
    Ok(ZeroScan {
        brackets,
        samples: w.samples,
        uncertain: w.uncertain,
    })
}

/// The first certified zero after `lo`, searched on the lattice `lo + i·step`
/// through the cell that covers `hi`. The returned zero may lie beyond `hi`;
/// callers compare `root` against their own horizon. Because the lattice and
/// the probes depend only on `lo` and `step`, runs with different horizons
/// agree on every cell they share.
pub fn first_zero_after<S: ZSource + ?Sized>(
    src: &S,
    lo: f64,
    hi: f64,
    step: f64,
    opts: ScanOptions,
) -> Result<FirstZero> {
    check_scan_args(lo, hi.max(lo + step), step)?;
    let mut w = Walker::new(src, lo, step, opts.max_halvings);
    let mut found = Vec::new();
    let mut left = w.sample(lo);
    w.feed(left);
    let mut i = 0u64;
    loop {
        let next = w.lattice(i + 1);
        left = w.cell(i, left, next, Some(i + 1), &mut found);
        if let Some(&(a, b)) = found.first() {
            return Ok(FirstZero {
                zero: Some(refine(src, a, b)),
                samples: w.samples,
                uncertain: w.uncertain,
            });
        }
        if next >= hi {
            break;
        }
        i += 1;
    }
    Ok(FirstZero {
        zero: None,
        samples: w.samples,
        uncertain: w.uncertain,
    })
}

/// Certified odd-order zeros of Z on [lo, hi] using the production engine.
pub fn zeros_in(lo: f64, hi: f64, scan_step: f64) -> Result<Vec<ZeroBracket>> {
    if lo < RS_MIN_T {
        return Err(Error::domain(format!("zeros_in needs lo >= {RS_MIN_T}, got {lo}")));
    }
    check_scan_args(lo, hi, scan_step)?;
    let omega = std::f64::consts::PI / (lo / std::f64::consts::TAU).ln();
    if scan_step > 0.5 * omega * (1.0 + 1e-12) {
        return Err(Error::domain(format!(
            "zeros_in scan_step {scan_step} exceeds ω(lo)/2 = {}",
            0.5 * omega
        )));
    }
    Ok(scan_zeros(&HardyZ, lo, hi, scan_step, ScanOptions::default())?.brackets)
}
