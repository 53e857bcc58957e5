//! Counting objects over Gram windows: short-interval hit censuses, good
//! segments, sign-preserving runs, zero counts, exponential sums and moments.
//!
//! Every operation is generic over [`ZSource`] so synthetic sign patterns can
//! drive it. Per-unit work runs on the current rayon pool and is reduced in
//! index order.

mod moments;
mod psi;
mod report;
mod segments;
mod sums;
mod zeros;

pub use moments::{moments, moments_range, ThetaVariant};
pub use psi::{PsiFunction, PsiKind, PsiRole};
pub use report::{CensusReport, MomentReport, Outcome, Tally};
pub use segments::{
    count_sign_preserving_R, count_sign_preserving_R_range, good_segments_G1,
    good_segments_G1_range, good_segments_G3, G1Params, G1Part, G3Params, Segment,
};
pub use sums::{exp_sum_S1, exp_sum_S2, exp_sums, ExpSumReport, EXP_SUM_MAX_T};
pub use zeros::{
    census_selberg_C, census_theorem1, census_theorem1_range, n0_increment, SelbergParams,
    Theorem1Params,
};

pub(crate) use report::ratio as report_ratio;

use crate::gram::{omega, IndexRange};
use crate::error::{Error, Result};
use crate::hardy_z::{first_zero_after, ScanOptions, ZSource};

/// Default lattice step for zero searches: ω(T)/4.
pub fn default_scan_step(t: f64) -> Result<f64> {
    Ok(omega(t)? / 4.0)
}

/// Is there a certified zero in (a, b)?
pub(crate) fn interval_outcome<S: ZSource + ?Sized>(
    src: &S,
    a: f64,
    b: f64,
    step: f64,
) -> Result<Outcome> {
    if b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) {
        return Ok(Outcome::Miss);
    }
    let fz = first_zero_after(src, a, b, step, ScanOptions::default())?;
    Ok(match fz.zero {
        Some(z) if z.hi <= b => Outcome::Hit,
        _ if fz.uncertain > 0 => Outcome::Uncertain,
        _ => Outcome::Miss,
    })
}

/// `sub` must be a contiguous piece of `full`.
pub(crate) fn check_subrange(full: &IndexRange, sub: &IndexRange) -> Result<()> {
    let inside = sub.tau == full.tau
        && sub.nu_first >= full.nu_first
        && sub.nu_first + sub.count <= full.nu_first + full.count;
    if inside {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "index range [{}, +{}) is not part of the window range [{}, +{})",
            sub.nu_first, sub.count, full.nu_first, full.count
        )))
    }
}
