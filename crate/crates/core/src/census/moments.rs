use serde::{Deserialize, Serialize};

use super::check_subrange;
use super::report::MomentReport;
use crate::error::Result;
use crate::gram::{gram_point, GridSpec, IndexRange};
use crate::hardy_z::ZSource;
use crate::parallel::try_ordered_map;
use crate::sum::CompensatedSum;
use crate::theta::{theta1_unchecked, theta_full_unchecked};
use crate::ENGINE_VERSION;

/// Which phase enters K̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    Theta1,
    ThetaFull,
    #[default]
    Both,
}

impl ThetaVariant {
    fn theta1(self) -> bool {
        matches!(self, ThetaVariant::Theta1 | ThetaVariant::Both)
    }
    fn full(self) -> bool {
        matches!(self, ThetaVariant::ThetaFull | ThetaVariant::Both)
    }
}

impl std::str::FromStr for ThetaVariant {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta1" => Ok(ThetaVariant::Theta1),
            "theta_full" | "full" => Ok(ThetaVariant::ThetaFull),
            "both" => Ok(ThetaVariant::Both),
            _ => Err(crate::Error::Validation(format!(
                "theta variant must be theta1, theta_full or both, got {s:?}"
            ))),
        }
    }
}

struct PerNu {
    j: f64,
    n1: f64,
    nf: f64,
    uncertain: u64,
}

/// |Σ_k (e^{−iθ(x_k)} z_k − 1)|²
fn k_bar_sq(xs: &[f64], zs: &[f64], theta: fn(f64) -> f64) -> f64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (&x, &z) in xs.iter().zip(zs) {
        let (s, c) = theta(x).sin_cos();
        re.add(c * z - 1.0);
        im.add(-s * z);
    }
    re.value().powi(2) + im.value().powi(2)
}

/// J̄ = Σ_ν (Σ_{k=0}^M Z(g_ν(τ) + kω))² and N̄ = Σ_ν |K̄|².
pub fn moments<S: ZSource + ?Sized>(src: &S, spec: &GridSpec, variant: ThetaVariant) -> Result<MomentReport> {
    let range = spec.index_range()?;
    moments_range(src, spec, variant, &range)
}

pub fn moments_range<S: ZSource + ?Sized>(
    src: &S,
    spec: &GridSpec,
    variant: ThetaVariant,
    range: &IndexRange,
) -> Result<MomentReport> {
    check_subrange(&spec.index_range()?, range)?;
    let per = try_ordered_map(range.nu_first, range.nu_first + range.count, |nu| {
        let g = gram_point(nu, spec.tau)?.t;
        let xs: Vec<f64> = (0..=spec.m).map(|k| g + k as f64 * spec.omega).collect();
        let mut zs = Vec::with_capacity(xs.len());
        let mut uncertain = 0;
        for &x in &xs {
            let s = src.sample(x);
            if !s.sign.is_certain() {
                uncertain += 1;
            }
            zs.push(s.z);
        }
        let sum: CompensatedSum = zs.iter().copied().collect();
        Ok(PerNu {
            j: sum.value().powi(2),
            n1: if variant.theta1() { k_bar_sq(&xs, &zs, theta1_unchecked) } else { 0.0 },
            nf: if variant.full() { k_bar_sq(&xs, &zs, theta_full_unchecked) } else { 0.0 },
            uncertain,
        })
    })?;
    let j: CompensatedSum = per.iter().map(|p| p.j).collect();
    let n1: CompensatedSum = per.iter().map(|p| p.n1).collect();
    let nf: CompensatedSum = per.iter().map(|p| p.nf).collect();
    let norm = MomentReport::normalizer(spec.t, spec.u, spec.m);
    let n1 = variant.theta1().then(|| n1.value());
    let nf = variant.full().then(|| nf.value());
    Ok(MomentReport {
        command: "moments".to_string(),
        mode: spec.mode,
        t: spec.t,
        u: spec.u,
        m: spec.m,
        tau: spec.tau,
        first_index: range.nu_first,
        index_count: range.count,
        j_bar: j.value(),
        n_bar_theta1: n1,
        n_bar_theta_full: nf,
        normalized_j: j.value() / norm,
        normalized_n_theta1: n1.map(|n| n / norm),
        normalized_n_theta_full: nf.map(|n| n / norm),
        uncertain_samples: per.iter().map(|p| p.uncertain).sum(),
        anchor: "J = A M U ln^2 T + o(M U ln^2 T); N = O(M U ln^2 T)".to_string(),
        overrides: String::new(),
        warnings: spec.warnings.join(";"),
        engine: ENGINE_VERSION.to_string(),
    })
}
