use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{index_range, omega, p0, GramPoint};
use crate::hardy_z::ddouble::{self, Dd};
use crate::sum::CompensatedSum;
use crate::ENGINE_VERSION;

/// Height above which the O(P₀²·N₁) double sums are refused.
pub const EXP_SUM_MAX_T: f64 = 1e5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSumReport {
    pub command: String,
    pub t: f64,
    pub u: f64,
    pub tau: f64,
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub gram_points: u64,
    pub s1: f64,
    pub s2: f64,
    /// |S̄₁|/(M T^{5/12} ln³T), M replaced by 1 when zero.
    pub normalized_s1: f64,
    /// |S̄₂|/(T^{5/12} ln²T)
    pub normalized_s2: f64,
    pub anchor: String,
    pub engine: String,
}

struct Setup {
    points: Vec<GramPoint>,
    omega: f64,
    p0: f64,
    /// ln n for n = 0..n_max (index 0 unused)
    logs: Vec<Dd>,
}

fn setup(t: f64, u: f64, tau: f64) -> Result<Setup> {
    let p0 = p0(t);
    let range = index_range(t, u, tau)?;
    if t > EXP_SUM_MAX_T {
        let pairs = p0 * p0 / 2.0;
        return Err(Error::validation(format!(
            "exponential sums refused above T = {EXP_SUM_MAX_T}: about {:.3e} cosine terms \
             ({pairs:.0} pairs x {} Gram points)",
            pairs * range.count as f64,
            range.count
        )));
    }
    let n_max = p0.ceil() as usize;
    Ok(Setup {
        points: range.points()?,
        omega: omega(t)?,
        p0,
        logs: (0..n_max).map(|n| ddouble::ln(n.max(1) as f64)).collect(),
    })
}

impl Setup {
    /// Integers n with 1 ≤ n < P₀.
    fn n_below(&self) -> usize {
        (1..self.logs.len()).take_while(|&n| (n as f64) < self.p0).count()
    }

    fn log(&self, n: usize) -> f64 {
        self.logs[n].to_f64()
    }

    /// Σ_{m<n<P₀} w(m,n)·Σ_ν sgn_ν·cos(g_ν·L(m,n) + φ(m,n)), rows in parallel
    /// and reduced in order. g_ν·L is formed and reduced mod 2π in
    /// double-double.
    fn double_sum(
        &self,
        alternate: bool,
        freq: impl Fn(usize, usize) -> Dd + Sync,
        phase: impl Fn(usize, usize) -> f64 + Sync,
    ) -> f64 {
        let top = self.n_below();
        let rows: Vec<f64> = (1..=top)
            .into_par_iter()
            .map(|m| {
                let mut row = CompensatedSum::new();
                for n in m + 1..=top {
                    let l = freq(m, n);
                    let mut re = CompensatedSum::new();
                    let mut im = CompensatedSum::new();
                    for g in &self.points {
                        let sgn = if alternate && g.nu % 2 == 1 { -1.0 } else { 1.0 };
                        let (s, c) = ddouble::reduce_tau(l.mul_f64(g.t)).sin_cos();
                        re.add(sgn * c);
                        im.add(sgn * s);
                    }
                    // Re(e^{iφ}·Σ e^{i g L})
                    let (sp, cp) = phase(m, n).sin_cos();
                    let inner = cp * re.value() - sp * im.value();
                    row.add(inner / ((m * n) as f64).sqrt());
                }
                row.value()
            })
            .collect();
        rows.into_iter().collect::<CompensatedSum>().value()
    }
}

/// S̄₁ = Σ_{m<n<P₀} (mn)^{-1/2} Σ_ν cos(g_ν(τ) ln(n/m) + φ₁),
/// φ₁ = kω ln(P₀/m) − lω ln(P₀/n).
#[allow(non_snake_case)]
pub fn exp_sum_S1(t: f64, u: f64, tau: f64, k: u32, l: u32) -> Result<f64> {
    let s = setup(t, u, tau)?;
    Ok(s1(&s, k, l))
}

/// S̄₂ = Σ_{m<n<P₀} (mn)^{-1/2} Σ_ν (−1)^ν cos(g_ν(τ) ln(mn) + φ̄₂),
/// φ̄₂ = −kω ln(P₀/n) − lω ln(P₀/m) − τ.
#[allow(non_snake_case)]
pub fn exp_sum_S2(t: f64, u: f64, tau: f64, k: u32, l: u32) -> Result<f64> {
    let s = setup(t, u, tau)?;
    Ok(s2(&s, k, l, tau))
}

fn s1(s: &Setup, k: u32, l: u32) -> f64 {
    let lp = s.p0.ln();
    let (kw, lw) = (k as f64 * s.omega, l as f64 * s.omega);
    s.double_sum(
        false,
        |m, n| s.logs[n].sub(s.logs[m]),
        |m, n| kw * (lp - s.log(m)) - lw * (lp - s.log(n)),
    )
}

fn s2(s: &Setup, k: u32, l: u32, tau: f64) -> f64 {
    let lp = s.p0.ln();
    let (kw, lw) = (k as f64 * s.omega, l as f64 * s.omega);
    s.double_sum(
        true,
        |m, n| s.logs[n].add(s.logs[m]),
        |m, n| -kw * (lp - s.log(n)) - lw * (lp - s.log(m)) - tau,
    )
}

/// Both sums with their normalized magnitudes.
pub fn exp_sums(t: f64, u: f64, tau: f64, m: u32, k: u32, l: u32) -> Result<ExpSumReport> {
    let s = setup(t, u, tau)?;
    let (v1, v2) = (s1(&s, k, l), s2(&s, k, l, tau));
    let base = t.powf(5.0 / 12.0);
    Ok(ExpSumReport {
        command: "expsums".to_string(),
        t,
        u,
        tau,
        m,
        k,
        l,
        gram_points: s.points.len() as u64,
        s1: v1,
        s2: v2,
        normalized_s1: v1.abs() / (m.max(1) as f64 * base * t.ln().powi(3)),
        normalized_s2: v2.abs() / (base * t.ln().powi(2)),
        anchor: "S1 = O(M T^(5/12) ln^3 T); S2 = O(T^(5/12) ln^2 T)".to_string(),
        engine: ENGINE_VERSION.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_large_heights() {
        let e = exp_sum_S1(2e5, 1.0, 0.0, 0, 0).unwrap_err();
        assert!(matches!(e, Error::Validation(ref m) if m.contains("cosine terms")), "{e:?}");
    }

    #[test]
    fn empty_window_is_zero() {
        let w = omega(1e4).unwrap();
        // A window much shorter than one spacing, placed between two points.
        let g = crate::gram::gram_point(12000, 0.0).unwrap().t;
        let t = g + 0.25 * w;
        assert_eq!(index_range(t, 0.1 * w, 0.0).unwrap().count, 0);
        assert_eq!(exp_sum_S1(t, 0.1 * w, 0.0, 1, 2).unwrap(), 0.0);
        assert_eq!(exp_sum_S2(t, 0.1 * w, 0.0, 1, 2).unwrap(), 0.0);
    }

    #[test]
    fn zero_shift_is_the_plain_cosine_sum() {
        let (t, u) = (1e4, 5.0);
        let pts = index_range(t, u, 0.0).unwrap().points().unwrap();
        let p0 = p0(t);
        let mut direct = 0.0;
        let mut n = 2;
        while (n as f64) < p0 {
            for m in 1..n {
                let l = (n as f64 / m as f64).ln();
                let inner: f64 = pts.iter().map(|g| (g.t * l).cos()).sum();
                direct += inner / ((m * n) as f64).sqrt();
            }
            n += 1;
        }
        let v = exp_sum_S1(t, u, 0.0, 0, 0).unwrap();
        assert!((v - direct).abs() <= 1e-9 * direct.abs().max(1.0), "{v} vs {direct}");
    }
}
