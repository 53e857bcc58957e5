//! Riemann–Siegel evaluation of Z(t) in binary64 with an explicit error
//! envelope.
//!
//! Z(t) = 2 Σ_{n ≤ N} n^{-1/2} cos(θ(t) − t ln n)
//!        + (−1)^{N−1} (t/2π)^{-1/4} Σ_{k=0}^{4} C_k(p) (t/2π)^{-k/2},
//! with N = ⌊√(t/2π)⌋ and p its fractional remainder.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::ddouble;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;
use crate::theta::{theta_correction, theta_full_unchecked};

/// Lowest height served by the Riemann–Siegel engine.
pub const RS_MIN_T: f64 = 200.0;

/// Above this height the phases θ(t) − t ln n are formed and reduced in
/// double-double arithmetic.
pub const DD_THRESHOLD: f64 = 1e7;

/// Gabcke's constant for the remainder after C₄: |R₄| ≤ 0.017·(t/2π)^{-11/4}
/// for t ≥ 200.
const REMAINDER_AFTER_C4: f64 = 0.017;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsValue {
    pub t: f64,
    pub value: f64,
    /// Bound on |value − Z(t)| combining truncation and rounding.
    pub err: f64,
    /// Number of terms in the main sum, ⌊√(t/2π)⌋.
    pub terms: usize,
}

// Taylor coefficients of C_k(p) in x = p − 1/2, generated at 120 digits by
// tools/rs_coefficients.py.
#[allow(clippy::excessive_precision)]
const C0: [f64; 51] = [
    3.8268343236508977173e-1,
    0.0,
    1.7489618723100817974,
    0.0,
    2.1180252076854963732,
    0.0,
    -8.7072166705114807392e-1,
    0.0,
    -3.4733112243465167073,
    0.0,
    -1.6626947308999324496,
    0.0,
    1.2167312889192321345,
    0.0,
    1.3014304161007975773,
    0.0,
    3.0511021827361672421e-2,
    0.0,
    -3.7558030515450952428e-1,
    0.0,
    -1.0857844165640659744e-1,
    0.0,
    5.1832902999549623376e-2,
    0.0,
    2.999948061990227592e-2,
    0.0,
    -2.275939670612564226e-3,
    0.0,
    -4.3826474165803383059e-3,
    0.0,
    -4.0642301837298469931e-4,
    0.0,
    4.0060977854221139279e-4,
    0.0,
    8.9710579913888412978e-5,
    0.0,
    -2.3025650027239107116e-5,
    0.0,
    -9.3800066019067924847e-6,
    0.0,
    6.3235149476091075042e-7,
    0.0,
    6.5510228192315016662e-7,
    0.0,
    2.2105237455526972587e-8,
    0.0,
    -3.322316176445628835e-8,
    0.0,
    -3.7349109899336560818e-9,
    0.0,
    1.2445067060797739195e-9,
];
#[allow(clippy::excessive_precision)]
const C1: [f64; 52] = [
    0.0,
    -5.365020525675069406e-2,
    0.0,
    1.102781874108148244e-1,
    0.0,
    1.2317200154315226313,
    0.0,
    1.2634964862799457884,
    0.0,
    -1.6951089975595030184,
    0.0,
    -2.999871196765010089,
    0.0,
    -1.0819944959899208643e-1,
    0.0,
    1.9407662946212712688,
    0.0,
    7.8384235615006865329e-1,
    0.0,
    -5.0548296679003659188e-1,
    0.0,
    -3.8450723496057974051e-1,
    0.0,
    3.7472646465315320676e-2,
    0.0,
    9.0920266109731763173e-2,
    0.0,
    1.0449237550064509218e-2,
    0.0,
    -1.2582979651583416497e-2,
    0.0,
    -3.3995037211512740851e-3,
    0.0,
    1.0410950537714891268e-3,
    0.0,
    5.0109490511184868604e-4,
    0.0,
    -3.9563596690031815595e-5,
    0.0,
    -4.7624592453571896387e-5,
    0.0,
    -1.8539355338085132273e-6,
    0.0,
    3.193691808006897204e-6,
    0.0,
    4.0907807608506066327e-7,
    0.0,
    -1.5446624332576632128e-7,
    0.0,
    -3.4663074917691331722e-8,
    0.0,
    5.1587112588061547847e-9,
];
#[allow(clippy::excessive_precision)]
const C2: [f64; 53] = [
    5.1885428302931684938e-3,
    0.0,
    1.2378633552253898413e-3,
    0.0,
    -1.8137505725166997411e-1,
    0.0,
    1.4291492748532126541e-1,
    0.0,
    1.3303391766687565325,
    0.0,
    3.5224723534037336775e-1,
    0.0,
    -2.4210015958919507238,
    0.0,
    -1.6760787022538108853,
    0.0,
    1.3689416723328372184,
    0.0,
    1.5539019430222983221,
    0.0,
    -1.722164273472998052e-1,
    0.0,
    -6.359068055045430989e-1,
    0.0,
    -9.9116498730412081054e-2,
    0.0,
    1.4033480067387008951e-1,
    0.0,
    4.7823520198272922364e-2,
    0.0,
    -1.7356040641479780798e-2,
    0.0,
    -1.0225012534028591844e-2,
    0.0,
    9.2741491597948878994e-4,
    0.0,
    1.3572194372373385345e-3,
    0.0,
    6.41369012029388009e-5,
    0.0,
    -1.2300805698196629883e-4,
    0.0,
    -1.8313507404789202555e-5,
    0.0,
    7.8216286043226273085e-6,
    0.0,
    2.0087542484759945503e-6,
    0.0,
    -3.3532765393185713737e-7,
    0.0,
    -1.4616020917418230926e-7,
    0.0,
    7.2614973840400724625e-9,
];
#[allow(clippy::excessive_precision)]
const C3: [f64; 54] = [
    0.0,
    -2.6794321814389138085e-3,
    0.0,
    2.9953721091035149637e-2,
    0.0,
    -4.2570172541828697985e-2,
    0.0,
    -2.8997965779803887507e-1,
    0.0,
    4.8888319992354459725e-1,
    0.0,
    1.2308558763957460812,
    0.0,
    -8.2975607085274087042e-1,
    0.0,
    -2.2497635366665668665,
    0.0,
    7.8451399610054713794e-2,
    0.0,
    1.7467492800868894004,
    0.0,
    4.5968080979749935109e-1,
    0.0,
    -6.6193534710397749464e-1,
    0.0,
    -3.1590441036173634579e-1,
    0.0,
    1.2844792545207495989e-1,
    0.0,
    1.0073382716626152301e-1,
    0.0,
    -9.5301838488252677595e-3,
    0.0,
    -1.9264421687514088898e-2,
    0.0,
    -1.2464637158769291712e-3,
    0.0,
    2.424396964110308574e-3,
    0.0,
    4.3764769774185701828e-4,
    0.0,
    -2.0714032687001791276e-4,
    0.0,
    -6.2743445041865155605e-5,
    0.0,
    1.1575343814595669348e-5,
    0.0,
    5.8838549245403797839e-6,
    0.0,
    -3.1246774006963362209e-7,
    0.0,
    -4.024065775498959501e-7,
    0.0,
    -1.1991107794896329606e-8,
];
#[allow(clippy::excessive_precision)]
const C4: [f64; 55] = [
    4.6483389361763381854e-4,
    0.0,
    -4.0226429461361883039e-3,
    0.0,
    3.8471770517961268836e-3,
    0.0,
    6.5811751358094860021e-2,
    0.0,
    -1.9604124343694449118e-1,
    0.0,
    -2.0854053686358853244e-1,
    0.0,
    9.5077541851417509458e-1,
    0.0,
    5.3415353129148739761e-1,
    0.0,
    -1.6763494411763400796,
    0.0,
    -1.0767471578751289928,
    0.0,
    1.2353393016565969853,
    0.0,
    1.0257825340057275772,
    0.0,
    -4.0124095793988544379e-1,
    0.0,
    -5.036663995108303448e-1,
    0.0,
    3.5734877955027449858e-2,
    0.0,
    1.4431763086785416624e-1,
    0.0,
    1.5091527417903469417e-2,
    0.0,
    -2.6098874779194361318e-2,
    0.0,
    -6.126628379519261749e-3,
    0.0,
    3.0775031298708411848e-3,
    0.0,
    1.1562478934088752316e-3,
    0.0,
    -2.2775966758472127473e-4,
    0.0,
    -1.4189637118181444433e-4,
    0.0,
    7.4648603079559194531e-6,
    0.0,
    1.2479701645409116617e-5,
    0.0,
    4.8639451840020946191e-7,
    0.0,
    -8.2102374141231672339e-7,
    0.0,
    -9.2232583974952692886e-8,
];

#[inline]
fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc.mul_add(x, a))
}

const TABLE_LEN: usize = 4096;

/// (ln n, n^{-1/2}) for n < 4096, covering every main sum below t ≈ 10⁸.
fn small_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..TABLE_LEN)
            .map(|n| {
                let x = n.max(1) as f64;
                (x.ln(), 1.0 / x.sqrt())
            })
            .collect()
    })
}

/// Remainder series Σ C_k(p)·a^{-k} with a = √(t/2π).
fn remainder_series(p: f64, a: f64) -> f64 {
    let x = p - 0.5;
    let r = 1.0 / a;
    let c = [
        horner(&C0, x),
        horner(&C1, x),
        horner(&C2, x),
        horner(&C3, x),
        horner(&C4, x),
    ];
    c[0] + r * (c[1] + r * (c[2] + r * (c[3] + r * c[4])))
}

/// Z(t) by the Riemann–Siegel formula with four correction terms.
pub fn z_rs(t: f64) -> Result<RsValue> {
    if !t.is_finite() || t < RS_MIN_T {
        return Err(Error::domain(format!(
            "z_rs needs t >= {RS_MIN_T}, got {t}; use z_em for lower heights"
        )));
    }
    Ok(z_rs_unchecked(t))
}

pub(crate) fn z_rs_unchecked(t: f64) -> RsValue {
    let tau = t / TAU;
    let a = tau.sqrt();
    let n_terms = a.floor() as usize;
    let p = a - n_terms as f64;
    let eps = f64::EPSILON;

    let mut main = CompensatedSum::new();
    let phase_err = if t < DD_THRESHOLD {
        let theta = theta_full_unchecked(t);
        let table = small_table();
        for &(ln_n, inv_sqrt) in &table[1..=n_terms] {
            main.add(inv_sqrt * (theta - t * ln_n).cos());
        }
        let ln_n_max = (n_terms as f64).ln();
        8.0 * eps * (theta.abs() + t * ln_n_max) + 2.0 * eps
    } else {
        let theta = ddouble::theta1(t).add(ddouble::Dd::from_f64(theta_correction(t)));
        for n in 1..=n_terms {
            let nf = n as f64;
            let phase = theta.sub(ddouble::ln(nf).mul_f64(t));
            main.add(ddouble::reduce_tau(phase).cos() / nf.sqrt());
        }
        8.0 * eps
    };
    let main = 2.0 * main.value();

    let sign = if n_terms % 2 == 1 { 1.0 } else { -1.0 };
    let scale = tau.powf(-0.25);
    let correction = sign * scale * remainder_series(p, a);

    // Σ_{n≤N} n^{-1/2} ≤ 2√N
    let weight = 2.0 * 2.0 * (n_terms as f64).sqrt();
    let rounding = weight * (phase_err + 4.0 * eps) + 8.0 * eps * (main.abs() + 1.0);
    let truncation = REMAINDER_AFTER_C4 * tau.powf(-2.75);
    RsValue {
        t,
        value: main + correction,
        err: rounding + truncation,
        terms: n_terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_heights() {
        assert!(matches!(z_rs(199.9), Err(Error::Domain(_))));
        assert!(matches!(z_rs(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn matches_reference_values() {
        // mpmath.siegelz at 30 digits.
        let cases = [
            (200.0, 5.589783623150109),
            (250.3, -1.2317208488808553),
            (1000.0, 0.9977946375215866),
            (4999.7, -1.1984806275681597),
            (10000.123, 0.23313852577179453),
        ];
        for (t, z) in cases {
            let v = z_rs(t).unwrap();
            assert!((v.value - z).abs() <= v.err, "t={t}: {} vs {z} (err {})", v.value, v.err);
            assert!((v.value - z).abs() < 1e-7);
        }
    }

    #[test]
    fn main_sum_length_is_floor_sqrt() {
        for t in [200.0, 1e4, 1e6, 3.3e7] {
            let v = z_rs(t).unwrap();
            assert_eq!(v.terms, (t / TAU).sqrt().floor() as usize);
        }
    }

    #[test]
    fn err_budget_stays_below_1e_minus_4() {
        for t in [200.0, 1e5, 1e6, 9.99e6, 1e7, 1e8, 1e9, 1e10] {
            let v = z_rs(t).unwrap();
            assert!(v.err <= 1e-4, "t={t}: err {}", v.err);
        }
    }

    #[test]
    fn double_double_path_agrees_at_switch_height() {
        // Both phase paths are valid just below the threshold.
        let t = DD_THRESHOLD - 0.5;
        let f = z_rs_unchecked(t);
        let theta = ddouble::theta1(t).add(ddouble::Dd::from_f64(theta_correction(t)));
        let n = f.terms;
        let mut s = CompensatedSum::new();
        for k in 1..=n {
            let kf = k as f64;
            s.add(ddouble::reduce_tau(theta.sub(ddouble::ln(kf).mul_f64(t))).cos() / kf.sqrt());
        }
        let tau = t / TAU;
        let a = tau.sqrt();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let dd = 2.0 * s.value() + sign * tau.powf(-0.25) * remainder_series(a - n as f64, a);
        assert!((dd - f.value).abs() <= f.err, "{dd} vs {}", f.value);
    }

    #[test]
    fn one_ulp_perturbation_stays_within_err() {
        for t in [1234.5, 2.0 * std::f64::consts::PI * 400.0 * 400.0, 7.7e5] {
            let a = z_rs(t).unwrap();
            let b = z_rs(f64::from_bits(t.to_bits() + 1)).unwrap();
            assert!((a.value - b.value).abs() <= a.err + b.err);
        }
    }
}
