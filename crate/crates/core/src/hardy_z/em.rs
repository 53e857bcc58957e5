//! Euler–Maclaurin evaluation of ζ(1/2 + it) in multiprecision, rotated by
//! the exact phase θ(t) = Im lnΓ(1/4 + it/2) − (t/2)·ln π into Z(t).
//!
//! This engine is independent of the Riemann–Siegel path: it shares no
//! coefficients, no truncation rule and no floating-point code with it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use astro_float::BigFloat;

use crate::mp::{bernoulli, to_decimal, to_f64, Cplx, Ctx, BERNOULLI_MAX_EVEN};

pub const EM_MAX_T: f64 = 1e6;
pub const EM_MIN_DIGITS: u32 = 15;
pub const EM_MAX_DIGITS: u32 = 60;

/// Result of the oracle engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleZ {
    pub t: f64,
    /// Z(t) rounded to binary64.
    pub value: f64,
    /// Z(t) to the requested number of significant digits.
    pub decimal: String,
    /// |Im(e^{iθ}ζ)|; zero up to the working precision.
    pub imag_residual: f64,
    pub digits: u32,
    /// Guaranteed bound 10^(2 − digits) on |value − Z(t)| before rounding to f64.
    pub error_bound: f64,
    /// Number of Dirichlet terms and Bernoulli corrections used.
    pub terms: usize,
    pub corrections: usize,
}

/// Z(t) from Euler–Maclaurin summation at `digits` decimal digits.
pub fn z_em(t: f64, digits: u32) -> Result<OracleZ> {
    if !t.is_finite() || t <= 0.0 || t > EM_MAX_T {
        return Err(Error::domain(format!(
            "z_em needs 0 < t <= {EM_MAX_T:e}, got {t}"
        )));
    }
    if !(EM_MIN_DIGITS..=EM_MAX_DIGITS).contains(&digits) {
        return Err(Error::domain(format!(
            "z_em precision_digits must lie in [{EM_MIN_DIGITS}, {EM_MAX_DIGITS}], got {digits}"
        )));
    }
    let d = digits as f64;
    // Bernoulli corrections shrink by ≈ 1/4 each once 2πN ≥ 2(t + 2K).
    let corrections = (d * std::f64::consts::LN_10 / 4f64.ln()).ceil() as usize + 8;
    let n = (((t + 2.0 * corrections as f64 + 2.0) / std::f64::consts::PI).ceil() as usize).max(16);
    let bits = (d * std::f64::consts::LOG2_10).ceil() as usize
        + 40
        + (t + 2.0).log2().ceil() as usize
        + (n as f64).log2().ceil() as usize;
    let p = bits.div_ceil(64) * 64;
    let mut ctx = Ctx::new(p);

    let zeta = zeta_half_line(&mut ctx, t, n, corrections, d)?;
    let theta = theta_exact(&mut ctx, t, d)?;
    let (c, s) = (ctx.cos(&theta), ctx.sin(&theta));
    let rot = ctx.cmul(&Cplx::new(c, s), &zeta);

    Ok(OracleZ {
        t,
        value: to_f64(&rot.re),
        decimal: to_decimal(&rot.re, digits as usize),
        imag_residual: to_f64(&rot.im).abs(),
        digits,
        error_bound: 10f64.powf(2.0 - d),
        terms: n,
        corrections,
    })
}

/// Smallest-prime-factor sieve, used to build ln n from ln p + ln(n/p).
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn zeta_half_line(ctx: &mut Ctx, t: f64, n: usize, corrections: usize, digits: f64) -> Result<Cplx> {
    let tb = ctx.f(t);
    let half = ctx.f(0.5);
    let spf = spf_sieve(n);
    let mut logs = Vec::with_capacity(n + 1);
    logs.push(ctx.f(0.0));
    logs.push(ctx.f(0.0));
    for k in 2..=n {
        let p = spf[k] as usize;
        let l = if p == k {
            let kb = ctx.u(k as u64);
            ctx.ln(&kb)
        } else {
            ctx.add(&logs[p], &logs[k / p])
        };
        logs.push(l);
    }

    // n^{-s} = n^{-1/2}·e^{-it ln n}
    let power = |ctx: &mut Ctx, k: usize| -> Cplx {
        let a = ctx.mul(&tb, &logs[k]);
        let amp = ctx.sqrt(&ctx.u(k as u64));
        let (c, s) = (ctx.cos(&a), ctx.sin(&a));
        Cplx::new(ctx.div(&c, &amp), ctx.div(&s, &amp).neg())
    };

    let mut re = ctx.f(0.0);
    let mut im = ctx.f(0.0);
    for k in 1..n {
        let z = power(ctx, k);
        re = ctx.add(&re, &z.re);
        im = ctx.add(&im, &z.im);
    }
    let mut acc = Cplx::new(re, im);

    let s = Cplx::new(half.clone(), tb.clone());
    let nb = ctx.u(n as u64);
    let n_pow = power(ctx, n);
    // N^{-s}/2
    acc = ctx.cadd(&acc, &ctx.cscale(&n_pow, &half));
    // N^{1-s}/(s-1)
    let s_minus_1 = Cplx::new(ctx.f(-0.5), tb.clone());
    let head = ctx.cdiv(&ctx.cscale(&n_pow, &nb), &s_minus_1);
    acc = ctx.cadd(&acc, &head);

    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let bern = bernoulli();
    let n2 = ctx.mul(&nb, &nb);
    let mut rising = ctx.cdiv(&ctx.cmul(&s, &n_pow), &Cplx::new(nb.clone(), ctx.f(0.0)));
    let mut fact = ctx.u(2);
    let threshold = 10f64.powf(-digits - 6.0);
    let mut last_mag = f64::INFINITY;
    for k in 1..=corrections {
        if 2 * k > BERNOULLI_MAX_EVEN {
            return Err(Error::numerical("z_em: Bernoulli table exhausted"));
        }
        let b = ctx.rational(&bern[2 * k]);
        let coef = ctx.div(&b, &fact);
        let term = ctx.cscale(&rising, &coef);
        acc = ctx.cadd(&acc, &term);
        last_mag = to_f64(&ctx.cabs(&term));
        if last_mag < threshold {
            break;
        }
        // advance (s)_{2k-1} N^{-s-2k+1} → (s)_{2k+1} N^{-s-2k-1}
        let a = Cplx::new(ctx.add(&half, &ctx.u(2 * k as u64 - 1)), tb.clone());
        let b2 = Cplx::new(ctx.add(&half, &ctx.u(2 * k as u64)), tb.clone());
        rising = ctx.cmul(&ctx.cmul(&rising, &a), &b2);
        rising = Cplx::new(ctx.div(&rising.re, &n2), ctx.div(&rising.im, &n2));
        fact = ctx.mul(&fact, &ctx.u(((2 * k + 1) * (2 * k + 2)) as u64));
    }
    if last_mag >= threshold {
        return Err(Error::numerical(format!(
            "z_em: Euler–Maclaurin tail {last_mag:e} did not reach 1e-{} at t = {t}",
            digits + 6.0
        )));
    }
    Ok(acc)
}

/// θ(t) = Im lnΓ(1/4 + it/2) − (t/2)·ln π via Stirling's series after shifting
/// the argument far enough from the origin.
fn theta_exact(ctx: &mut Ctx, t: f64, digits: f64) -> Result<BigFloat> {
    let target = (digits + 8.0) * std::f64::consts::LN_10 / std::f64::consts::TAU + 8.0;
    let b = ctx.f(0.5 * t);
    let modulus = (0.0625 + 0.25 * t * t).sqrt();
    let shift = if modulus >= target { 0 } else { (target - 0.25).ceil() as usize };

    let quarter = ctx.f(0.25);
    // −Σ_{j<shift} arg(z + j)
    let mut im = ctx.f(0.0);
    for j in 0..shift {
        let re = ctx.add(&quarter, &ctx.u(j as u64));
        let a = ctx.atan(&ctx.div(&b, &re));
        im = ctx.sub(&im, &a);
    }
    let wr = ctx.add(&quarter, &ctx.u(shift as u64));
    let w = Cplx::new(wr.clone(), b.clone());

    // Im[(w − 1/2) ln w − w]
    let arg = ctx.atan(&ctx.div(&b, &wr));
    let abs2 = ctx.add(&ctx.mul(&wr, &wr), &ctx.mul(&b, &b));
    let ln_abs2 = ctx.ln(&abs2);
    let ln_abs = ctx.mul(&ln_abs2, &ctx.f(0.5));
    let lead = ctx.sub(
        &ctx.add(&ctx.mul(&ctx.sub(&wr, &ctx.f(0.5)), &arg), &ctx.mul(&b, &ln_abs)),
        &b,
    );
    im = ctx.add(&im, &lead);

    // Σ B_{2k}/(2k(2k−1)) · Im w^{1−2k}
    let one = Cplx::new(ctx.f(1.0), ctx.f(0.0));
    let winv = ctx.cdiv(&one, &w);
    let winv2 = ctx.cmul(&winv, &winv);
    let mut pw = winv;
    let bern = bernoulli();
    let threshold = 10f64.powf(-digits - 8.0);
    let mut converged = false;
    let mut k = 1;
    while 2 * k <= BERNOULLI_MAX_EVEN {
        let b2k = ctx.rational(&bern[2 * k]);
        let coef = ctx.div(&b2k, &ctx.u((2 * k * (2 * k - 1)) as u64));
        let term = ctx.mul(&pw.im, &coef);
        im = ctx.add(&im, &term);
        let mag = to_f64(&ctx.mul(&ctx.cabs(&pw), &coef)).abs();
        if mag < threshold {
            converged = true;
            break;
        }
        pw = ctx.cmul(&pw, &winv2);
        k += 1;
    }
    if !converged {
        return Err(Error::numerical(format!("z_em: Stirling series did not converge at t = {t}")));
    }
    let pi = ctx.pi();
    let ln_pi = ctx.ln(&pi);
    Ok(ctx.sub(&im, &ctx.mul(&b, &ln_pi)))
}
