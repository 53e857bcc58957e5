//! Acceptance run. Each criterion prints one `criterion N: PASS|FAIL` line;
//! the process exits non-zero when any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use astro_float::{BigFloat, Consts, RoundingMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use gramgrid::asymptotics::exact_gram_count;
use gramgrid::census::{
    census_selberg_C, census_theorem1, census_theorem1_range, exp_sums, good_segments_G1,
    moments, n0_increment, CensusReport, G1Params, PsiFunction, PsiKind, SelbergParams,
    Theorem1Params, ThetaVariant,
};
use gramgrid::gram::{count_by_phase, d_closed, gram_point, index_range, omega, p0, spacing_check, GridSpec};
use gramgrid::hardy_z::{z_em, z_rs, zeros_in, HardyZ, ZeroBracket};
use gramgrid::parallel::with_workers;
use gramgrid::theta::theta1;
use gramgrid::Mode;

const TAUS: [f64; 5] = [-PI, -FRAC_PI_2, 0.0, FRAC_PI_2, PI];

// Pinned tolerances and budgets.
const C1_WINDOWS: usize = 100;
const C1_PHASE_SLACK: i64 = 1;
const C1_BUDGET: Duration = Duration::from_secs(10);
const C2_SAMPLES: usize = 100;
const C2_DIGITS: u32 = 50;
const C2_TOL: f64 = 1e-6;
const C2_BUDGET: Duration = Duration::from_secs(60);
const C3_T: f64 = 1e6;
const C3_U: f64 = 200.0;
const C3_SLACK: f64 = 10.0;
const C3_BUDGET: Duration = Duration::from_secs(300);
const C4_T: f64 = 1e6;
const C4_U: f64 = 500.0;
const C4_SCALES: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];
const C4_MIN_FRACTION: f64 = 0.99;
const C4_BUDGET: Duration = Duration::from_secs(600);
const C5_T: f64 = 1e6;
const C5_U: f64 = 200.0;
const C5_DELTA: f64 = 1.5;
const C5_SIGMAS: f64 = 3.0;
const C5_BUDGET: Duration = Duration::from_secs(900);
const C6_T: f64 = 1e6;
const C6_U: f64 = 1e3;
const C6_MAX_EXPONENT: f64 = 2.2;
const C6_D_MAX_P: u64 = 10_000;
const C6_D_TOL: f64 = 1e-12;
const C7_U: f64 = 1000.0;
const C7_RUNS: [(f64, u32); 2] = [(1e5, 20), (4e5, 22)];
const C7_FACTOR: f64 = 2.0;
const C7_BUDGET: Duration = Duration::from_secs(600);
const C8_T: f64 = 1e4;
const C8_U: f64 = 50.0;
const C8_M: u32 = 2;
const C8_REL_TOL: f64 = 1e-8;
const C8_BOUND: f64 = 10.0;
const C9_T: f64 = 1e6;
const C9_EPSILON: f64 = 0.1;
const C9_SPAN: f64 = 2000.0;
const C9_GRID_STEP: f64 = 0.05;
const C9_TOL: f64 = 0.02;
const C9_PSI_SCALES: [f64; 3] = [0.5, 1.0, 2.0];
const C10_WORKERS: [usize; 2] = [1, 4];

/// Working precision of the high-precision oracles, in bits.
const ORACLE_BITS: usize = 256;

type Outcome = Result<String, String>;

fn within_budget(start: Instant, budget: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > budget {
        Err(format!("took {took:.1?}, budget {budget:?}"))
    } else {
        Ok(took)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn mean_spacing(t: f64) -> f64 {
    TAU / (t / TAU).ln()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6772_616d);
    let mut total = 0u64;
    let mut worst_phase = 0i64;
    for _ in 0..C1_WINDOWS {
        let t = 10f64.powf(rng.gen_range(4.0..8.0));
        let u = 10f64.powf(rng.gen_range(1.0..3.0));
        let tau = TAUS[rng.gen_range(0..TAUS.len())];
        let exact = exact_gram_count(t, u, tau).map_err(e)?;
        // Solve every index around the phase estimate and keep those inside.
        let lo = ((2.0 * theta1(t).map_err(e)? - tau) / PI).floor() as u64 - 3;
        let hi = ((2.0 * theta1(t + u).map_err(e)? - tau) / PI).ceil() as u64 + 3;
        let mut brute = 0u64;
        for nu in lo.max(1)..=hi {
            let g = gram_point(nu, tau).map_err(e)?.t;
            if g >= t && g <= t + u {
                brute += 1;
            }
        }
        ensure(exact == brute, || format!("T={t} U={u} tau={tau}: exact {exact} brute {brute}"))?;
        let diff = count_by_phase(t, u, tau) - exact as i64;
        worst_phase = worst_phase.max(diff.abs());
        ensure(diff.abs() <= C1_PHASE_SLACK, || {
            format!("T={t} U={u} tau={tau}: phase formula off by {diff}")
        })?;
        total += exact;
    }
    let took = within_budget(start, C1_BUDGET)?;
    Ok(format!(
        "{C1_WINDOWS} windows, {total} points, brute force exact, phase formula max off {worst_phase}, {took:.1?}"
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a5f_656d);
    let ts: Vec<f64> = (0..C2_SAMPLES).map(|_| rng.gen_range(200.0..5000.0)).collect();
    let diffs: Vec<Result<(f64, f64), String>> = ts
        .par_iter()
        .map(|&t| {
            let rs = z_rs(t).map_err(e)?.value;
            let em = z_em(t, C2_DIGITS).map_err(e)?.value;
            Ok((t, (rs - em).abs()))
        })
        .collect();
    let mut worst = (0.0, 0.0);
    for d in diffs {
        let (t, d) = d?;
        if d > worst.1 {
            worst = (t, d);
        }
    }
    ensure(worst.1 <= C2_TOL, || format!("|z_rs - z_em| = {:.3e} at t = {}", worst.1, worst.0))?;
    let took = within_budget(start, C2_BUDGET)?;
    Ok(format!("max |z_rs - z_em| = {:.2e} at t = {:.3}, {took:.1?}", worst.1, worst.0))
}

fn c3_count(workers: Option<usize>) -> Result<CensusReport, String> {
    let step = omega(C3_T).map_err(e)? / 4.0;
    with_workers(workers, || n0_increment(&HardyZ, C3_T, C3_U, step))
        .map_err(e)?
        .map_err(e)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let r = c3_count(None)?;
    let target = C3_U * (C3_T / TAU).ln() / TAU;
    ensure((r.hits as f64 - target).abs() <= C3_SLACK, || {
        format!("{} zeros vs {target:.2}", r.hits)
    })?;
    let windows = [2e3, 5e3, 1e4, 3e4, 1e5, 3e5, 1e6, 3e6, 1e7, 3e7];
    for &t in &windows {
        let w = omega(t).map_err(e)?;
        let mut prev = 0u64;
        for div in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let c = n0_increment(&HardyZ, t, 40.0, w / div).map_err(e)?.hits;
            ensure(c >= prev, || format!("T={t}: count fell from {prev} to {c} at step omega/{div}"))?;
            prev = c;
        }
    }
    let took = within_budget(start, C3_BUDGET)?;
    Ok(format!(
        "{} zeros in [1e6, 1e6+200] vs U ln(T/2pi)/2pi = {target:.2}; refinement monotone on {} windows, {took:.1?}",
        r.hits,
        windows.len()
    ))
}

fn c4_params(scale: f64) -> Theorem1Params {
    let mut p = Theorem1Params::new(C4_T, 0.0);
    p.u_override = Some(C4_U);
    p.psi_bar = PsiFunction::psi_bar(PsiKind::Const(scale * mean_spacing(C4_T)));
    p
}

fn c4_counts(workers: Option<usize>) -> Result<Vec<u64>, String> {
    with_workers(workers, || {
        C4_SCALES
            .iter()
            .map(|&s| census_theorem1(&HardyZ, &c4_params(s)).map(|r| r.hits).map_err(e))
            .collect::<Result<Vec<u64>, String>>()
    })
    .map_err(e)?
}

/// Does some zero of the list lie in (a, b)?
fn listed_zero_in(zeros: &[ZeroBracket], a: f64, b: f64) -> bool {
    let i = zeros.partition_point(|z| z.lo < a);
    zeros.get(i).is_some_and(|z| z.hi <= b)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (_, _, range) = c4_params(1.0).window().map_err(e)?;
    // Per-point outcomes through single-index sub-ranges.
    let params: Vec<Theorem1Params> = C4_SCALES.iter().map(|&s| c4_params(s)).collect();
    let per_point: Vec<Vec<u64>> = params
        .iter()
        .map(|p| {
            (0..range.count)
                .map(|i| census_theorem1_range(&HardyZ, p, &range.slice(i, 1)).map(|r| r.hits))
                .collect::<gramgrid::Result<Vec<u64>>>()
                .map_err(e)
        })
        .collect::<Result<_, _>>()?;
    for w in 0..C4_SCALES.len() - 1 {
        for (i, (lo, hi)) in per_point[w].iter().zip(&per_point[w + 1]).enumerate() {
            ensure(lo <= hi, || {
                format!(
                    "nu = {}: hit at {}x spacing but not at {}x",
                    range.nu_first + i as u64,
                    C4_SCALES[w],
                    C4_SCALES[w + 1]
                )
            })?;
        }
    }
    let reports: Vec<CensusReport> = params
        .iter()
        .map(|p| census_theorem1(&HardyZ, p).map_err(e))
        .collect::<Result<_, _>>()?;
    for (r, pts) in reports.iter().zip(&per_point) {
        ensure(r.hits == pts.iter().sum::<u64>(), || "aggregate differs from per-point sum".into())?;
    }
    let fractions: Vec<f64> = reports.iter().map(|r| r.fraction).collect();

    let widest = C4_SCALES[C4_SCALES.len() - 1] * mean_spacing(C4_T);
    let zeros = zeros_in(C4_T, C4_T + C4_U + 1.5 * widest, omega(C4_T).map_err(e)? / 8.0).map_err(e)?;
    let points = range.points().map_err(e)?;
    let oracle_hits = points
        .iter()
        .filter(|g| listed_zero_in(&zeros, g.t, g.t + widest))
        .count();
    let oracle = oracle_hits as f64 / points.len() as f64;
    let measured = fractions[fractions.len() - 1];
    ensure(oracle >= C4_MIN_FRACTION && measured >= C4_MIN_FRACTION, || {
        format!("fraction at 8x: measured {measured:.4}, oracle {oracle:.4}")
    })?;
    ensure(measured >= oracle - (1.0 - C4_MIN_FRACTION), || {
        format!("measured {measured:.4} falls short of oracle {oracle:.4}")
    })?;
    let took = within_budget(start, C4_BUDGET)?;
    Ok(format!(
        "{} points, fractions {:?} monotone per point; 8x: measured {measured:.4}, oracle {oracle:.4} from {} listed zeros, {took:.1?}",
        range.count,
        fractions.iter().map(|f| (f * 1e4).round() / 1e4).collect::<Vec<_>>(),
        zeros.len()
    ))
}

fn c5_theorem1(tau: f64) -> Theorem1Params {
    let mut p = Theorem1Params::new(C5_T, tau);
    p.u_override = Some(C5_U);
    p
}

fn c5_g1(tau: f64) -> G1Params {
    G1Params {
        t: C5_T,
        u: C5_U,
        delta: C5_DELTA,
        tau,
    }
}

/// (G1 reports, Theorem 1 reports) across the five shifts.
fn c5_reports(workers: Option<usize>) -> Result<(Vec<CensusReport>, Vec<CensusReport>), String> {
    with_workers(workers, || -> Result<_, String> {
        let g1 = TAUS
            .iter()
            .map(|&tau| good_segments_G1(&HardyZ, &c5_g1(tau)).map(|x| x.0).map_err(e))
            .collect::<Result<Vec<_>, _>>()?;
        let th = TAUS
            .iter()
            .map(|&tau| census_theorem1(&HardyZ, &c5_theorem1(tau)).map_err(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((g1, th))
    })
    .map_err(e)?
}

fn spread_ok(name: &str, counts: &[u64]) -> Result<String, String> {
    let max = *counts.iter().max().unwrap();
    let min = *counts.iter().min().unwrap();
    let allowed = C5_SIGMAS * (max as f64).sqrt();
    ensure((max - min) as f64 <= allowed, || {
        format!("{name} counts {counts:?} spread {} > {allowed:.1}", max - min)
    })?;
    Ok(format!("{name} {counts:?} (spread {} <= {allowed:.1})", max - min))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let (g1, th) = c5_reports(None)?;
    let g1_counts: Vec<u64> = g1.iter().map(|r| r.hits).collect();
    let th_counts: Vec<u64> = th.iter().map(|r| r.hits).collect();
    let a = spread_ok("G1", &g1_counts)?;
    let b = spread_ok("theorem1", &th_counts)?;

    // τ = π and τ = −π enumerate the same points, indices shifted by two.
    let hi = index_range(C5_T, C5_U, PI).map_err(e)?;
    let lo = index_range(C5_T, C5_U, -PI).map_err(e)?;
    ensure(lo.nu_first == hi.nu_first + 2 && lo.count == hi.count, || {
        format!("index ranges {hi:?} vs {lo:?}")
    })?;
    for (x, y) in hi.points().map_err(e)?.iter().zip(lo.points().map_err(e)?) {
        ensure(x.t.to_bits() == y.t.to_bits(), || format!("g_{}(pi) != g_{}(-pi)", x.nu, y.nu))?;
    }
    let (g_hi, g_lo) = (&g1[4], &g1[0]);
    let (t_hi, t_lo) = (&th[4], &th[0]);
    for (x, y) in [(g_hi, g_lo), (t_hi, t_lo)] {
        ensure(
            x.hits == y.hits && x.misses == y.misses && x.uncertain == y.uncertain && y.first_index == x.first_index + 2,
            || format!("{}: tau=pi {}/{} vs tau=-pi {}/{}", x.command, x.hits, x.first_index, y.hits, y.first_index),
        )?;
    }
    let took = within_budget(start, C5_BUDGET)?;
    Ok(format!("{a}; {b}; tau = +-pi counts equal under index shift 2, {took:.1?}"))
}

/// Σ_{q=1}^{p} (1 − (1 − Q)^q) by direct summation, every partial sum.
fn d_literal(q: f64, max_p: u64) -> Vec<f64> {
    let rm = RoundingMode::ToEven;
    let one = BigFloat::from_f64(1.0, ORACLE_BITS);
    let base = one.sub(&BigFloat::from_f64(q, ORACLE_BITS), ORACLE_BITS, rm);
    let mut pow = one.clone();
    let mut acc = BigFloat::from_f64(0.0, ORACLE_BITS);
    let mut out = Vec::with_capacity(max_p as usize + 1);
    out.push(0.0);
    for _ in 1..=max_p {
        pow = pow.mul(&base, ORACLE_BITS, rm);
        acc = acc.add(&one.sub(&pow, ORACLE_BITS, rm), ORACLE_BITS, rm);
        out.push(big_to_f64(&acc));
    }
    out
}

fn big_to_f64(x: &BigFloat) -> f64 {
    let s = format!("{x}");
    s.parse().unwrap_or_else(|_| panic!("cannot read {s}"))
}

fn criterion_6() -> Outcome {
    let c = spacing_check(C6_T, C6_U, 0.0).map_err(e)?;
    ensure(c.fit_exponent <= C6_MAX_EXPONENT, || {
        format!("error growth exponent {:.3}", c.fit_exponent)
    })?;
    let l = (C6_T / TAU).ln();
    let q_model = PI / (C6_T * l * l);
    let mut worst = 0.0f64;
    for q in [q_model, 1e-9, 1e-5, 1e-3, 0.05] {
        let lit = d_literal(q, C6_D_MAX_P);
        for (p, &want) in lit.iter().enumerate().skip(1) {
            let got = d_closed(p as u64, q);
            let rel = ((got - want) / want).abs();
            worst = worst.max(rel);
            ensure(rel <= C6_D_TOL, || format!("D({p}) at Q={q:e}: {got} vs {want}"))?;
        }
    }
    Ok(format!(
        "max |predict - actual| = {:.3e} (vs index p + 1: {:.3e}), envelope {:.3e}, exponent {:.3}; D(p) max rel err {worst:.1e} for p <= {C6_D_MAX_P}",
        c.max_error, c.max_error_next_index, c.envelope, c.fit_exponent
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut vals = Vec::new();
    for &(t, m) in &C7_RUNS {
        for tau in [0.0, FRAC_PI_2] {
            let spec = GridSpec::new(t, C7_U, m, tau, Mode::Paper).map_err(e)?;
            let r = moments(&HardyZ, &spec, ThetaVariant::Both).map_err(e)?;
            vals.push(r.normalized_j);
        }
    }
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    ensure(min > 0.0 && max / min <= C7_FACTOR, || format!("normalized J {vals:?}"))?;
    let took = within_budget(start, C7_BUDGET)?;
    Ok(format!(
        "normalized J {:?}, max/min {:.3}, {took:.1?}",
        vals.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
        max / min
    ))
}

/// Direct high-precision evaluation of both double sums over the same Gram
/// points.
fn exp_sum_oracle(k: u32, l: u32) -> Result<(f64, f64), String> {
    let rm = RoundingMode::ToEven;
    let b = ORACLE_BITS;
    let pts = index_range(C8_T, C8_U, 0.0).map_err(e)?.points().map_err(e)?;
    let top = {
        let p = p0(C8_T);
        (1..).take_while(|&n| (n as f64) < p).last().unwrap_or(0) as usize
    };
    let mut cc = Consts::new().map_err(e)?;
    let big = |x: f64| BigFloat::from_f64(x, b);
    let two_pi = cc.pi(b, rm).mul(&big(2.0), b, rm);
    let t = big(C8_T);
    let ln_t2pi = t.div(&two_pi, b, rm).ln(b, rm, &mut cc);
    let omega = cc.pi(b, rm).div(&ln_t2pi, b, rm);
    let lp = ln_t2pi.div(&big(2.0), b, rm);
    let kw = omega.mul(&big(k as f64), b, rm);
    let lw = omega.mul(&big(l as f64), b, rm);
    let logs: Vec<BigFloat> = (0..=top).map(|n| big(n.max(1) as f64).ln(b, rm, &mut cc)).collect();
    let g: Vec<BigFloat> = pts.iter().map(|p| big(p.t)).collect();
    let rows: Vec<(f64, f64)> = (1..=top)
        .into_par_iter()
        .map(|m| {
            let mut cc = Consts::new().expect("constants cache");
            let mut s1 = big(0.0);
            let mut s2 = big(0.0);
            for n in m + 1..=top {
                let w = big((m * n) as f64).sqrt(b, rm);
                let f1 = logs[n].sub(&logs[m], b, rm);
                let f2 = logs[n].add(&logs[m], b, rm);
                let ph1 = kw
                    .mul(&lp.sub(&logs[m], b, rm), b, rm)
                    .sub(&lw.mul(&lp.sub(&logs[n], b, rm), b, rm), b, rm);
                let ph2 = kw
                    .mul(&lp.sub(&logs[n], b, rm), b, rm)
                    .add(&lw.mul(&lp.sub(&logs[m], b, rm), b, rm), b, rm)
                    .neg();
                for (gi, p) in g.iter().zip(&pts) {
                    let c1 = gi.mul(&f1, b, rm).add(&ph1, b, rm).cos(b, rm, &mut cc);
                    s1 = s1.add(&c1.div(&w, b, rm), b, rm);
                    let c2 = gi.mul(&f2, b, rm).add(&ph2, b, rm).cos(b, rm, &mut cc);
                    let c2 = c2.div(&w, b, rm);
                    s2 = if p.nu % 2 == 1 { s2.sub(&c2, b, rm) } else { s2.add(&c2, b, rm) };
                }
            }
            (big_to_f64(&s1), big_to_f64(&s2))
        })
        .collect();
    // Each row rounds once to f64, far below the tolerance.
    let mut a1 = big(0.0);
    let mut a2 = big(0.0);
    for (x, y) in rows {
        a1 = a1.add(&big(x), b, rm);
        a2 = a2.add(&big(y), b, rm);
    }
    Ok((big_to_f64(&a1), big_to_f64(&a2)))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for k in 0..=C8_M {
        for l in 0..=C8_M {
            let r = exp_sums(C8_T, C8_U, 0.0, C8_M, k, l).map_err(e)?;
            let (o1, o2) = exp_sum_oracle(k, l)?;
            for (name, got, want) in [("S1", r.s1, o1), ("S2", r.s2, o2)] {
                let rel = ((got - want) / want).abs();
                worst = worst.max(rel);
                ensure(rel <= C8_REL_TOL, || {
                    format!("{name}({k},{l}) = {got:.15e}, oracle {want:.15e}, rel {rel:.2e}")
                })?;
            }
            worst_norm = worst_norm.max(r.normalized_s1).max(r.normalized_s2);
            ensure(r.normalized_s1 <= C8_BOUND && r.normalized_s2 <= C8_BOUND, || {
                format!("normalized ({k},{l}): {:.3e}, {:.3e}", r.normalized_s1, r.normalized_s2)
            })?;
        }
    }
    Ok(format!(
        "max rel err vs oracle {worst:.2e}, max normalized magnitude {worst_norm:.2e}, {:.1?}",
        start.elapsed()
    ))
}

fn c9_params(scale: f64) -> SelbergParams {
    SelbergParams {
        t: C9_T,
        epsilon: C9_EPSILON,
        psi: PsiFunction::psi(PsiKind::PowLog { a: 0.5, c: scale }),
        grid_step: C9_GRID_STEP,
        span_override: Some(C9_SPAN),
        scan_step: None,
        mode: Mode::Paper,
    }
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let reports: Vec<CensusReport> = C9_PSI_SCALES
        .iter()
        .map(|&s| census_selberg_C(&HardyZ, &c9_params(s)).map_err(e))
        .collect::<Result<_, _>>()?;
    for w in reports.windows(2) {
        ensure(w[0].hits <= w[1].hits, || {
            format!("hits fell from {} to {} as psi grew", w[0].hits, w[1].hits)
        })?;
    }
    let p = c9_params(1.0);
    let grid = p.grid();
    let reach = grid.iter().map(|&t| p.psi.eval(t) / t.ln()).fold(0.0, f64::max);
    let zeros = zeros_in(C9_T, C9_T + C9_SPAN + 2.0 * reach, omega(C9_T).map_err(e)? / 8.0).map_err(e)?;
    let near = grid
        .iter()
        .filter(|&&t| {
            let i = zeros.partition_point(|z| z.root <= t);
            zeros.get(i).is_some_and(|z| z.root - t < p.psi.eval(t) / t.ln())
        })
        .count();
    let oracle = near as f64 / grid.len() as f64;
    let measured = reports[1].fraction;
    ensure((measured - oracle).abs() <= C9_TOL, || {
        format!("measured {measured:.4}, oracle {oracle:.4}")
    })?;
    Ok(format!(
        "measured {measured:.4} vs oracle {oracle:.4} on {} grid points ({} listed zeros); fractions over psi scales {:?} nondecreasing, {:.1?}",
        grid.len(),
        zeros.len(),
        reports.iter().map(|r| (r.fraction * 1e4).round() / 1e4).collect::<Vec<_>>(),
        start.elapsed()
    ))
}

/// n0, Theorem 1 over scales, G1 over shifts, Theorem 1 over shifts.
type Aggregates = (u64, Vec<u64>, Vec<u64>, Vec<u64>);

fn criterion_10() -> Outcome {
    let mut seen: Vec<Aggregates> = Vec::new();
    for &w in &C10_WORKERS {
        let n0 = c3_count(Some(w))?.hits;
        let c4 = c4_counts(Some(w))?;
        let (g1, th) = c5_reports(Some(w))?;
        let g1: Vec<u64> = g1.iter().map(|r| r.hits).collect();
        let th: Vec<u64> = th.iter().map(|r| r.hits).collect();
        seen.push((n0, c4, g1, th));
    }
    ensure(seen.windows(2).all(|w| w[0] == w[1]), || format!("aggregates differ: {seen:?}"))?;
    Ok(format!("workers {C10_WORKERS:?} agree: n0 {}, theorem1 scales {:?}, G1 {:?}, theorem1 tau {:?}", seen[0].0, seen[0].1, seen[0].2, seen[0].3))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (n, f) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match res {
            Ok(msg) => println!("criterion {n}: PASS ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL ({msg})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
