// Hit fractions of (g_ν, g_ν + ψ̄) across ψ̄ scales, and a partitioned run.

use std::f64::consts::TAU;

use gramgrid::census::{census_theorem1, census_theorem1_range, PsiFunction, PsiKind, Theorem1Params};
use gramgrid::hardy_z::HardyZ;
use gramgrid::parallel::with_workers;

pub fn run_example() -> gramgrid::Result<()> {
    let t = 1e6;
    let spacing = TAU / (t / TAU).ln();
    let mut p = Theorem1Params::new(t, 0.0);
    p.u_override = Some(100.0);
    for scale in [0.5, 1.0, 2.0, 4.0] {
        p.psi_bar = PsiFunction::psi_bar(PsiKind::Const(scale * spacing));
        let r = census_theorem1(&HardyZ, &p)?;
        println!(
            "psi_bar = {scale} x mean spacing: {}/{} hits ({:.4}), ratio to U ln T/pi {:.3}",
            r.hits, r.total, r.fraction, r.ratio
        );
    }
    let (_, _, range) = p.window()?;
    let half = range.count / 2;
    let a = with_workers(Some(1), || census_theorem1_range(&HardyZ, &p, &range.slice(0, half)))??;
    let b = with_workers(Some(4), || census_theorem1_range(&HardyZ, &p, &range.slice(half, range.count)))??;
    let merged = a.merge(&b)?;
    assert_eq!(merged, census_theorem1(&HardyZ, &p)?);
    println!("two halves merge to {} hits", merged.hits);
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
