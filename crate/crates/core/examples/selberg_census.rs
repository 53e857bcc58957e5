// Short intervals (t, t + ψ(t)/ln t) on a grid over t.

use gramgrid::census::{census_selberg_C, PsiFunction, PsiKind, SelbergParams};
use gramgrid::hardy_z::HardyZ;
use gramgrid::Mode;

pub fn run_example() -> gramgrid::Result<()> {
    for c in [0.5, 1.0] {
        let p = SelbergParams {
            t: 1e6,
            epsilon: 0.1,
            psi: PsiFunction::psi(PsiKind::PowLog { a: 0.5, c }),
            grid_step: 0.05,
            span_override: Some(100.0),
            scan_step: None,
            mode: Mode::Paper,
        };
        let r = census_selberg_C(&HardyZ, &p)?;
        println!("psi = {c} sqrt(ln t): fraction {:.4} of {} grid points", r.fraction, r.total);
    }
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
