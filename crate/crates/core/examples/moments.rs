// Discrete moments over step-ω sample blocks, with both phase variants.

use gramgrid::census::{moments, ThetaVariant};
use gramgrid::gram::GridSpec;
use gramgrid::hardy_z::HardyZ;
use gramgrid::Mode;

pub fn run_example() -> gramgrid::Result<()> {
    for (t, m) in [(1e5, 20), (4e5, 22)] {
        let spec = GridSpec::new(t, 200.0, m, 0.0, Mode::Paper)?;
        let r = moments(&HardyZ, &spec, ThetaVariant::Both)?;
        println!(
            "T = {t}, M = {m}: J/(M U ln^2 T) = {:.4}, N/(M U ln^2 T) = {:.4} (theta1) {:.4} (full)",
            r.normalized_j,
            r.normalized_n_theta1.unwrap_or(f64::NAN),
            r.normalized_n_theta_full.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
