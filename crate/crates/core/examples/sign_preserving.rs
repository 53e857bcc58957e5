// Gram points whose step-ω sample runs keep one sign.

use gramgrid::census::count_sign_preserving_R;
use gramgrid::gram::GridSpec;
use gramgrid::hardy_z::HardyZ;
use gramgrid::Mode;

pub fn run_example() -> gramgrid::Result<()> {
    for m in [1, 2, 4, 8, 16] {
        let spec = GridSpec::new(1e6, 100.0, m, 0.0, Mode::Exploration)?;
        let r = count_sign_preserving_R(&HardyZ, &spec)?;
        println!("M = {m:>2}: R = {:>3} of {}, R M/(U ln^2 T) = {:.4}", r.hits, r.total, r.ratio);
    }
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
