// The double exponential sums over a Gram window.

use gramgrid::census::exp_sums;

pub fn run_example() -> gramgrid::Result<()> {
    let m = 2;
    for k in 0..=m {
        for l in 0..=m {
            let r = exp_sums(1e4, 50.0, 0.0, m, k, l)?;
            println!(
                "(k, l) = ({k}, {l}): S1 = {:+12.6}  S2 = {:+10.6}  normalized {:.2e} / {:.2e}",
                r.s1, r.s2, r.normalized_s1, r.normalized_s2
            );
        }
    }
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
