// The phase θ₁(t) and its inverse, next to the full Riemann–Siegel θ.

use gramgrid::theta::{theta1, theta1_inverse, theta_full};

pub fn run_example() -> gramgrid::Result<()> {
    for t in [10.0, 100.0, 1e4, 1e6] {
        let full = theta_full(t)?;
        println!(
            "t = {t:>9}: theta1 = {:>20.12}  theta = {:>20.12}  (+/- {:.1e})",
            theta1(t)?,
            full.value,
            full.error_bound
        );
    }
    let y = 1e6;
    let t = theta1_inverse(y)?;
    println!("theta1^-1({y}) = {t:.9}, residual {:.2e}", theta1(t)? - y);
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
