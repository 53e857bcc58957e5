// Certified sign changes of Z and the zero count over a window.

use gramgrid::census::n0_increment;
use gramgrid::gram::omega;
use gramgrid::hardy_z::{zeros_in, HardyZ};

pub fn run_example() -> gramgrid::Result<()> {
    let zeros = zeros_in(1000.0, 1010.0, 0.05)?;
    for z in &zeros {
        println!("zero in [{:.9}, {:.9}]", z.lo, z.hi);
    }
    let (t, u) = (1e6, 50.0);
    let step = omega(t)? / 4.0;
    let coarse = n0_increment(&HardyZ, t, u, step)?;
    let fine = n0_increment(&HardyZ, t, u, step / 2.0)?;
    println!(
        "[{t}, {}]: {} zeros at step {step:.4}, {} at half step; U ln(T/2pi)/2pi = {:.2}",
        t + u,
        coarse.hits,
        fine.hits,
        coarse.predicted_main_term_ln_t2pi
    );
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
