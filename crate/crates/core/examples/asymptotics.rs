// Main terms, the H1 window and a verdict for a measured count.

use gramgrid::asymptotics::{compare, h1_window, karatsuba_exponent_U, predicted_zero_count, U_of};
use gramgrid::census::{n0_increment, PsiFunction};
use gramgrid::gram::omega;
use gramgrid::hardy_z::HardyZ;

pub fn run_example() -> gramgrid::Result<()> {
    let t = 1e6;
    println!("U(T) with psi = lnlnln: {:.4e}", U_of(t, &PsiFunction::default_psi())?);
    println!("T^(27/82 + 0.05) = {:.4e}", karatsuba_exponent_U(t, 0.05)?);
    let w = h1_window(t, 0.1)?;
    println!(
        "H1 in [{:.3}, {:.3}] -> H in [{:.3}, {:.3}]; required [{:.3}, {:.3}]",
        w.h1_bounds.0, w.h1_bounds.1, w.h_from_h1.0, w.h_from_h1.1, w.h_bounds.0, w.h_bounds.1
    );
    let u = 100.0;
    let r = n0_increment(&HardyZ, t, u, omega(t)? / 4.0)?;
    let mut p = predicted_zero_count(t, u);
    let v = compare(&r, &p, 0.2)?;
    println!("zeros {} vs U ln T/2pi {:.2}: ratio {:.3}, pass {}", r.hits, p.value, v.ratio, v.pass);
    p.value = p.value_ln_t2pi;
    let v = compare(&r, &p, 0.05)?;
    println!("zeros {} vs U ln(T/2pi)/2pi {:.2}: ratio {:.3}, pass {}", r.hits, p.value, v.ratio, v.pass);
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
