// Translated Gram points g_ν(τ) and exact enumeration over a window.

use std::f64::consts::PI;

use gramgrid::asymptotics::predicted_gram_count;
use gramgrid::gram::{count_by_phase, gram_point, index_range, omega};

pub fn run_example() -> gramgrid::Result<()> {
    let nu = 1_000_000;
    for tau in [-PI, -PI / 2.0, 0.0, PI / 2.0, PI] {
        let g = gram_point(nu, tau)?;
        println!("g_{nu}({tau:+.4}) = {:.10}  residual {:+.1e}", g.t, g.residual);
    }
    // τ = π lands on the point two indices up at τ = −π.
    assert_eq!(gram_point(nu, PI)?.t, gram_point(nu + 2, -PI)?.t);

    let (t, u) = (1e6, 1e3);
    let r = index_range(t, u, 0.0)?;
    let p = predicted_gram_count(t, u);
    println!(
        "[{t}, {}]: first index {}, {} points (phase formula {}), U ln T/pi = {:.1}, U ln(T/2pi)/pi = {:.1}",
        t + u,
        r.nu_first,
        r.count,
        count_by_phase(t, u, 0.0),
        p.value,
        p.value_ln_t2pi
    );
    println!("omega(T) = {:.6}", omega(t)?);
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
