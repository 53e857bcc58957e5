// The geometric spacing predictor against directly solved Gram points.

use gramgrid::gram::{d_closed, index_range, spacing_check, SpacingModel};

pub fn run_example() -> gramgrid::Result<()> {
    let (t, u) = (1e6, 1e3);
    let range = index_range(t, u, 0.0)?;
    let model = SpacingModel::new(t, &range)?;
    println!(
        "omega_bar0 = {:.12}, Q = {:.6e}, N1 = {}, D(N1 - 1) = {:.6}",
        model.omega_bar0,
        model.q,
        model.n1,
        d_closed(model.n1 - 1, model.q)
    );
    let c = spacing_check(t, u, 0.0)?;
    println!(
        "max error vs g(nu1 + p) = {:.3e}, vs g(nu1 + p + 1) = {:.3e}",
        c.max_error, c.max_error_next_index
    );
    println!(
        "envelope U^3/(T^2 ln T) = {:.3e}, ratio {:.3}, growth exponent {:.3}",
        c.envelope, c.ratio, c.fit_exponent
    );
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
