// Riemann–Siegel against the Euler–Maclaurin oracle.

use gramgrid::hardy_z::{sign_at, z_em, z_rs};

pub fn run_example() -> gramgrid::Result<()> {
    for t in [250.0, 1000.0, 4321.5] {
        let rs = z_rs(t)?;
        let em = z_em(t, 30)?;
        println!(
            "Z({t}) rs = {:+.12} (err {:.1e}, {} terms)  em = {}  diff {:.1e}",
            rs.value,
            rs.err,
            rs.terms,
            em.decimal,
            (rs.value - em.value).abs()
        );
    }
    let s = sign_at(1e9);
    println!("Z(1e9) = {:+.6} +/- {:.1e}: {:?}", s.z, s.err, s.sign);
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
