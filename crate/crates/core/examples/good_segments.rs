// Non-intersecting good segments for both lattice definitions.

use std::f64::consts::PI;

use gramgrid::census::{good_segments_G1, good_segments_G3, G1Params, G3Params};
use gramgrid::hardy_z::HardyZ;
use gramgrid::Mode;

pub fn run_example() -> gramgrid::Result<()> {
    for tau in [-PI, 0.0, PI] {
        let (r, segs) = good_segments_G1(&HardyZ, &G1Params { t: 1e6, u: 100.0, delta: 1.5, tau })?;
        println!(
            "G1 tau = {tau:+.4}: {} segments over {} points, first at {:.4}",
            r.hits,
            r.total,
            segs.first().map_or(f64::NAN, |s| s.start)
        );
    }
    for t in [1e5, 1e6] {
        let p = G3Params {
            t,
            u: 100.0,
            h1: None,
            tau: 0.0,
            epsilon: 0.1,
            mode: Mode::Exploration,
        };
        let (r, _) = good_segments_G3(&HardyZ, &p)?;
        println!("G3 T = {t}: {} segments, G3/(U ln T) = {:.4}, {}", r.hits, r.ratio, r.params);
    }
    Ok(())
}

fn main() -> gramgrid::Result<()> {
    run_example()
}
