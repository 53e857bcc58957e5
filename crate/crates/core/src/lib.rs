//! Discrete Gram-lattice apparatus on the critical line.
//!
//! The crate evaluates the Riemann–Siegel phases, solves translated Gram
//! sequences θ₁(g_ν(τ)) = πν/2 + τ/2, samples Hardy's Z on the step-ω grids
//! anchored at those points and counts, with certified signs, the objects that
//! describe how zeros of odd order sit relative to the lattice: hit fractions
//! of short intervals, good segments, sign-preserving runs and the discrete
//! moments and exponential sums behind them.

pub mod asymptotics;
pub mod census;
pub mod cli;
pub mod error;
pub mod gram;
pub mod hardy_z;
pub mod mode;
mod mp;
pub mod parallel;
pub mod sum;
pub mod theta;

pub use error::{Error, Result};
pub use mode::Mode;

/// Version string stamped into every report.
pub const ENGINE_VERSION: &str = concat!("gramgrid ", env!("CARGO_PKG_VERSION"));
