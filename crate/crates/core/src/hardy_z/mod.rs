//! Hardy's Z function: two independent engines, error-aware signs and
//! certified sign-change zero location.

pub(crate) mod ddouble;
mod em;
mod rs;
mod scan;

pub use em::{z_em, OracleZ, EM_MAX_DIGITS, EM_MAX_T, EM_MIN_DIGITS};
pub use rs::{z_rs, RsValue, DD_THRESHOLD, RS_MIN_T};
pub use scan::{
    first_zero_after, scan_zeros, zeros_in, FirstZero, ScanOptions, ZeroBracket, ZeroScan,
};

use serde::{Deserialize, Serialize};

/// Tri-state sign of a sampled Z value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
    Uncertain,
}

impl Sign {
    pub fn is_certain(self) -> bool {
        self != Sign::Uncertain
    }

    /// True when both signs are certain and differ.
    pub fn opposes(self, other: Sign) -> bool {
        matches!(
            (self, other),
            (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignSample {
    pub t: f64,
    pub z: f64,
    pub err: f64,
    pub sign: Sign,
}

impl SignSample {
    pub fn new(t: f64, z: f64, err: f64) -> Self {
        let sign = if z > err {
            Sign::Positive
        } else if z < -err {
            Sign::Negative
        } else {
            Sign::Uncertain
        };
        SignSample { t, z, err, sign }
    }
}

/// Anything that can be sampled for the sign of Z. The census operations are
/// generic over this so synthetic sign patterns can drive them in tests.
pub trait ZSource: Sync {
    fn sample(&self, t: f64) -> SignSample;
}

impl<F> ZSource for F
where
    F: Fn(f64) -> SignSample + Sync,
{
    fn sample(&self, t: f64) -> SignSample {
        self(t)
    }
}

/// Digits used when `sign_at` must fall back to the oracle below t = 200.
pub const LOW_HEIGHT_DIGITS: u32 = 20;

/// The production Z engine: Riemann–Siegel from t = 200, Euler–Maclaurin below.
#[derive(Debug, Clone, Copy, Default)]
pub struct HardyZ;

impl ZSource for HardyZ {
    fn sample(&self, t: f64) -> SignSample {
        sign_at(t)
    }
}

/// Sample Z(t) with its error envelope and classify the sign.
pub fn sign_at(t: f64) -> SignSample {
    if t >= RS_MIN_T {
        let v = rs::z_rs_unchecked(t);
        return SignSample::new(t, v.value, v.err);
    }
    match z_em(t, LOW_HEIGHT_DIGITS) {
        // imag_residual is part of the oracle's own envelope
        Ok(o) => SignSample::new(t, o.value, o.error_bound + o.imag_residual + f64::EPSILON * o.value.abs()),
        Err(_) => SignSample {
            t,
            z: f64::NAN,
            err: f64::INFINITY,
            sign: Sign::Uncertain,
        },
    }
}
