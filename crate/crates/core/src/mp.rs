//! Minimal multiprecision complex arithmetic on top of `astro-float`, used by
//! the Euler–Maclaurin oracle.

use std::sync::OnceLock;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) struct Ctx {
    pub p: usize,
    pub cc: Consts,
}

impl Ctx {
    pub fn new(p: usize) -> Self {
        Ctx {
            p,
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn u(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.p)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.p, RM, &mut self.cc)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.p, RM, &mut self.cc)
    }

    pub fn atan(&mut self, a: &BigFloat) -> BigFloat {
        a.atan(self.p, RM, &mut self.cc)
    }

    pub fn rational(&mut self, r: &BigRational) -> BigFloat {
        let n = self.parse_int(r.numer());
        let d = self.parse_int(r.denom());
        self.div(&n, &d)
    }

    fn parse_int(&mut self, i: &BigInt) -> BigFloat {
        BigFloat::parse(&i.to_string(), Radix::Dec, self.p, RM, &mut self.cc)
    }

    pub fn cadd(&self, a: &Cplx, b: &Cplx) -> Cplx {
        Cplx {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn cmul(&self, a: &Cplx, b: &Cplx) -> Cplx {
        Cplx {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }

    pub fn cscale(&self, a: &Cplx, s: &BigFloat) -> Cplx {
        Cplx {
            re: self.mul(&a.re, s),
            im: self.mul(&a.im, s),
        }
    }

    pub fn cdiv(&self, a: &Cplx, b: &Cplx) -> Cplx {
        let den = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let re = self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im));
        Cplx {
            re: self.div(&re, &den),
            im: self.div(&im, &den),
        }
    }

    pub fn cabs(&self, a: &Cplx) -> BigFloat {
        self.sqrt(&self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im)))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Cplx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Cplx {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Cplx { re, im }
    }
}

pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    format!("{x}").parse::<f64>().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits.
pub(crate) fn to_decimal(x: &BigFloat, digits: usize) -> String {
    let s = format!("{x}");
    // astro-float prints "d.ddddde±x"; trim the mantissa.
    match s.split_once('e') {
        Some((mant, exp)) => {
            let keep = digits + 1 + usize::from(mant.starts_with('-'));
            let mant = if mant.len() > keep { &mant[..keep] } else { mant };
            format!("{mant}e{exp}")
        }
        None => s,
    }
}

const BERNOULLI_MAX: usize = 260;

/// Exact Bernoulli numbers B_0..=B_260 (B_1 = −1/2).
pub(crate) fn bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_MAX + 1);
        b.push(BigRational::one());
        for m in 1..=BERNOULLI_MAX {
            if m > 1 && m % 2 == 1 {
                b.push(BigRational::zero());
                continue;
            }
            // Σ_{k=0}^{m} C(m+1, k) B_k = 0
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    acc += BigRational::from_integer(binom.clone()) * bk;
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Largest even index available from [`bernoulli`].
pub(crate) const BERNOULLI_MAX_EVEN: usize = BERNOULLI_MAX;
