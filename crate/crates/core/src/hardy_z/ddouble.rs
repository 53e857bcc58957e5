//! Double-double arithmetic for reducing large phases modulo 2π.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };
const TAU: Dd = Dd { hi: std::f64::consts::TAU, lo: 2.4492935982947064e-16 };
const LN_2PI_PLUS_1: Dd = Dd { hi: 2.8378770664093453, lo: 1.4447872176368647e-16 };
const PI_8: Dd = Dd { hi: std::f64::consts::FRAC_PI_8, lo: 1.5308084989341915e-17 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }
}

/// ln x in double-double for finite x > 0.
pub(crate) fn ln(x: f64) -> Dd {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut e = x.log2().floor() as i32;
    let mut m = x / 2f64.powi(e);
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    // m ∈ (1/√2, √2]; ln m = 2 atanh((m − 1)/(m + 1)), |u| < 0.172.
    let u = Dd::from_f64(m - 1.0).div(Dd::from_f64(m + 1.0));
    let u2 = u.mul(u);
    let mut term = u;
    let mut acc = u;
    let mut k = 3.0;
    while term.hi.abs() > 1e-34 {
        term = term.mul(u2);
        acc = acc.add(term.div(Dd::from_f64(k)));
        k += 2.0;
    }
    acc.mul_f64(2.0).add(LN2.mul_f64(e as f64))
}

/// Reduce a double-double angle into [−π, π] and round to f64.
pub(crate) fn reduce_tau(x: Dd) -> f64 {
    let k = (x.hi / TAU.hi).round();
    x.sub(TAU.mul_f64(k)).to_f64()
}

/// θ₁(t) in double-double: (t/2)(ln t − ln 2π − 1) − π/8.
pub(crate) fn theta1(t: f64) -> Dd {
    ln(t).sub(LN_2PI_PLUS_1).mul_f64(t).mul_f64(0.5).sub(PI_8)
}
