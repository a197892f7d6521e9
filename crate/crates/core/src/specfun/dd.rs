//! Double-double arithmetic (about 32 significant digits), used where a
//! finite sum is too ill-conditioned for plain `f64`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub(crate) fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn from_parts((hi, lo): (f64, f64)) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::from_parts((s1, s2 + t2))
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::from_parts((p, e + (self.hi * b.lo + self.lo * b.hi)))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        Dd::from_parts((q1, q2)) + Dd::new(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct CDd {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl CDd {
    pub(crate) fn new(re: Dd, im: Dd) -> Self {
        Self { re, im }
    }

    pub(crate) fn real(x: Dd) -> Self {
        Self { re: x, im: Dd::default() }
    }

    pub(crate) fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub(crate) fn norm_sq(self) -> Dd {
        self.re * self.re + self.im * self.im
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd::new(self.re + b.re, self.im + b.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd::new(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.norm_sq();
        let n = self * b.conj();
        CDd::new(n.re / d, n.im / d)
    }
}
