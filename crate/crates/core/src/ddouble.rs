//! Minimal double-double arithmetic (about 106 significant bits).
//!
//! Only what Horner evaluation needs: addition and multiplication, real and
//! complex. Error-free transformations follow Dekker and Knuth; products use
//! a fused multiply-add.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

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
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        // The remainder is exact in BigInt; only its own rounding is lost.
        let rest = n - BigInt::from_f64_exact(hi);
        Dd {
            hi,
            lo: rest.to_f64().unwrap_or(0.0),
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

trait FromF64Exact {
    fn from_f64_exact(x: f64) -> Self;
}

impl FromF64Exact for BigInt {
    fn from_f64_exact(x: f64) -> Self {
        num_traits::FromPrimitive::from_f64(x).expect("finite f64")
    }
}

impl Add for Dd {
    type Output = Dd;

    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;

    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;

    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn from_c64(z: Complex64) -> Self {
        CDd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn mul(self, b: CDd) -> CDd {
        CDd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }

    #[inline]
    pub fn add_real(self, b: Dd) -> CDd {
        CDd {
            re: self.re + b,
            im: self.im,
        }
    }

    #[inline]
    pub fn add(self, b: CDd) -> CDd {
        CDd {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

/// Horner evaluation of `p` and `p'` at `z` in double-double.
pub(crate) fn horner_with_derivative(coeffs: &[Dd], z: Complex64) -> (Complex64, Complex64) {
    let z = CDd::from_c64(z);
    let mut p = CDd::default();
    let mut dp = CDd::default();
    for &c in coeffs.iter().rev() {
        dp = dp.mul(z).add(p);
        p = p.mul(z).add_real(c);
    }
    (p.to_c64(), dp.to_c64())
}
