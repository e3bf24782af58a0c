//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Coefficients are stored ascending by power. Besides the usual ring
//! operations this module offers three evaluation routes of increasing cost:
//! plain `f64` Horner ([`IntPolynomial::eval_horner`]), double-double Horner
//! (crate-internal, used by the root finder) and exact evaluation at the
//! dyadic rational represented by an `f64` ([`IntPolynomial::eval_real`],
//! [`IntPolynomial::eval_complex`]), which rounds only once at the end.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming leading zeros.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::zero()],
        }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64(&[c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(BigInt::zero());
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// Degree; the zero polynomial and nonzero constants both report 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("normalized polynomial is never empty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// `self + c`.
    pub fn add_const(&self, c: i64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(x²)`.
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![BigInt::zero(); 2 * self.coeffs.len() - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        Self::new(coeffs)
    }

    /// The polynomial `q` with `q(x²) = self(x)`, if `self` has only even powers.
    pub fn halve_exponents(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Plain floating-point Horner evaluation.
    pub fn eval_horner(&self, x: f64) -> f64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value at `x` computed exactly and rounded once.
    ///
    /// Every finite `f64` is a dyadic rational `m·2^e`, so the polynomial can
    /// be evaluated without any intermediate rounding. This is what makes the
    /// root formulas checkable at high degree, where Horner in `f64` loses
    /// every significant digit to cancellation.
    pub fn eval_real(&self, x: f64) -> f64 {
        if !x.is_finite() {
            return self.eval_horner(x);
        }
        let (m, e) = dyadic(x);
        if e >= 0 {
            return self.eval_int(&(m << e as usize)).to_f64().unwrap_or(f64::NAN);
        }
        let s = (-e) as usize;
        let d = self.degree();
        let mut acc = self.coeffs[d].clone();
        for i in (0..d).rev() {
            acc = acc * &m + (&self.coeffs[i] << (s * (d - i)));
        }
        scaled_to_f64(&acc, -((s * d) as i64))
    }

    /// Complex counterpart of [`eval_real`](Self::eval_real).
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        let (mr, er) = dyadic(z.re);
        let (mi, ei) = dyadic(z.im);
        let e = er.min(ei);
        let mut re = mr << (er - e) as usize;
        let mut im = mi << (ei - e) as usize;
        let s = if e >= 0 {
            re <<= e as usize;
            im <<= e as usize;
            0
        } else {
            (-e) as usize
        };
        let d = self.degree();
        let mut ar = self.coeffs[d].clone();
        let mut ai = BigInt::zero();
        for i in (0..d).rev() {
            let nr = &ar * &re - &ai * &im;
            let ni = &ar * &im + &ai * &re;
            ar = nr + (&self.coeffs[i] << (s * (d - i)));
            ai = ni;
        }
        let scale = -((s * d) as i64);
        Complex64::new(scaled_to_f64(&ar, scale), scaled_to_f64(&ai, scale))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Sum of absolute coefficient values.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    pub(crate) fn to_dd_coeffs(&self) -> Vec<crate::ddouble::Dd> {
        self.coeffs.iter().map(crate::ddouble::Dd::from_bigint).collect()
    }
}

/// Splits a finite `x` into `(m, e)` with `x = m·2^e` and `m` odd (or zero).
fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (mut mantissa, mut exp, sign) = x.integer_decode();
    let tz = mantissa.trailing_zeros();
    mantissa >>= tz;
    exp += tz as i16;
    let m = BigInt::from(mantissa);
    (if sign < 0 { -m } else { m }, i64::from(exp))
}

/// `n·2^exp2` rounded to the nearest representable `f64` (within one ulp).
pub(crate) fn scaled_to_f64(n: &BigInt, exp2: i64) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift as usize).to_f64().unwrap_or(f64::NAN);
    ldexp(top, exp2 + shift as i64)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP as i32);
        e -= STEP;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP as i32);
        e += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{abs}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}
