//! Scaled Chebyshev polynomials of the second kind and the family `Z_n`.
//!
//! `P_n` is the Chebyshev polynomial of the second kind scaled to `(-2, 2)`:
//! `P_0 = 1`, `P_1 = x`, `P_n = x P_{n-1} - P_{n-2}`. `Z_n` is the
//! characteristic polynomial of the tridiagonal matrix with diagonal
//! `(2, …, 2, 1)` and `-1` off the diagonal: `Z_0 = 1`, `Z_1 = x - 1`,
//! `Z_n = (x - 2) Z_{n-1} - Z_{n-2}`. They are tied by `Z_n(x²) = P_{2n}(x)`,
//! so every root of `Z_n` has the form `4 cos² φ`.
//!
//! Characteristic polynomials of ring digraphs are products of `Z`'s shifted
//! by `±1`; [`classify_product_real`] decides exactly when such a shifted
//! product (in the `P_{2i}` form) has only real roots.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::poly::IntPolynomial;
use crate::{Error, Result};

/// `P_n`, built by the three-term recurrence.
pub fn cheb_u(n: usize) -> IntPolynomial {
    let x = IntPolynomial::x();
    let (mut prev, mut cur) = (IntPolynomial::one(), x.clone());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `Z_n`, built by the three-term recurrence.
pub fn z_poly(n: usize) -> IntPolynomial {
    let x_minus_2 = IntPolynomial::from_i64(&[-2, 1]);
    let (mut prev, mut cur) = (IntPolynomial::one(), IntPolynomial::from_i64(&[-1, 1]));
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&x_minus_2 * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Values `Z_0(x), …, Z_n(x)` by the recurrence in `f64`.
///
/// On `[0, 4]` the recurrence is in its oscillatory regime and the rounding
/// error grows only polynomially in `n`, unlike Horner on the expanded form.
pub fn z_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x - 1.0);
    }
    for k in 2..=n {
        out.push((x - 2.0) * out[k - 1] - out[k - 2]);
    }
    out
}

pub fn poly_mul(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    a * b
}

pub fn poly_shift_const(p: &IntPolynomial, c: i64) -> IntPolynomial {
    p.add_const(c)
}

/// Exact-then-rounded evaluation; see [`IntPolynomial::eval_real`].
pub fn eval_real(p: &IntPolynomial, x: f64) -> f64 {
    p.eval_real(x)
}

/// `∏ Z_{k}` over the given indices.
pub fn z_product(ks: &[usize]) -> IntPolynomial {
    ks.iter()
        .fold(IntPolynomial::one(), |acc, &k| &acc * &z_poly(k))
}

/// `∏ P_{2 i_k}(x) + (-1)^p`, the polynomial judged by [`classify_product_real`].
pub fn chebyshev_product_shifted(ks: &[usize], p: u8) -> IntPolynomial {
    ks.iter()
        .fold(IntPolynomial::one(), |acc, &k| &acc * &cheb_u(2 * k))
        .add_const(sign_pow(p))
}

fn sign_pow(p: impl Into<u64>) -> i64 {
    if p.into() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn cos2(angle: f64) -> f64 {
    let c = angle.cos();
    4.0 * c * c
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Roots `2 cos(πk/(n+1))`, `k = 1..n`, of `P_n`, ascending.
pub fn cheb_roots(n: usize) -> Vec<f64> {
    sorted(
        (1..=n)
            .map(|k| 2.0 * (PI * k as f64 / (n + 1) as f64).cos())
            .collect(),
    )
}

/// Roots `4 cos²(πk/(2n+1))`, `k = 1..n`, of `Z_n`, ascending.
pub fn z_roots(n: usize) -> Vec<f64> {
    sorted(
        (1..=n)
            .map(|k| cos2(PI * k as f64 / (2 * n + 1) as f64))
            .collect(),
    )
}

fn check_parity(p: u8) -> Result<()> {
    if p > 1 {
        return Err(Error::InvalidArgument(format!("p must be 0 or 1, got {p}")));
    }
    Ok(())
}

/// Roots of `Z_n + (-1)^p`: `4 cos²(πk / (2n + 1 + (-1)^{k+p}))`, `k = 1..n`,
/// sorted ascending.
pub fn lemma3_roots(n: usize, p: u8) -> Result<Vec<f64>> {
    check_parity(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(sorted(
        (1..=n)
            .map(|k| {
                let denom = (2 * n + 1) as i64 + sign_pow(k as u64 + u64::from(p));
                cos2(PI * k as f64 / denom as f64)
            })
            .collect(),
    ))
}

/// Smallest and second-smallest roots of `Z_m` and of `Z_m + (-1)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandmarkRoots {
    pub m: usize,
    pub x1: f64,
    pub x2: Option<f64>,
    pub u1: f64,
    pub u2: Option<f64>,
}

/// Landmark roots for `m ≥ 1`; the second-smallest ones exist only for `m > 1`.
pub fn landmark_roots(m: usize) -> Result<LandmarkRoots> {
    if m == 0 {
        return Err(Error::InvalidArgument("landmark roots need m ≥ 1".into()));
    }
    let mf = m as f64;
    let second = |v: f64| (m > 1).then_some(v);
    Ok(LandmarkRoots {
        m,
        x1: cos2(PI * mf / (2.0 * mf + 1.0)),
        x2: second(cos2(PI * (mf - 1.0) / (2.0 * mf + 1.0))),
        u1: cos2(PI * mf / (2.0 * mf + 2.0)),
        u2: second(cos2(PI * (mf - 1.0) / (2.0 * mf))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductCase {
    SingleFactor,
    EqualPair,
    AdjacentPair,
    NonReal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRootVerdict {
    pub all_real: bool,
    pub case_label: ProductCase,
    /// Closed-form roots, ascending with multiplicity; present iff `all_real`.
    pub roots: Option<Vec<f64>>,
}

fn plus_minus(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    sorted(values.into_iter().flat_map(|v| [v, -v]).collect())
}

/// Decides whether `∏ P_{2 i_k}(x) + (-1)^p` has only real roots.
///
/// Real-rooted exactly when there is one factor, when there are two equal
/// factors and `p = 1`, or when there are two factors differing by one and
/// `p = 0`. Every other configuration has a conjugate pair.
pub fn classify_product_real(ks: &[usize], p: u8) -> Result<RealRootVerdict> {
    check_parity(p)?;
    if ks.is_empty() {
        return Err(Error::InvalidArgument("factor list is empty".into()));
    }
    if ks.contains(&0) {
        return Err(Error::InvalidArgument("factor indices must be positive".into()));
    }
    let verdict = |case_label, roots: Vec<f64>| RealRootVerdict {
        all_real: true,
        case_label,
        roots: Some(roots),
    };
    match *ks {
        [j] => {
            let roots = (1..=j).map(|k| {
                let denom = (2 * j + 1) as i64 + sign_pow(k as u64 + u64::from(p));
                2.0 * (PI * k as f64 / denom as f64).cos()
            });
            Ok(verdict(ProductCase::SingleFactor, plus_minus(roots)))
        }
        [a, b] if a == b && p == 1 => {
            let j = a as f64;
            let roots = (1..=a).flat_map(|k| {
                let k = k as f64;
                [
                    2.0 * (PI * k / (2.0 * j)).cos(),
                    2.0 * (PI * k / (2.0 * j + 2.0)).cos(),
                ]
            });
            Ok(verdict(ProductCase::EqualPair, plus_minus(roots)))
        }
        [a, b] if a.abs_diff(b) == 1 && p == 0 => {
            let j = a.max(b);
            let roots =
                (1..2 * j).map(|k| 2.0 * (PI * k as f64 / (2 * j) as f64).cos());
            Ok(verdict(ProductCase::AdjacentPair, plus_minus(roots)))
        }
        _ => Ok(RealRootVerdict {
            all_real: false,
            case_label: ProductCase::NonReal,
            roots: None,
        }),
    }
}

/// Third-smallest root, counted with multiplicity, of `∏ Z_{i_k}`.
///
/// On `(0, x₃]` the product stays strictly inside `(-1, 1)`, which is what
/// forces a conjugate pair in the product shifted by `±1`. Valid for two
/// factors whose indices differ by more than one, and for any three or more.
pub fn product_bound_witness(ks: &[usize]) -> Result<f64> {
    if ks.contains(&0) {
        return Err(Error::InvalidArgument("factor indices must be positive".into()));
    }
    match *ks {
        [] | [_] => {
            return Err(Error::InvalidArgument(
                "the bound needs at least two factors".into(),
            ))
        }
        [a, b] if a.abs_diff(b) <= 1 => {
            return Err(Error::InvalidArgument(format!(
                "factors {a} and {b} differ by at most one; the bound does not hold"
            )))
        }
        _ => {}
    }
    let merged = sorted(ks.iter().flat_map(|&k| z_roots(k)).collect());
    Ok(merged[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(cheb_u(0), p(&[1]));
        assert_eq!(cheb_u(1), p(&[0, 1]));
        assert_eq!(cheb_u(2), p(&[-1, 0, 1]));
        assert_eq!(cheb_u(3), p(&[0, -2, 0, 1]));
    }

    #[test]
    fn z_small_cases() {
        assert_eq!(z_poly(0), p(&[1]));
        assert_eq!(z_poly(1), p(&[-1, 1]));
        assert_eq!(z_poly(2), p(&[1, -3, 1]));
        assert_eq!(z_poly(3), p(&[-1, 6, -5, 1]));
        for n in 0..30 {
            let expect = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(z_poly(n).coeff(0), BigInt::from(expect));
        }
    }

    #[test]
    fn product_of_z1_z2() {
        assert_eq!(poly_mul(&z_poly(1), &z_poly(2)), p(&[-1, 4, -4, 1]));
        assert_eq!(poly_shift_const(&z_poly(2), -1), p(&[0, -3, 1]));
    }

    #[test]
    fn named_evaluations() {
        for n in 0..40 {
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(eval_real(&z_poly(n), 0.0), expect);
            assert_eq!(eval_real(&cheb_u(n), 2.0), (n + 1) as f64);
        }
        assert_eq!(eval_real(&cheb_u(3), 0.0), 0.0);
    }

    #[test]
    fn recurrence_values_match_polynomials() {
        for &x in &[0.0, 0.37, 1.0, 2.5, 3.99] {
            let vals = z_values(20, x);
            for (n, v) in vals.iter().enumerate() {
                let exact = z_poly(n).eval_real(x);
                assert!((v - exact).abs() < 1e-11, "n={n} x={x}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn lemma3_examples() {
        assert_eq!(lemma3_roots(1, 1).unwrap(), vec![cos2(PI / 4.0)]);
        assert!((lemma3_roots(1, 1).unwrap()[0] - 2.0).abs() < 1e-15);
        assert_eq!(lemma3_roots(1, 0).unwrap(), vec![cos2(PI / 2.0)]);
        let r = lemma3_roots(3, 0).unwrap();
        for (got, want) in r.iter().zip([0.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(lemma3_roots(0, 0).is_err());
        assert!(lemma3_roots(2, 2).is_err());
    }

    #[test]
    fn landmark_examples() {
        let l = landmark_roots(2).unwrap();
        assert!((l.x1 - 0.381_966_011_250_105).abs() < 1e-12);
        assert!((l.x2.unwrap() - 2.618_033_988_749_895).abs() < 1e-12);
        assert!((l.u1 - 1.0).abs() < 1e-14);
        let one = landmark_roots(1).unwrap();
        assert_eq!((one.x2, one.u2), (None, None));
        assert!((one.u1 - 2.0).abs() < 1e-14);
        assert!(landmark_roots(0).is_err());
        for m in 1..30 {
            let l = landmark_roots(m).unwrap();
            assert!(z_poly(m).eval_real(l.x1).abs() < 1e-12);
            let shifted = z_poly(m).add_const(sign_pow(m as u64));
            assert!(shifted.eval_real(l.u1).abs() < 1e-12);
            if let (Some(x2), Some(u2)) = (l.x2, l.u2) {
                assert!(l.x1 < x2 && l.u1 < u2);
                assert!(z_poly(m).eval_real(x2).abs() < 1e-10);
                assert!(shifted.eval_real(u2).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn theorem5_cases() {
        for j in 1..6 {
            for par in 0..2 {
                let v = classify_product_real(&[j], par).unwrap();
                assert!(v.all_real);
                assert_eq!(v.case_label, ProductCase::SingleFactor);
                assert_eq!(v.roots.unwrap().len(), 2 * j);
            }
        }
        let v = classify_product_real(&[2, 2], 0).unwrap();
        assert_eq!(v.case_label, ProductCase::NonReal);
        assert!(v.roots.is_none());
        assert!(!classify_product_real(&[1, 3], 0).unwrap().all_real);
        assert!(!classify_product_real(&[1, 2], 1).unwrap().all_real);
        assert!(!classify_product_real(&[1, 1, 1], 1).unwrap().all_real);
        let eq = classify_product_real(&[3, 3], 1).unwrap();
        assert_eq!(eq.case_label, ProductCase::EqualPair);
        assert_eq!(eq.roots.unwrap().len(), 12);
        let adj = classify_product_real(&[3, 2], 0).unwrap();
        assert_eq!(adj.case_label, ProductCase::AdjacentPair);
        let roots = adj.roots.unwrap();
        assert_eq!(roots.len(), 10);
        assert!(roots.iter().all(|r| r.abs() < 2.0));
        assert!(roots.windows(2).all(|w| w[0] <= w[1]));
        assert!(classify_product_real(&[], 0).is_err());
        assert!(classify_product_real(&[0, 2], 0).is_err());
    }

    #[test]
    fn closed_form_roots_annihilate_the_product() {
        for (ks, par) in [(vec![4], 0), (vec![4], 1), (vec![3, 3], 1), (vec![4, 5], 0)] {
            let poly = chebyshev_product_shifted(&ks, par);
            let roots = classify_product_real(&ks, par).unwrap().roots.unwrap();
            assert_eq!(roots.len(), poly.degree());
            for r in roots {
                assert!(poly.eval_real(r).abs() < 1e-9, "{ks:?} p={par} r={r}");
            }
        }
    }

    #[test]
    fn witness_examples() {
        let w = product_bound_witness(&[1, 3]).unwrap();
        assert!((w - cos2(2.0 * PI / 7.0)).abs() < 1e-14);
        assert!((w - 1.554_958).abs() < 1e-6);
        assert!((product_bound_witness(&[1, 1, 1]).unwrap() - 1.0).abs() < 1e-14);
        let merged = sorted([z_roots(2), z_roots(2), z_roots(3)].concat());
        assert_eq!(product_bound_witness(&[2, 2, 3]).unwrap(), merged[2]);
        assert!(product_bound_witness(&[2, 3]).is_err());
        assert!(product_bound_witness(&[2, 2]).is_err());
        assert!(product_bound_witness(&[4]).is_err());
    }
}
