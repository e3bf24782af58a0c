//! Small dense square matrices and fraction-free determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Row-major `n × n` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type IntMatrix = SquareMatrix<i64>;
pub type RealMatrix = SquareMatrix<f64>;

impl<T: Clone + Default> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![T::default(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(SquareMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// The matrix with row `skip_row` and column `skip_col` removed.
    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let m = self.n - 1;
        let mut data = Vec::with_capacity(m * m);
        for i in (0..self.n).filter(|&i| i != skip_row) {
            for j in (0..self.n).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        SquareMatrix { n: m, data }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl IntMatrix {
    pub fn to_real(&self) -> RealMatrix {
        self.map(|&v| v as f64)
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self.map(|&v| BigInt::from(v)))
    }
}

impl RealMatrix {
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Bareiss elimination over the integers; every division is exact.
pub fn bareiss_determinant(mut a: SquareMatrix<BigInt>) -> BigInt {
    let n = a.n;
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            let aik = a.get(i, k).clone();
            for j in k + 1..n {
                let num = &pivot * a.get(i, j) - &aik * a.get(k, j);
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a.set(i, j, q);
            }
            a.set(i, k, BigInt::zero());
        }
        prev = pivot;
    }
    let det = a.get(n - 1, n - 1).clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Gershgorin disk radius bound on the spectral radius: `max_i Σ_j |a_ij|`.
pub fn gershgorin_bound(m: &RealMatrix) -> f64 {
    (0..m.n())
        .map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion, exponential but independent of Bareiss.
    fn laplace_det(m: &IntMatrix) -> i128 {
        if m.n() == 1 {
            return *m.get(0, 0) as i128;
        }
        (0..m.n())
            .map(|j| {
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * (*m.get(0, j) as i128) * laplace_det(&m.minor(0, j))
            })
            .sum()
    }

    #[test]
    fn small_determinants() {
        let m = IntMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(-2));
        let z = IntMatrix::zeros(3);
        assert_eq!(z.determinant(), BigInt::zero());
        // needs a row swap
        let m = IntMatrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(-5));
    }

    #[test]
    fn rejects_ragged_rows() {
        assert_eq!(
            IntMatrix::from_rows(vec![vec![1, 2], vec![3]]),
            Err(Error::NotSquare)
        );
    }

    #[test]
    fn minor_drops_row_and_column() {
        let m = IntMatrix::from_fn(3, |i, j| (3 * i + j) as i64);
        assert_eq!(m.minor(1, 0).rows(), vec![vec![1, 2], vec![7, 8]]);
    }

    proptest::proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(
            entries in proptest::collection::vec(-9i64..10, 25),
            n in 1usize..=5,
        ) {
            let m = IntMatrix::from_fn(n, |i, j| entries[i * 5 + j]);
            proptest::prop_assert_eq!(m.determinant(), BigInt::from(laplace_det(&m)));
        }
    }
}
