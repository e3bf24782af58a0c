//! Spanning converging trees (in-arborescences) of ring digraphs.
//!
//! For the out-degree Laplacian `L`, the number of spanning trees in which
//! every vertex has a directed path to the root `r` is the principal minor
//! `det L[r̂, r̂]`. Because rows of `L` sum to zero, every cofactor in row `r`
//! has the same value.

use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;
use crate::poly::IntPolynomial;
use crate::ringgraph::RingDigraph;
use crate::rootfind::char_poly_exact;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArborescenceCount {
    /// `per_root[r]`: trees converging to vertex `r + 1`.
    pub per_root: Vec<u64>,
    pub total: u64,
}

fn check_laplacian(l: &IntMatrix) -> Result<()> {
    match l.row_sums().iter().position(|&s| s != 0) {
        Some(row) => Err(Error::NotLaplacian { row }),
        None => Ok(()),
    }
}

/// Exact counts from principal minors of a Laplacian with zero row sums.
pub fn count_by_cofactor(l: &IntMatrix) -> Result<ArborescenceCount> {
    check_laplacian(l)?;
    let n = l.n();
    let per_root = (0..n)
        .map(|r| {
            let det = if n == 1 {
                1.into()
            } else {
                l.minor(r, r).determinant()
            };
            if det.is_negative() {
                return Err(Error::NotLaplacian { row: r });
            }
            det.to_u64().ok_or_else(|| {
                Error::InvalidArgument(format!("tree count at root {} exceeds u64", r + 1))
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    let total = per_root.iter().sum();
    Ok(ArborescenceCount { per_root, total })
}

/// `(i² + n + (n−i)²) / 2`, the total number of converging trees of the ring
/// digraph with gaps `{i, n−i}`.
pub fn t_closed_form(n: u64, i: u64) -> Result<u64> {
    if i == 0 || i >= n {
        return Err(Error::InvalidArgument(format!(
            "i must lie in 1..{n}, got {i}"
        )));
    }
    let twice = i * i + n + (n - i) * (n - i);
    debug_assert!(twice.is_multiple_of(2));
    Ok(twice / 2)
}

pub const BRUTE_FORCE_MAX_N: usize = 9;

/// Counts trees converging to `root` (1-based) by enumerating one out-arc
/// per non-root vertex. Arcs are 1-based `(tail, head)` pairs.
pub fn brute_force_count(n: usize, arcs: &[(usize, usize)], root: usize) -> Result<u64> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "enumeration is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    if root == 0 || root > n {
        return Err(Error::InvalidArgument(format!("root {root} is not a vertex")));
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in arcs {
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::InvalidArgument(format!("arc ({u},{v}) out of range")));
        }
        if u != v && !out[u - 1].contains(&(v - 1)) {
            out[u - 1].push(v - 1);
        }
    }
    let r = root - 1;
    let movers: Vec<usize> = (0..n).filter(|&v| v != r).collect();
    if movers.iter().any(|&v| out[v].is_empty()) {
        return Ok(0);
    }
    let mut choice = vec![0usize; n];
    let mut parent = vec![r; n];
    let mut count = 0;
    loop {
        for &v in &movers {
            parent[v] = out[v][choice[v]];
        }
        if converges(&parent, r) {
            count += 1;
        }
        // mixed-radix increment
        let mut carried = true;
        for &v in &movers {
            choice[v] += 1;
            if choice[v] < out[v].len() {
                carried = false;
                break;
            }
            choice[v] = 0;
        }
        if carried {
            return Ok(count);
        }
    }
}

fn converges(parent: &[usize], root: usize) -> bool {
    let n = parent.len();
    (0..n).all(|start| {
        let mut v = start;
        for _ in 0..n {
            if v == root {
                return true;
            }
            v = parent[v];
        }
        v == root
    })
}

pub fn brute_force_ring(g: &RingDigraph, root: usize) -> Result<u64> {
    brute_force_count(g.n(), &g.arcs(), root)
}

/// Both sides of the trigonometric product identity for the tree count of
/// the (near-)balanced two-gap ring: `(product side, closed form)`.
///
/// Even `n`: `(∏_{k<n/2} 2cos(πk/n) · ∏_{k≤n/2} 2cos(πk/(n+2)))² = n(n+2)/4`.
/// Odd `n`: `(∏_{k≤(n−1)/2} 2cos(πk/(n+1)))⁴ = (n+1)²/4`.
pub fn trig_product_check(n: usize) -> Result<(f64, f64)> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("n must be at least 4, got {n}")));
    }
    let two_cos = |k: usize, m: usize| 2.0 * (PI * k as f64 / m as f64).cos();
    let nf = n as f64;
    if n.is_multiple_of(2) {
        let a: f64 = (1..n / 2).map(|k| two_cos(k, n)).product();
        let b: f64 = (1..=n / 2).map(|k| two_cos(k, n + 2)).product();
        Ok(((a * b).powi(2), nf * (nf + 2.0) / 4.0))
    } else {
        let a: f64 = (1..=(n - 1) / 2).map(|k| two_cos(k, n + 1)).product();
        Ok((a.powi(4), (nf + 1.0).powi(2) / 4.0))
    }
}

/// Laplacian of the undirected path on `n` vertices: tridiagonal, diagonal
/// `(1, 2, …, 2, 1)`, `−1` off the diagonal (`[0]` for `n = 1`).
pub fn path_matrix(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, |i, j| {
        if i == j {
            (i > 0) as i64 + (i + 1 < n) as i64
        } else if i.abs_diff(j) == 1 {
            -1
        } else {
            0
        }
    })
}

/// Characteristic polynomial of [`path_matrix`] (equal to `Z_n + Z_{n−1}`)
/// and its closed-form roots `4cos²(πk/2n)`, `k = 1..=n`.
pub fn path_matrix_spectrum(n: usize) -> Result<(IntPolynomial, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let roots = (1..=n)
        .map(|k| {
            let c = (PI * k as f64 / (2 * n) as f64).cos();
            4.0 * c * c
        })
        .collect();
    Ok((char_poly_exact(&path_matrix(n)), roots))
}

/// The same pair for the undirected cycle, whose Laplacian adds the corner
/// entries: roots `4sin²(πk/n)`, `k = 0..n`.
pub fn cycle_matrix_spectrum(n: usize) -> Result<(IntPolynomial, Vec<f64>)> {
    let g = RingDigraph::symmetric(n)?;
    let roots = (0..n)
        .map(|k| {
            let s = (PI * k as f64 / n as f64).sin();
            4.0 * s * s
        })
        .collect();
    Ok((char_poly_exact(&g.laplacian()), roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::z_poly;

    fn ring(n: usize, s: &str) -> RingDigraph {
        RingDigraph::from_mask_str(n, s).unwrap()
    }

    #[test]
    fn balanced_four_ring() {
        let g = RingDigraph::two_missing(4, 2).unwrap();
        let c = count_by_cofactor(&g.laplacian()).unwrap();
        assert_eq!(c.total, 6);
        assert_eq!(c.total, t_closed_form(4, 2).unwrap());
        assert_eq!(c.per_root[3], brute_force_ring(&g, 4).unwrap());
        assert_eq!(brute_force_ring(&g, 4).unwrap(), 2);
    }

    #[test]
    fn unbalanced_four_ring() {
        let g = RingDigraph::two_missing(4, 1).unwrap();
        assert_eq!(count_by_cofactor(&g.laplacian()).unwrap().total, 7);
        assert_eq!(t_closed_form(4, 1).unwrap(), 7);
    }

    #[test]
    fn directed_cycle_has_one_tree_per_root() {
        for n in 3..=7 {
            let g = RingDigraph::cycle(n).unwrap();
            let c = count_by_cofactor(&g.laplacian()).unwrap();
            assert_eq!(c.per_root, vec![1; n]);
            for r in 1..=n {
                assert_eq!(brute_force_ring(&g, r).unwrap(), 1);
            }
        }
    }

    #[test]
    fn undirected_triangle() {
        let g = RingDigraph::symmetric(3).unwrap();
        for r in 1..=3 {
            assert_eq!(brute_force_ring(&g, r).unwrap(), 3);
        }
    }

    #[test]
    fn cofactors_are_constant_along_rows() {
        let l = ring(6, "101100").laplacian();
        for i in 0..6 {
            let vals: Vec<_> = (0..6)
                .map(|j| {
                    let d = l.minor(i, j).determinant();
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect();
            assert!(vals.iter().all(|v| *v == vals[0]), "row {i}: {vals:?}");
        }
    }

    #[test]
    fn rejects_non_laplacian() {
        let m = IntMatrix::from_rows(vec![vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(count_by_cofactor(&m), Err(Error::NotLaplacian { row: 0 }));
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(t_closed_form(4, 2).unwrap(), 6);
        for n in (4..=30).step_by(2) {
            assert_eq!(t_closed_form(n, n / 2).unwrap(), n * (n + 2) / 4);
        }
        for n in (5..=29).step_by(2) {
            assert_eq!(t_closed_form(n, (n - 1) / 2).unwrap(), (n + 1).pow(2) / 4);
            assert_eq!(t_closed_form(n, n.div_ceil(2)).unwrap(), (n + 1).pow(2) / 4);
        }
        assert!(t_closed_form(4, 0).is_err());
        assert!(t_closed_form(4, 4).is_err());
    }

    #[test]
    fn brute_force_guards() {
        assert!(brute_force_count(10, &[], 1).is_err());
        assert!(brute_force_count(3, &[], 4).is_err());
        assert_eq!(brute_force_count(3, &[(1, 2)], 2).unwrap(), 0);
    }

    #[test]
    fn trig_identities() {
        let (l, r) = trig_product_check(4).unwrap();
        assert!((l - 6.0).abs() < 1e-12 && r == 6.0);
        let (l, r) = trig_product_check(5).unwrap();
        assert!((l - 9.0).abs() < 1e-12 && r == 9.0);
        let (l, r) = trig_product_check(40).unwrap();
        assert!((l - r).abs() < 1e-9 * r);
        assert!(trig_product_check(3).is_err());
    }

    #[test]
    fn path_matrix_examples() {
        let (p, roots) = path_matrix_spectrum(2).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[0, -2, 1]));
        assert!((roots[0] - 2.0).abs() < 1e-12 && roots[1].abs() < 1e-12);
        for n in 1..=12 {
            let (p, _) = path_matrix_spectrum(n).unwrap();
            assert_eq!(p, &z_poly(n) + &z_poly(n - 1));
        }
    }

    #[test]
    fn cycle_matrix_differs_from_path() {
        let (p, roots) = cycle_matrix_spectrum(4).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[0, -16, 20, -8, 1]));
        let sum: f64 = roots.iter().sum();
        assert!((sum - 8.0).abs() < 1e-12);
        assert_ne!(p, path_matrix_spectrum(4).unwrap().0);
    }
}
