//! Digraphs with ring structure.
//!
//! Vertices are `1..=n`. The forward Hamiltonian cycle `(1,n), (n,n-1), …,
//! (2,1)` is always present; mask position `j` says whether the reverse arc
//! `(j, j+1)` (or `(n, 1)` for `j = n`) is present too. All-false is the
//! directed cycle `Γ¹`, all-true the undirected cycle `Γ²`.
//!
//! The characteristic polynomial depends only on the multiset of gaps
//! between absent reverse arcs, which is what the exact classifier keys on.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;
use crate::poly::IntPolynomial;
use crate::polycore::z_product;
use crate::rootfind::{self, ComplexRootSet, RootFinderConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingDigraph {
    n: usize,
    mask: Vec<bool>,
}

impl RingDigraph {
    pub fn new(mask: Vec<bool>) -> Result<Self> {
        if mask.len() < 3 {
            return Err(Error::RingTooSmall(mask.len()));
        }
        Ok(RingDigraph {
            n: mask.len(),
            mask,
        })
    }

    /// Parses a mask string of `'0'`/`'1'` and checks it has length `n`.
    pub fn from_mask_str(n: usize, s: &str) -> Result<Self> {
        if n < 3 {
            return Err(Error::RingTooSmall(n));
        }
        let mask = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MaskChar(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        if mask.len() != n {
            return Err(Error::MaskLength {
                expected: n,
                found: mask.len(),
            });
        }
        RingDigraph::new(mask)
    }

    /// The directed cycle `Γ¹_n`.
    pub fn cycle(n: usize) -> Result<Self> {
        RingDigraph::new(vec![false; n])
    }

    /// The undirected cycle `Γ²_n`.
    pub fn symmetric(n: usize) -> Result<Self> {
        RingDigraph::new(vec![true; n])
    }

    /// `Γ′_n`: every reverse arc except `(n, 1)`.
    pub fn one_missing(n: usize) -> Result<Self> {
        let mut mask = vec![true; n];
        if let Some(last) = mask.last_mut() {
            *last = false;
        }
        RingDigraph::new(mask)
    }

    /// `Γ″_n`: reverse arcs `(i, i+1)` and `(n, 1)` absent, gaps `{i, n-i}`.
    pub fn two_missing(n: usize, i: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::RingTooSmall(n));
        }
        if i == 0 || i >= n {
            return Err(Error::InvalidArgument(format!(
                "i must lie in 1..{n}, got {i}"
            )));
        }
        let mut mask = vec![true; n];
        mask[i - 1] = false;
        mask[n - 1] = false;
        RingDigraph::new(mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn mask_string(&self) -> String {
        self.mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Arcs `(u, v)` with 1-based labels, forward cycle first.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut arcs: Vec<(usize, usize)> = (1..=n)
            .map(|v| (v, if v == 1 { n } else { v - 1 }))
            .collect();
        arcs.extend(
            (1..=n)
                .filter(|&j| self.mask[j - 1])
                .map(|j| (j, if j == n { 1 } else { j + 1 })),
        );
        arcs
    }

    pub fn laplacian(&self) -> IntMatrix {
        let mut l = IntMatrix::zeros(self.n);
        for (u, v) in self.arcs() {
            l.set(u - 1, v - 1, -1);
            l.set(u - 1, u - 1, l.get(u - 1, u - 1) + 1);
        }
        l
    }

    pub fn decompose(&self) -> GapDecomposition {
        let absent: Vec<usize> = (1..=self.n).filter(|&j| !self.mask[j - 1]).collect();
        let k = absent.len();
        let gaps = if k == 0 || k == self.n {
            Vec::new()
        } else {
            let mut gaps: Vec<usize> = absent.windows(2).map(|w| w[1] - w[0]).collect();
            gaps.push(absent[0] + self.n - absent[k - 1]);
            gaps
        };
        GapDecomposition { k, gaps }
    }

    /// The lexicographically smallest rotation of the mask (`'0' < '1'`).
    pub fn canonical_form(&self) -> RingDigraph {
        
        (0..self.n)
            .map(|s| self.rotated(s))
            .min_by(|a, b| a.mask.cmp(&b.mask))
            .expect("n >= 3")
    }

    /// Relabels vertex `v` as `v - s` (mod n); isomorphic to `self`.
    pub fn rotated(&self, s: usize) -> RingDigraph {
        let n = self.n;
        RingDigraph {
            n,
            mask: (0..n).map(|j| self.mask[(j + s) % n]).collect(),
        }
    }

    /// Exact characteristic polynomial `det(λI - L)` from the gap structure.
    pub fn char_poly(&self) -> IntPolynomial {
        let d = self.decompose();
        let sign = if self.n.is_multiple_of(2) { 1 } else { -1 };
        if d.k == 0 {
            rootfind::char_poly_exact(&self.laplacian())
        } else if d.k == self.n {
            IntPolynomial::from_i64(&[-1, 1])
                .pow(self.n as u32)
                .add_const(-sign)
        } else {
            z_product(&d.gaps).add_const(-sign)
        }
    }

    pub fn classify_exact(&self) -> Classification {
        let d = self.decompose();
        let case = match d.k {
            0 => ClassificationCase::T1Symmetric,
            1 => ClassificationCase::T2OneMissing,
            2 => match d.gaps[0].abs_diff(d.gaps[1]) {
                0 => ClassificationCase::T3Balanced,
                1 => ClassificationCase::T3NearBalanced,
                _ => ClassificationCase::T3Cyclic,
            },
            k if k == self.n => ClassificationCase::T1Cycle,
            _ => ClassificationCase::T4Cyclic,
        };
        Classification {
            essentially_cyclic: case.essentially_cyclic(),
            case,
            closed_form_spectrum: self.closed_form_spectrum(),
        }
    }

    /// Closed-form Laplacian spectrum where one is known, else `None`.
    pub fn closed_form_spectrum(&self) -> Option<Vec<Complex64>> {
        let n = self.n;
        let nf = n as f64;
        let real = |v: Vec<f64>| Some(v.into_iter().map(|x| Complex64::new(x, 0.0)).collect());
        let cos2 = |k: usize, m: usize| {
            let c = (PI * k as f64 / m as f64).cos();
            4.0 * c * c
        };
        let d = self.decompose();
        match d.k {
            0 => real(
                (0..n)
                    .map(|k| {
                        let s = (PI * k as f64 / nf).sin();
                        4.0 * s * s
                    })
                    .collect(),
            ),
            1 => real(
                (1..=n)
                    .map(|k| cos2(k, if (k + n).is_multiple_of(2) { 2 * n } else { 2 * n + 2 }))
                    .collect(),
            ),
            2 if d.gaps[0] == d.gaps[1] => real(
                (1..=n / 2)
                    .map(|k| cos2(k, n))
                    .chain((1..=n / 2).map(|k| cos2(k, n + 2)))
                    .collect(),
            ),
            2 if d.gaps[0].abs_diff(d.gaps[1]) == 1 => real((1..=n).map(|k| cos2(k, n + 1)).collect()),
            k if k == n => Some(
                (1..=n)
                    .map(|k| {
                        let t = PI * k as f64 / nf;
                        Complex64::new(2.0 * t.sin().powi(2), (2.0 * t).sin())
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn spectrum_numeric(&self, cfg: &RootFinderConfig) -> Result<ComplexRootSet> {
        rootfind::aberth_roots(&self.char_poly(), cfg)
    }

    /// Essential cyclicity decided by the numeric oracle alone.
    pub fn numeric_verdict(&self, cfg: &RootFinderConfig) -> Result<bool> {
        let p = rootfind::char_poly_exact(&self.laplacian());
        let roots = rootfind::aberth_roots(&p, cfg)?;
        rootfind::spectral_verdict(&p, &roots, cfg)
    }

    /// Classification plus the data needed to reproduce it. The spectrum is
    /// the closed form when one exists, otherwise the numeric roots.
    pub fn record(&self, cfg: &RootFinderConfig) -> Result<ClassificationRecord> {
        let c = self.classify_exact();
        let d = self.decompose();
        let spectrum = match c.closed_form_spectrum {
            Some(s) => s,
            None => self.spectrum_numeric(cfg)?.roots,
        };
        Ok(ClassificationRecord {
            n: self.n,
            mask: self.mask_string(),
            k: d.k,
            gaps: d.gaps,
            essentially_cyclic: c.essentially_cyclic,
            case: c.case,
            spectrum: spectrum.iter().map(|z| [z.re, z.im]).collect(),
            char_poly: self.char_poly(),
        })
    }
}

impl fmt::Display for RingDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.mask_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapDecomposition {
    #[serde(rename = "K")]
    pub k: usize,
    pub gaps: Vec<usize>,
}

impl GapDecomposition {
    pub fn sorted_gaps(&self) -> Vec<usize> {
        let mut g = self.gaps.clone();
        g.sort_unstable();
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassificationCase {
    #[serde(rename = "T1-cycle")]
    T1Cycle,
    #[serde(rename = "T1-symmetric")]
    T1Symmetric,
    #[serde(rename = "T2-one-missing")]
    T2OneMissing,
    #[serde(rename = "T3-balanced")]
    T3Balanced,
    #[serde(rename = "T3-near-balanced")]
    T3NearBalanced,
    #[serde(rename = "T3-cyclic")]
    T3Cyclic,
    #[serde(rename = "T4-cyclic")]
    T4Cyclic,
}

impl ClassificationCase {
    pub fn essentially_cyclic(self) -> bool {
        matches!(
            self,
            ClassificationCase::T1Cycle | ClassificationCase::T3Cyclic | ClassificationCase::T4Cyclic
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            ClassificationCase::T1Cycle => "T1-cycle",
            ClassificationCase::T1Symmetric => "T1-symmetric",
            ClassificationCase::T2OneMissing => "T2-one-missing",
            ClassificationCase::T3Balanced => "T3-balanced",
            ClassificationCase::T3NearBalanced => "T3-near-balanced",
            ClassificationCase::T3Cyclic => "T3-cyclic",
            ClassificationCase::T4Cyclic => "T4-cyclic",
        }
    }
}

impl fmt::Display for ClassificationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub essentially_cyclic: bool,
    pub case: ClassificationCase,
    pub closed_form_spectrum: Option<Vec<Complex64>>,
}

/// Serializable classification of one digraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub n: usize,
    pub mask: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub gaps: Vec<usize>,
    pub essentially_cyclic: bool,
    pub case: ClassificationCase,
    pub spectrum: Vec<[f64; 2]>,
    pub char_poly: IntPolynomial,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootfind::{char_poly_exact, multiset_distance};

    fn g(n: usize, s: &str) -> RingDigraph {
        RingDigraph::from_mask_str(n, s).unwrap()
    }

    fn all_masks(n: usize) -> impl Iterator<Item = RingDigraph> {
        (0u32..1 << n).map(move |bits| {
            RingDigraph::new((0..n).map(|j| bits >> j & 1 == 1).collect()).unwrap()
        })
    }

    #[test]
    fn mask_parsing_errors() {
        assert_eq!(RingDigraph::from_mask_str(2, "00"), Err(Error::RingTooSmall(2)));
        assert_eq!(
            RingDigraph::from_mask_str(4, "010"),
            Err(Error::MaskLength {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(RingDigraph::from_mask_str(3, "01x"), Err(Error::MaskChar('x')));
    }

    #[test]
    fn laplacian_of_directed_triangle() {
        let l = RingDigraph::cycle(3).unwrap().laplacian();
        assert_eq!(l.rows(), vec![vec![1, 0, -1], vec![-1, 1, 0], vec![0, -1, 1]]);
    }

    #[test]
    fn symmetric_laplacian_is_circulant() {
        let l = RingDigraph::symmetric(6).unwrap().laplacian();
        for i in 0..6 {
            for j in 0..6 {
                let want = match (i + 6 - j) % 6 {
                    0 => 2,
                    1 | 5 => -1,
                    _ => 0,
                };
                assert_eq!(*l.get(i, j), want);
            }
        }
    }

    #[test]
    fn row_sums_vanish() {
        for n in 3..=7 {
            for d in all_masks(n) {
                assert!(d.laplacian().row_sums().iter().all(|&s| s == 0));
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let d = RingDigraph::one_missing(8).unwrap().decompose();
        assert_eq!((d.k, d.gaps), (1, vec![8]));
        let d = RingDigraph::two_missing(8, 3).unwrap().decompose();
        assert_eq!((d.k, d.gaps), (2, vec![5, 3]));
        let d = RingDigraph::cycle(5).unwrap().decompose();
        assert_eq!((d.k, d.gaps), (5, vec![]));
    }

    #[test]
    fn gaps_sum_to_n() {
        for n in 3..=9 {
            for d in all_masks(n) {
                let gd = d.decompose();
                if gd.k > 0 && gd.k < n {
                    assert_eq!(gd.gaps.iter().sum::<usize>(), n);
                }
            }
        }
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(g(4, "0110").canonical_form().mask_string(), "0011");
        assert_eq!(g(5, "11111").canonical_form().mask_string(), "11111");
        assert_eq!(g(6, "101101").canonical_form().mask_string(), "011011");
    }

    #[test]
    fn char_poly_examples() {
        let p = |c: &[i64]| IntPolynomial::from_i64(c);
        assert_eq!(RingDigraph::one_missing(3).unwrap().char_poly(), p(&[0, 6, -5, 1]));
        assert_eq!(
            RingDigraph::two_missing(4, 2).unwrap().char_poly(),
            p(&[0, -6, 11, -6, 1])
        );
        assert_eq!(RingDigraph::cycle(3).unwrap().char_poly(), p(&[0, 3, -3, 1]));
    }

    #[test]
    fn char_poly_matches_generic_algorithm() {
        for n in 3..=9 {
            for d in all_masks(n) {
                assert_eq!(d.char_poly(), char_poly_exact(&d.laplacian()), "{d}");
                assert!(d.char_poly().coeff(0) == 0.into());
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = RingDigraph::two_missing(10, 5).unwrap().classify_exact();
        assert_eq!(c.case, ClassificationCase::T3Balanced);
        assert!(!c.essentially_cyclic);
        let c = RingDigraph::two_missing(7, 3).unwrap().classify_exact();
        assert_eq!(c.case, ClassificationCase::T3NearBalanced);
        assert!(!c.essentially_cyclic);
        let c = g(8, "01101011").classify_exact();
        assert_eq!(c.case, ClassificationCase::T4Cyclic);
        assert!(c.essentially_cyclic);
        assert!(c.closed_form_spectrum.is_none());
    }

    #[test]
    fn closed_form_examples() {
        let cyc = RingDigraph::cycle(4).unwrap().closed_form_spectrum().unwrap();
        let want = [
            Complex64::new(1.0, 1.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, -1.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(multiset_distance(&cyc, &want).unwrap() < 1e-12);
        let one = RingDigraph::one_missing(3).unwrap().closed_form_spectrum().unwrap();
        let want: Vec<Complex64> = [3.0, 2.0, 0.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert!(multiset_distance(&one, &want).unwrap() < 1e-12);
        let tri = RingDigraph::cycle(3).unwrap().closed_form_spectrum().unwrap();
        assert!((tri[0].norm() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn numeric_spectrum_examples() {
        let cfg = RootFinderConfig::default();
        let r = RingDigraph::two_missing(4, 2).unwrap().spectrum_numeric(&cfg).unwrap();
        let want: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64, 0.0)).collect();
        assert!(multiset_distance(&r.roots, &want).unwrap() < 1e-9);
        let r = RingDigraph::two_missing(4, 1).unwrap().spectrum_numeric(&cfg).unwrap();
        assert_eq!(r.roots.iter().filter(|z| z.im.abs() > 0.1).count(), 2);
    }

    #[test]
    fn closed_forms_match_numeric() {
        let cfg = RootFinderConfig::default();
        for n in 3..=9 {
            for d in all_masks(n) {
                if let Some(cf) = d.closed_form_spectrum() {
                    let r = d.spectrum_numeric(&cfg).unwrap();
                    assert!(multiset_distance(&cf, &r.roots).unwrap() < 1e-6, "{d}");
                }
            }
        }
    }

    #[test]
    fn exact_and_numeric_verdicts_agree() {
        let cfg = RootFinderConfig::default();
        for n in 3..=8 {
            for d in all_masks(n) {
                assert_eq!(
                    d.classify_exact().essentially_cyclic,
                    d.numeric_verdict(&cfg).unwrap(),
                    "{d}"
                );
            }
        }
    }

    #[test]
    fn gershgorin_bounds_spectrum() {
        let cfg = RootFinderConfig::default();
        for d in all_masks(7) {
            let r = d.spectrum_numeric(&cfg).unwrap();
            assert!(r.roots.iter().all(|z| z.norm() <= 4.0 + 1e-9));
        }
    }

    #[test]
    fn record_json() {
        let r = RingDigraph::cycle(3)
            .unwrap()
            .record(&RootFinderConfig::default())
            .unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["case"], "T1-cycle");
        assert_eq!(v["K"], 3);
        assert_eq!(v["char_poly"], serde_json::json!(["0", "3", "-3", "1"]));
        let back: ClassificationRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    proptest::proptest! {
        #[test]
        fn rotation_preserves_char_poly(bits in 0u32..1 << 10, n in 3usize..=10, s in 0usize..10) {
            let d = RingDigraph::new((0..n).map(|j| bits >> j & 1 == 1).collect()).unwrap();
            proptest::prop_assert_eq!(d.rotated(s % n).char_poly(), d.char_poly());
            proptest::prop_assert_eq!(d.canonical_form().char_poly(), d.char_poly());
            proptest::prop_assert_eq!(d.canonical_form().decompose().sorted_gaps(), d.decompose().sorted_gaps());
        }
    }
}
