//! Numeric oracle: polynomial roots, characteristic polynomials, and the
//! real/non-real verdict on a spectrum.
//!
//! Roots are found by Aberth–Ehrlich simultaneous iteration in three passes
//! of increasing precision. The first pass evaluates in `f64`, the second in
//! double-double, and for integer polynomials a final pass evaluates exactly
//! at the current iterates. Each pass starts from the previous one's output,
//! so the expensive passes only polish. Without the later passes the
//! characteristic polynomials met here (coefficients up to `~10^30` with all
//! roots inside `[0, 4]`) lose every digit to cancellation.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ddouble::{self, Dd};
use crate::matrix::{IntMatrix, RealMatrix};
use crate::poly::IntPolynomial;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RootFinderConfig {
    pub convergence_tol: f64,
    pub max_iterations: usize,
    pub imag_threshold: f64,
    pub refine_suspicious: bool,
}

impl Default for RootFinderConfig {
    fn default() -> Self {
        RootFinderConfig {
            convergence_tol: 1e-13,
            max_iterations: 500,
            imag_threshold: 1e-6,
            refine_suspicious: true,
        }
    }
}

impl RootFinderConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.convergence_tol) || !positive(self.imag_threshold) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.imag_threshold <= self.convergence_tol {
            return Err(Error::InvalidArgument(
                "imag_threshold must exceed convergence_tol".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Numerically computed roots of a real-coefficient polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRootSet {
    #[serde(with = "pairs")]
    pub roots: Vec<Complex64>,
    /// `|p(z)|` divided by `Σ|a_i|·max(1,|z|)^deg`, per root.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

mod pairs {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl ComplexRootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Evaluates `p` and `p'` at a complex point with some precision.
trait Evaluator {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64);
    /// Upper bound on the rounding error in `eval(z).0`.
    fn noise(&self, z: Complex64) -> f64;
}

fn abs_horner(abs: &[f64], r: f64) -> f64 {
    abs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

struct FloatEval {
    coeffs: Vec<f64>,
    abs: Vec<f64>,
}

impl FloatEval {
    fn new(coeffs: Vec<f64>) -> Self {
        let abs = coeffs.iter().map(|c| c.abs()).collect();
        FloatEval { coeffs, abs }
    }
}

impl Evaluator for FloatEval {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    fn noise(&self, z: Complex64) -> f64 {
        4.0 * self.coeffs.len() as f64 * f64::EPSILON * abs_horner(&self.abs, z.norm())
    }
}

struct DdEval {
    coeffs: Vec<Dd>,
    abs: Vec<f64>,
}

impl DdEval {
    fn new(coeffs: Vec<Dd>) -> Self {
        let abs = coeffs.iter().map(|c| c.abs().to_f64()).collect();
        DdEval { coeffs, abs }
    }
}

const DD_EPS: f64 = 4.93e-32; // 2^-104

impl Evaluator for DdEval {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        ddouble::horner_with_derivative(&self.coeffs, z)
    }

    fn noise(&self, z: Complex64) -> f64 {
        // The iterate itself is an f64; below this the result is exact enough.
        8.0 * self.coeffs.len() as f64 * DD_EPS * abs_horner(&self.abs, z.norm())
    }
}

struct ExactEval<'a> {
    p: &'a IntPolynomial,
    dp: IntPolynomial,
}

impl<'a> ExactEval<'a> {
    fn new(p: &'a IntPolynomial) -> Self {
        ExactEval {
            p,
            dp: p.derivative(),
        }
    }
}

impl Evaluator for ExactEval<'_> {
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        (self.p.eval_complex(z), self.dp.eval_complex(z))
    }

    fn noise(&self, _z: Complex64) -> f64 {
        0.0
    }
}

/// Starting points on a circle of radius given by Fujiwara's bound
/// `2·max_k |a_{d-k}/a_d|^{1/k}` (last term halved), equally spaced with a
/// 0.5 rad offset so that no start lies on the real axis.
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let radius = 2.0
        * (1..=d)
            .map(|k| {
                let mut r = (coeffs[d - k] / lead).abs();
                if k == d {
                    r /= 2.0;
                }
                r.powf(1.0 / k as f64)
            })
            .fold(0.0, f64::max);
    let radius = if radius > 0.0 { radius } else { 1.0 };
    (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.5))
        .collect()
}

/// Aberth–Ehrlich iteration (Gauss–Seidel ordering) in place.
///
/// A root is frozen once its correction drops below `tol·max(1,|z|)` or its
/// value is within the evaluator's rounding noise. Returns whether every root
/// froze before the iteration cap.
fn aberth_pass<E: Evaluator>(
    eval: &E,
    roots: &mut [Complex64],
    tol: f64,
    max_iterations: usize,
) -> bool {
    let d = roots.len();
    let mut frozen = vec![false; d];
    for _ in 0..max_iterations {
        let mut all_frozen = true;
        for k in 0..d {
            if frozen[k] {
                continue;
            }
            let z = roots[k];
            let (p, dp) = eval.eval(z);
            if p.is_zero() || p.norm() <= eval.noise(z) {
                frozen[k] = true;
                continue;
            }
            let repulsion: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &zj)| (z - zj).inv())
                .sum();
            let step = (dp / p - repulsion).inv();
            if !(step.re.is_finite() && step.im.is_finite()) {
                // Collided iterates; nudge off the collision and keep going.
                roots[k] = z + Complex64::new(0.0, 1e-8 * z.norm().max(1.0));
                all_frozen = false;
                continue;
            }
            roots[k] = z - step;
            if step.norm() <= tol * z.norm().max(1.0) {
                frozen[k] = true;
            } else {
                all_frozen = false;
            }
        }
        if all_frozen {
            return true;
        }
    }
    frozen.iter().all(|&f| f)
}

fn residuals(p: &IntPolynomial, roots: &[Complex64]) -> Vec<f64> {
    let sum = p.abs_coeff_sum();
    let d = p.degree() as i32;
    roots
        .iter()
        .map(|&z| p.eval_complex(z).norm() / (sum * z.norm().max(1.0).powi(d)))
        .collect()
}

fn float_residuals(coeffs: &[f64], roots: &[Complex64]) -> Vec<f64> {
    let sum: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let d = (coeffs.len() - 1) as i32;
    let dd = DdEval::new(coeffs.iter().map(|&c| Dd::from_f64(c)).collect());
    roots
        .iter()
        .map(|&z| dd.eval(z).0.norm() / (sum * z.norm().max(1.0).powi(d)))
        .collect()
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Number of trailing zero coefficients, i.e. the multiplicity of the root 0.
fn zero_root_multiplicity<T: PartialEq + Default>(coeffs: &[T]) -> usize {
    coeffs.iter().take_while(|c| **c == T::default()).count()
}

/// All complex roots of an integer polynomial of degree ≥ 1.
///
/// The root `0` is split off exactly; the remaining factor goes through the
/// `f64`, double-double and exact Aberth passes. `converged` reports whether
/// the exact pass froze every root within `max_iterations`.
pub fn aberth_roots(p: &IntPolynomial, cfg: &RootFinderConfig) -> Result<ComplexRootSet> {
    cfg.validate()?;
    if p.degree() == 0 {
        return Err(Error::InvalidArgument(
            "root finding needs degree at least 1".into(),
        ));
    }
    let zeros = zero_root_multiplicity(p.coeffs());
    let reduced = IntPolynomial::new(p.coeffs()[zeros..].to_vec());
    let mut roots = vec![Complex64::zero(); zeros];
    let mut converged = true;
    if reduced.degree() > 0 {
        let float = FloatEval::new(reduced.to_f64_coeffs());
        let mut found = initial_guesses(&float.coeffs);
        aberth_pass(&float, &mut found, cfg.convergence_tol, cfg.max_iterations);
        if found.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            found = initial_guesses(&float.coeffs);
        }
        let dd = DdEval::new(reduced.to_dd_coeffs());
        aberth_pass(&dd, &mut found, cfg.convergence_tol, cfg.max_iterations);
        let exact = ExactEval::new(&reduced);
        converged = aberth_pass(&exact, &mut found, cfg.convergence_tol, cfg.max_iterations);
        roots.extend(found);
    }
    sort_roots(&mut roots);
    Ok(ComplexRootSet {
        residuals: residuals(p, &roots),
        roots,
        converged,
    })
}

/// All complex roots of a polynomial with `f64` coefficients (ascending).
///
/// Same scheme as [`aberth_roots`] without the exact pass; the coefficients
/// are taken at face value, so their own rounding bounds the accuracy.
pub fn aberth_roots_real(coeffs: &[f64], cfg: &RootFinderConfig) -> Result<ComplexRootSet> {
    cfg.validate()?;
    let mut coeffs = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidArgument(
            "root finding needs degree at least 1".into(),
        ));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coefficient".into()));
    }
    let zeros = zero_root_multiplicity(&coeffs);
    let reduced = &coeffs[zeros..];
    let mut roots = vec![Complex64::zero(); zeros];
    let mut converged = true;
    if reduced.len() > 1 {
        let float = FloatEval::new(reduced.to_vec());
        let mut found = initial_guesses(reduced);
        aberth_pass(&float, &mut found, cfg.convergence_tol, cfg.max_iterations);
        if found.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            found = initial_guesses(reduced);
        }
        let dd = DdEval::new(reduced.iter().map(|&c| Dd::from_f64(c)).collect());
        converged = aberth_pass(&dd, &mut found, cfg.convergence_tol, cfg.max_iterations);
        roots.extend(found);
    }
    sort_roots(&mut roots);
    Ok(ComplexRootSet {
        residuals: float_residuals(&coeffs, &roots),
        roots,
        converged,
    })
}

/// Outcome of Newton refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedRoot {
    #[serde(with = "pair")]
    pub root: Complex64,
    pub converged: bool,
}

mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

const NEWTON_MAX_STEPS: usize = 200;

fn newton_refine<E: Evaluator>(eval: &E, start: Complex64) -> RefinedRoot {
    let failed = RefinedRoot {
        root: start,
        converged: false,
    };
    let limit = 1.0 + start.norm();
    let mut z = start;
    for _ in 0..NEWTON_MAX_STEPS {
        let (p, dp) = eval.eval(z);
        if p.is_zero() {
            return RefinedRoot { root: z, converged: true };
        }
        if dp.is_zero() {
            return failed;
        }
        let step = p / dp;
        let next = z - step;
        if !(next.re.is_finite() && next.im.is_finite()) || (next - start).norm() > limit {
            return failed;
        }
        if next == z || step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            return RefinedRoot { root: next, converged: true };
        }
        z = next;
    }
    // Linear convergence at a multiple root still lands close; accept if the
    // value is tiny relative to the scale of the polynomial there.
    RefinedRoot {
        root: z,
        converged: eval.eval(z).0.norm() <= f64::EPSILON * eval.noise(z).max(f64::MIN_POSITIVE),
    }
}

/// Newton refinement with exact evaluation of `p` and `p'`.
///
/// Converges quadratically at simple roots and linearly (the error halves
/// each step) at double roots, so a real double root split by rounding into
/// a conjugate pair collapses back onto the real axis. On divergence the
/// input is returned unchanged with `converged = false`.
pub fn refine_root(p: &IntPolynomial, z: Complex64) -> RefinedRoot {
    newton_refine(&ExactEval::new(p), z)
}

/// Exact characteristic polynomial `det(λI - M)` by Faddeev–LeVerrier.
///
/// Runs over arbitrary-precision integers; the division by `k` in step `k`
/// is exact for integer matrices.
pub fn char_poly_exact(m: &IntMatrix) -> IntPolynomial {
    let n = m.n();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    // sparse copy of M: (row, col, value)
    let entries: Vec<(usize, usize, BigInt)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| *m.get(i, j) != 0)
        .map(|(i, j)| (i, j, BigInt::from(*m.get(i, j))))
        .collect();
    let mut acc: Vec<BigInt> = identity_big(n);
    for k in 1..=n {
        let mut prod = vec![BigInt::zero(); n * n];
        for (i, l, v) in &entries {
            for j in 0..n {
                let a = &acc[l * n + j];
                if !a.is_zero() {
                    prod[i * n + j] += v * a;
                }
            }
        }
        let trace: BigInt = (0..n).map(|i| &prod[i * n + i]).sum();
        let c = -(trace / BigInt::from(k));
        for i in 0..n {
            prod[i * n + i] += &c;
        }
        coeffs[n - k] = c;
        acc = prod;
    }
    IntPolynomial::new(coeffs)
}

fn identity_big(n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = BigInt::from(1);
    }
    v
}

/// Faddeev–LeVerrier in floating point; coefficients ascending, monic.
pub fn char_poly_float(m: &RealMatrix) -> Vec<f64> {
    let n = m.n();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut acc = vec![0.0; n * n];
    for i in 0..n {
        acc[i * n + i] = 1.0;
    }
    for k in 1..=n {
        let mut prod = vec![0.0; n * n];
        for i in 0..n {
            for l in 0..n {
                let v = *m.get(i, l);
                if v == 0.0 {
                    continue;
                }
                for j in 0..n {
                    prod[i * n + j] += v * acc[l * n + j];
                }
            }
        }
        let trace: f64 = (0..n).map(|i| prod[i * n + i]).sum();
        let c = -trace / k as f64;
        for i in 0..n {
            prod[i * n + i] += c;
        }
        coeffs[n - k] = c;
        acc = prod;
    }
    coeffs
}

/// Per-root decision shared by the exact and float verdicts.
fn verdict_with<F>(roots: &ComplexRootSet, cfg: &RootFinderConfig, refine: F) -> Result<bool>
where
    F: Fn(Complex64) -> RefinedRoot,
{
    cfg.validate()?;
    if !roots.converged {
        return Err(Error::NotConverged {
            iterations: cfg.max_iterations,
        });
    }
    let mut non_real = false;
    for &z in &roots.roots {
        let im = z.im.abs();
        if im > cfg.imag_threshold {
            non_real = true;
            continue;
        }
        let floor = cfg.convergence_tol * z.norm().max(1.0);
        if im <= floor || !cfg.refine_suspicious {
            continue;
        }
        let refined = refine(z);
        let im = refined.root.im.abs();
        if refined.converged && im <= floor {
            continue;
        }
        if refined.converged && im > cfg.imag_threshold {
            non_real = true;
            continue;
        }
        return Err(Error::Ambiguous { re: z.re, im: z.im });
    }
    Ok(non_real)
}

/// `true` iff the spectrum has a non-real member (the digraph is essentially
/// cyclic). Roots with `convergence_tol < |Im| ≤ imag_threshold` are refined
/// first; a root still stuck in that band yields [`Error::Ambiguous`].
pub fn spectral_verdict(
    p: &IntPolynomial,
    roots: &ComplexRootSet,
    cfg: &RootFinderConfig,
) -> Result<bool> {
    let exact = ExactEval::new(p);
    verdict_with(roots, cfg, |z| newton_refine(&exact, z))
}

/// [`spectral_verdict`] for polynomials with `f64` coefficients; refinement
/// uses double-double evaluation.
pub fn spectral_verdict_real(
    coeffs: &[f64],
    roots: &ComplexRootSet,
    cfg: &RootFinderConfig,
) -> Result<bool> {
    let dd = DdEval::new(coeffs.iter().map(|&c| Dd::from_f64(c)).collect());
    verdict_with(roots, cfg, |z| newton_refine(&dd, z))
}

/// Largest distance in a greedy nearest-pair matching of two multisets, or
/// `None` when their sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| b.iter().enumerate().map(move |(j, &y)| ((x - y).norm(), i, j)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (mut used_a, mut used_b) = (vec![false; a.len()], vec![false; b.len()]);
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for (dist, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(dist);
        matched += 1;
        if matched == a.len() {
            break;
        }
    }
    Some(worst)
}

/// [`multiset_distance`] for real expected values.
pub fn multiset_distance_real(found: &[Complex64], expected: &[f64]) -> Option<f64> {
    let expected: Vec<Complex64> = expected.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    multiset_distance(found, &expected)
}
