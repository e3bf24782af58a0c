//! Small weighted digraphs: the complete digraph on three vertices, a
//! weighted four-vertex ring with parameters `p`, `y`, and the weighted
//! four-cycle with weights `{4, 9, a, x}`.
//!
//! All verdicts go through the discriminant of a cubic factor of the
//! characteristic polynomial. For `λ³ + bλ² + cλ + d` we use
//! `Δ = 18bcd − 4b³d + b²c² − 4c³ − 27d²`, which is negative exactly when the
//! cubic has a conjugate pair of non-real roots.

use serde::{Deserialize, Serialize};

use crate::matrix::RealMatrix;
use crate::rootfind::{self, RootFinderConfig};
use crate::{Error, Result};

/// Nonnegative arc weights with zero diagonal; `w[i][j] > 0` iff `(i, j)` is
/// an arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct WeightMatrix {
    w: Vec<Vec<f64>>,
}

impl WeightMatrix {
    pub fn new(w: Vec<Vec<f64>>) -> Result<Self> {
        let n = w.len();
        if w.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for (i, row) in w.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "weight ({i},{j}) = {v} is not a finite nonnegative number"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
                }
            }
        }
        Ok(WeightMatrix { w })
    }

    /// The complete digraph on three vertices in the layout
    /// `[[0, b, γ], [α, 0, c], [a, β, 0]]`.
    pub fn k3(a: f64, b: f64, c: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        WeightMatrix::new(vec![
            vec![0.0, b, gamma],
            vec![alpha, 0.0, c],
            vec![a, beta, 0.0],
        ])
    }

    /// The four-vertex ring whose characteristic polynomial is
    /// `λ(λ³ − (y+q)λ² + (qy+q)λ − (qy+1))`, `q = p + 3`.
    pub fn fig6(p: f64, y: f64) -> Result<Self> {
        WeightMatrix::new(vec![
            vec![0.0, 1.0, 0.0, p],
            vec![0.0, 0.0, y, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
        ])
    }

    /// Directed four-cycle `1 → 2 → 3 → 4 → 1` with weights `4, 9, a, x`.
    pub fn c4(a: f64, x: f64) -> Result<Self> {
        WeightMatrix::new(vec![
            vec![0.0, 4.0, 0.0, 0.0],
            vec![0.0, 0.0, 9.0, 0.0],
            vec![0.0, 0.0, 0.0, a],
            vec![x, 0.0, 0.0, 0.0],
        ])
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i][j]
    }

    fn k3_weights(&self) -> Result<[f64; 6]> {
        if self.n() != 3 {
            return Err(Error::InvalidArgument(format!(
                "expected 3 vertices, got {}",
                self.n()
            )));
        }
        let w = &self.w;
        Ok([w[2][0], w[0][1], w[1][2], w[1][0], w[2][1], w[0][2]])
    }
}

impl TryFrom<Vec<Vec<f64>>> for WeightMatrix {
    type Error = Error;

    fn try_from(w: Vec<Vec<f64>>) -> Result<Self> {
        WeightMatrix::new(w)
    }
}

impl From<WeightMatrix> for Vec<Vec<f64>> {
    fn from(m: WeightMatrix) -> Self {
        m.w
    }
}

pub fn weighted_laplacian(w: &WeightMatrix) -> RealMatrix {
    let n = w.n();
    RealMatrix::from_fn(n, |i, j| {
        if i == j {
            w.w[i].iter().sum()
        } else {
            -w.w[i][j]
        }
    })
}

/// Discriminant of the monic cubic `λ³ + bλ² + cλ + d`.
pub fn cubic_discriminant(b: f64, c: f64, d: f64) -> f64 {
    18.0 * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c - 4.0 * c.powi(3) - 27.0 * d * d
}

/// `D = S² − 4Q` for the quadratic factor `λ² − Sλ + Q` of a three-vertex
/// Laplacian; `D < 0` iff the digraph is essentially cyclic.
pub fn k3_discriminant(w: &WeightMatrix) -> Result<f64> {
    let [a, b, c, al, be, ga] = w.k3_weights()?;
    let s = a + b + c + al + be + ga;
    let q = a * b + b * c + c * a + al * be + be * ga + ga * al + a * al + b * be + c * ga;
    Ok(s * s - 4.0 * q)
}

/// Triangle criterion: the differences `a−α`, `b−β`, `c−γ` share a sign and
/// their square roots (of absolute values) form a non-degenerate triangle.
pub fn k3_classify(w: &WeightMatrix) -> Result<bool> {
    let [a, b, c, al, be, ga] = w.k3_weights()?;
    let diffs = [a - al, b - be, c - ga];
    let same_sign = diffs.iter().all(|&v| v >= 0.0) || diffs.iter().all(|&v| v <= 0.0);
    Ok(same_sign && strict_triangle(diffs.map(|v| v.abs().sqrt())))
}

fn strict_triangle(mut s: [f64; 3]) -> bool {
    s.sort_by(f64::total_cmp);
    s[0] + s[1] > s[2]
}

/// Monic cubic factor for the `p`, `y` ring, ascending coefficients.
pub fn fig6_cubic(p: f64, y: f64) -> [f64; 4] {
    let q = p + 3.0;
    [-(q * y + 1.0), q * y + q, -(y + q), 1.0]
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

pub fn fig6_discriminant(p: f64, y: f64) -> Result<f64> {
    check_positive("p", p)?;
    check_positive("y", y)?;
    let [d, c, b, _] = fig6_cubic(p, y);
    Ok(cubic_discriminant(b, c, d))
}

/// The expanded quartic in `y` for the same discriminant, written out term
/// by term as an independent check on [`fig6_discriminant`]; the two agree
/// identically.
pub fn fig6_quartic(p: f64, y: f64) -> f64 {
    let q = p + 3.0;
    q * (q - 4.0) * y.powi(4) - (2.0 * q.powi(3) - 8.0 * q * q + 4.0) * y.powi(3)
        + q * (q.powi(3) - 2.0 * q * q - 8.0 * q + 6.0) * y * y
        - 2.0 * q * (q + 2.0) * (q - 3.0).powi(2) * y
        + (q + 1.0) * (q - 3.0).powi(3)
}

const BOUNDARY_SCAN_POINTS: usize = 4000;

/// The window `(y₁, y₂)` of `y` values where the `p`, `y` ring is
/// essentially cyclic: the first sign change of the discriminant from
/// positive to negative in `(0, 4q]` and the next change back, refined by
/// bisection.
pub fn fig6_boundary(p: f64) -> Result<(f64, f64)> {
    check_positive("p", p)?;
    let upper = 4.0 * (p + 3.0);
    let f = |y: f64| fig6_discriminant(p, y).expect("positive arguments");
    let step = upper / BOUNDARY_SCAN_POINTS as f64;
    let mut roots = Vec::new();
    let mut prev = (step, f(step));
    for k in 2..=BOUNDARY_SCAN_POINTS {
        let y = step * k as f64;
        let v = f(y);
        if (prev.1 > 0.0) != (v > 0.0) {
            roots.push(bisect(&f, prev.0, y));
        }
        prev = (y, v);
    }
    let no_window = || Error::NoSignChange { upper };
    let enter = (0..roots.len())
        .find(|&i| f(roots[i] + 1e-9 * roots[i].max(1.0)) < 0.0)
        .ok_or_else(no_window)?;
    let exit = roots.get(enter + 1).copied().ok_or_else(no_window)?;
    Ok((roots[enter], exit))
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_positive = f(lo) > 0.0;
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nested-radical expression for the `p = 3` window, kept as a cross-check
/// of [`fig6_boundary`].
pub fn fig6_closed_form_p3() -> (f64, f64) {
    let z = 0.5 * (671.0 + 65.0 * 65f64.sqrt()).cbrt();
    let q = (36.0 * z + 145.0 + 504.0 / z).sqrt();
    let r = (290.0 - 36.0 * z - 504.0 / z + 3454.0 / q).sqrt();
    ((37.0 - q - r) / 12.0, (37.0 - q + r) / 12.0)
}

/// Elementary symmetric functions `(e₁, e₂, e₃)` of the cubic factor
/// `λ³ − e₁λ² + e₂λ − e₃` for the `{4, 9, a, x}` cycle.
pub fn c4_cubic(a: f64, x: f64) -> [f64; 3] {
    [
        13.0 + a + x,
        36.0 + 13.0 * x + 13.0 * a + a * x,
        36.0 * x + 36.0 * a + 13.0 * a * x,
    ]
}

pub fn c4_discriminant(a: f64, x: f64) -> f64 {
    let [e1, e2, e3] = c4_cubic(a, x);
    cubic_discriminant(-e1, e2, -e3)
}

/// Sum of the absolute values of the terms of [`c4_discriminant`], the
/// natural scale for a relative sign band.
pub fn c4_discriminant_scale(a: f64, x: f64) -> f64 {
    let [e1, e2, e3] = c4_cubic(a, x);
    let (b, c, d) = (-e1, e2, -e3);
    (18.0 * b * c * d).abs()
        + (4.0 * b.powi(3) * d).abs()
        + (b * b * c * c).abs()
        + (4.0 * c.powi(3)).abs()
        + (27.0 * d * d).abs()
}

/// The explicit boundary polynomial of the cyclic region in the `(a, x)`
/// plane, term by term. It equals `−c4_discriminant(a, x)`, so it is
/// positive exactly on the essentially cyclic region.
pub fn c4_boundary_polynomial(a: f64, x: f64) -> f64 {
    let (a2, x2) = (a * a, x * x);
    -a2 * x2 * (x - a).powi(2)
        + 26.0 * (x + a) * (a * x * (x - a).powi(2) + 25.0 * (x2 + a2) + 58.0 * a * x + 900.0)
        + 870.0 * a2 * x2
        - 241.0 * (x2 + a2) * (2.0 * a * x + 25.0)
        - 25.0 * (x2 * x2 + a2 * a2)
        - 3934.0 * a * x
        - 32400.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclicityRegionSample {
    pub a: f64,
    pub x: f64,
    pub discriminant: f64,
    pub essentially_cyclic: bool,
    /// Strict triangle inequality on the square roots of the three smallest
    /// of `{4, 9, a, x}`.
    pub triangle_ok: bool,
}

pub fn c4_sample(a: f64, x: f64) -> Result<CyclicityRegionSample> {
    if !(a.is_finite() && x.is_finite() && a >= 0.0 && x >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "weights must be finite and nonnegative, got a = {a}, x = {x}"
        )));
    }
    let mut w = [4.0, 9.0, a, x];
    w.sort_by(f64::total_cmp);
    let discriminant = c4_discriminant(a, x);
    Ok(CyclicityRegionSample {
        a,
        x,
        discriminant,
        essentially_cyclic: discriminant < 0.0,
        triangle_ok: strict_triangle([w[0].sqrt(), w[1].sqrt(), w[2].sqrt()]),
    })
}

/// Samples every point of `a_grid × x_grid`, `a` varying slowest.
pub fn c4_scan(a_grid: &[f64], x_grid: &[f64]) -> Result<Vec<CyclicityRegionSample>> {
    a_grid
        .iter()
        .flat_map(|&a| x_grid.iter().map(move |&x| c4_sample(a, x)))
        .collect()
}

/// `steps + 1` evenly spaced values from `0` to `max`.
pub fn uniform_grid(max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| max * k as f64 / steps as f64).collect()
}

/// Essential cyclicity of a weighted digraph from its numeric spectrum.
pub fn numeric_cyclic(w: &WeightMatrix, cfg: &RootFinderConfig) -> Result<bool> {
    let coeffs = rootfind::char_poly_float(&weighted_laplacian(w));
    let roots = rootfind::aberth_roots_real(&coeffs, cfg)?;
    rootfind::spectral_verdict_real(&coeffs, &roots, cfg)
}
