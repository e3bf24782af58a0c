//! Linear consensus `ẋ = −Lx` and the oscillations that non-real Laplacian
//! eigenvalues produce in it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::{gershgorin_bound, RealMatrix};
use crate::ringgraph::RingDigraph;
use crate::rootfind::RootFinderConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Unit vector at a 1-based vertex.
    Basis(usize),
    Vector(Vec<f64>),
    /// Entries uniform in `[-1, 1]` from a seeded generator.
    Random { seed: u64 },
}

/// Scalar read off each state; vertices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Difference(usize, usize),
    Component(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub step: f64,
    pub horizon: f64,
    pub initial_state: InitialState,
    pub observable: Observable,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            step: 0.01,
            horizon: 60.0,
            initial_state: InitialState::Basis(1),
            observable: Observable::Difference(1, 2),
        }
    }
}

/// The stability margin: `step · ρ̂ ≤ 0.1` with `ρ̂` the Gershgorin bound.
pub const STABILITY_FACTOR: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub observable: Vec<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least one sample")
    }
}

fn initial_vector(n: usize, init: &InitialState) -> Result<Vec<f64>> {
    match init {
        InitialState::Basis(v) => {
            if *v == 0 || *v > n {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
            }
            let mut x = vec![0.0; n];
            x[v - 1] = 1.0;
            Ok(x)
        }
        InitialState::Vector(x) => {
            if x.len() != n || x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "initial state needs {n} finite entries"
                )));
            }
            Ok(x.clone())
        }
        InitialState::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        }
    }
}

fn observe(obs: Observable, x: &[f64]) -> f64 {
    match obs {
        Observable::Difference(i, j) => x[i - 1] - x[j - 1],
        Observable::Component(i) => x[i - 1],
    }
}

fn rk4_step(l: &RealMatrix, x: &[f64], h: f64) -> Vec<f64> {
    let f = |y: &[f64]| -> Vec<f64> { l.mul_vec(y).into_iter().map(|v| -v).collect() };
    let axpy = |y: &[f64], k: &[f64], a: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(y, k)| y + a * k).collect()
    };
    let k1 = f(x);
    let k2 = f(&axpy(x, &k1, h / 2.0));
    let k3 = f(&axpy(x, &k2, h / 2.0));
    let k4 = f(&axpy(x, &k3, h));
    (0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Classical fourth-order Runge–Kutta with a fixed step.
pub fn simulate(l: &RealMatrix, cfg: &SimConfig) -> Result<Trajectory> {
    let n = l.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let scale = gershgorin_bound(l).max(1.0);
    if let Some(row) = l.row_sums().iter().position(|s| s.abs() > 1e-12 * scale) {
        return Err(Error::NotLaplacian { row });
    }
    if !(cfg.step > 0.0 && cfg.step.is_finite() && cfg.horizon > 0.0 && cfg.horizon.is_finite()) {
        return Err(Error::InvalidArgument("step and horizon must be positive".into()));
    }
    let limit = STABILITY_FACTOR / gershgorin_bound(l);
    if cfg.step > limit {
        return Err(Error::StepTooLarge {
            step: cfg.step,
            limit,
        });
    }
    match cfg.observable {
        Observable::Difference(i, j) if i == 0 || j == 0 || i > n || j > n => {
            return Err(Error::InvalidArgument(format!("observable ({i},{j}) out of range")))
        }
        Observable::Component(i) if i == 0 || i > n => {
            return Err(Error::InvalidArgument(format!("observable {i} out of range")))
        }
        _ => {}
    }
    let steps = (cfg.horizon / cfg.step).round() as usize;
    let mut x = initial_vector(n, &cfg.initial_state)?;
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        observable: Vec::with_capacity(steps + 1),
    };
    for k in 0..=steps {
        if k > 0 {
            x = rk4_step(l, &x, cfg.step);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "state overflowed at t = {}",
                    k as f64 * cfg.step
                )));
            }
        }
        traj.times.push(k as f64 * cfg.step);
        traj.observable.push(observe(cfg.observable, &x));
        traj.states.push(x.clone());
    }
    Ok(traj)
}

/// Relative level below which the detrended observable counts as settled.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Zero-crossing frequency estimate `π / mean spacing` of the observable
/// after subtracting its final value, or `None` with fewer than three
/// crossings. Samples after the signal falls below [`NOISE_FLOOR`] times its
/// peak are ignored.
pub fn dominant_frequency(t: &Trajectory) -> Option<f64> {
    let last = *t.observable.last()?;
    let s: Vec<f64> = t.observable.iter().map(|v| v - last).collect();
    let peak = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return None;
    }
    let end = s.iter().rposition(|v| v.abs() >= NOISE_FLOOR * peak)?;
    let crossings: Vec<f64> = (1..=end)
        .filter(|&k| (s[k - 1] > 0.0 && s[k] <= 0.0) || (s[k - 1] < 0.0 && s[k] >= 0.0))
        .filter(|&k| s[k] != 0.0 || s[k - 1] != 0.0)
        .map(|k| {
            let (t0, t1) = (t.times[k - 1], t.times[k]);
            t0 + (t1 - t0) * s[k - 1] / (s[k - 1] - s[k])
        })
        .collect();
    if crossings.len() < 3 {
        return None;
    }
    let spacing = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    Some(std::f64::consts::PI / spacing)
}

/// `‖x − mean(x)·1‖²` at each sample.
pub fn disagreement(t: &Trajectory) -> Vec<f64> {
    t.states
        .iter()
        .map(|x| {
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            x.iter().map(|v| (v - mean).powi(2)).sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub n: usize,
    pub mask: String,
    pub essentially_cyclic: bool,
    /// `|Im|` of the non-real eigenvalue with the smallest real part.
    pub predicted_frequency: Option<f64>,
    /// Real part of that eigenvalue.
    pub predicted_decay: Option<f64>,
    pub measured_frequency: Option<f64>,
    pub relative_deviation: Option<f64>,
}

pub fn oscillation_report(
    g: &RingDigraph,
    cfg: &SimConfig,
    rcfg: &RootFinderConfig,
) -> Result<OscillationReport> {
    let class = g.classify_exact();
    let roots = g.spectrum_numeric(rcfg)?;
    let slowest = roots
        .roots
        .iter()
        .filter(|z| z.im.abs() > rcfg.imag_threshold)
        .min_by(|a, b| a.re.total_cmp(&b.re));
    let traj = simulate(&g.laplacian().to_real(), cfg)?;
    let measured = dominant_frequency(&traj);
    let predicted = slowest.map(|z| z.im.abs());
    let relative_deviation = match (predicted, measured) {
        (Some(p), Some(m)) => Some((m - p).abs() / p),
        _ => None,
    };
    Ok(OscillationReport {
        n: g.n(),
        mask: g.mask_string(),
        essentially_cyclic: class.essentially_cyclic,
        predicted_frequency: predicted,
        predicted_decay: slowest.map(|z| z.re),
        measured_frequency: measured,
        relative_deviation,
    })
}
