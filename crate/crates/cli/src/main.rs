//! `ringspec`: command-line front end.
//!
//! Verdicts and spectra are printed as JSON, grids and trajectories as CSV.
//! Exit status is 0 on success, 1 when an analysis is ambiguous or the exact
//! and numeric pipelines disagree, and 2 on invalid input.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use ringspec::arborescence::{count_by_cofactor, t_closed_form};
use ringspec::dynamics::{simulate, InitialState, SimConfig};
use ringspec::ringgraph::ClassificationRecord;
use ringspec::rootfind::multiset_distance;
use ringspec::weighted::{
    c4_scan, fig6_boundary, k3_classify, k3_discriminant, numeric_cyclic, uniform_grid,
    WeightMatrix,
};
use ringspec::{Complex64, RingDigraph, RootFinderConfig};

#[derive(Parser)]
#[command(name = "ringspec", version, about = "Essential cyclicity of ring digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide essential cyclicity of one ring digraph.
    Classify {
        #[command(flatten)]
        ring: RingArgs,
        /// Also run the numeric oracle and report agreement.
        #[arg(long)]
        numeric: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the Laplacian spectrum.
    Spectrum {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Compare exact and numeric verdicts on every mask for a range of n.
    Scan {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Spread the work over threads (capped by RINGSPEC_THREADS).
        #[arg(long)]
        parallel: bool,
    },
    /// Count spanning converging trees.
    Trees {
        n: usize,
        /// Mask string; omit it and pass --i for the two-gap closed form.
        mask: Option<String>,
        #[arg(long, conflicts_with = "mask")]
        i: Option<u64>,
    },
    /// Small weighted digraphs.
    #[command(subcommand)]
    Weighted(Weighted),
    /// Integrate the consensus dynamics x' = -Lx and print the trajectory.
    Simulate {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 60.0)]
        horizon: f64,
        /// `e<k>` for a unit vector, `random:<seed>`, or comma-separated values.
        #[arg(long, default_value = "e1")]
        x0: String,
    },
}

#[derive(Args)]
struct RingArgs {
    n: usize,
    /// One character per position: '1' if the reverse arc is present.
    mask: String,
}

impl RingArgs {
    fn digraph(&self) -> Result<RingDigraph, Failure> {
        Ok(RingDigraph::from_mask_str(self.n, &self.mask)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Numeric,
    Both,
}

#[derive(Subcommand)]
enum Weighted {
    /// Complete digraph on three vertices, weights given as a 3×3 JSON matrix.
    K3 {
        #[arg(long)]
        weights: String,
    },
    /// The y-interval of essential cyclicity of the four-vertex family.
    Fig6 {
        #[arg(long)]
        p: f64,
    },
    /// Grid scan of the weighted 4-cycle with weights 4, 9, a, x.
    C4 {
        #[arg(long, default_value_t = 12.0)]
        a_max: f64,
        #[arg(long, default_value_t = 12.0)]
        x_max: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
}

enum Failure {
    Ambiguous(String),
    Invalid(String),
}

impl From<ringspec::Error> for Failure {
    fn from(e: ringspec::Error) -> Self {
        match e {
            ringspec::Error::Ambiguous { .. } | ringspec::Error::NotConverged { .. } => {
                Failure::Ambiguous(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("output error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Invalid(format!("output error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify { ring, numeric, json } => classify(&ring, numeric, json),
        Command::Spectrum { ring, method } => spectrum(&ring, method),
        Command::Scan { n_min, n_max, parallel } => scan(n_min, n_max, parallel),
        Command::Trees { n, mask, i } => trees(n, mask.as_deref(), i),
        Command::Weighted(w) => weighted(w),
        Command::Simulate { ring, step, horizon, x0 } => simulate_cmd(&ring, step, horizon, &x0),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Ambiguous(msg)) => {
            eprintln!("ringspec: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("ringspec: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let s = serde_json::to_string(value).map_err(|e| Failure::Invalid(e.to_string()))?;
    writeln!(io::stdout().lock(), "{s}")?;
    Ok(())
}

fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

/// Rounds to 9 significant digits and prints the shortest form of the result.
fn sig9(v: f64) -> String {
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    format!("{rounded}")
}

#[derive(Serialize)]
struct ClassifyOutput {
    #[serde(flatten)]
    record: ClassificationRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric_essentially_cyclic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

fn classify(ring: &RingArgs, numeric: bool, json: bool) -> CmdResult {
    let g = ring.digraph()?;
    let cfg = RootFinderConfig::default();
    let record = g.record(&cfg)?;
    let numeric_verdict = if numeric {
        Some(g.numeric_verdict(&cfg)?)
    } else {
        None
    };
    let agrees = numeric_verdict.map(|v| v == record.essentially_cyclic);
    if json {
        print_json(&ClassifyOutput { record, numeric_essentially_cyclic: numeric_verdict, agrees })?;
    } else {
        let mut out = io::stdout().lock();
        writeln!(
            out,
            "{g}: {} ({}), K = {}, gaps = {:?}",
            if record.essentially_cyclic { "essentially cyclic" } else { "real spectrum" },
            record.case,
            record.k,
            record.gaps
        )?;
        if let Some(v) = numeric_verdict {
            writeln!(
                out,
                "numeric oracle: {} ({})",
                if v { "essentially cyclic" } else { "real spectrum" },
                if agrees == Some(true) { "agrees" } else { "DISAGREES" }
            )?;
        }
    }
    if agrees == Some(false) {
        return Err(Failure::Ambiguous(format!("exact and numeric verdicts differ for {g}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumOutput {
    n: usize,
    mask: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    char_poly: Option<ringspec::IntPolynomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<Option<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<f64>,
}

fn spectrum(ring: &RingArgs, method: Method) -> CmdResult {
    let g = ring.digraph()?;
    let exact = matches!(method, Method::Exact | Method::Both);
    let numeric = matches!(method, Method::Numeric | Method::Both);
    let closed = if exact { Some(g.closed_form_spectrum()) } else { None };
    let roots = if numeric {
        let set = g.spectrum_numeric(&RootFinderConfig::default())?;
        if !set.converged {
            return Err(Failure::Ambiguous(format!("root finder did not converge for {g}")));
        }
        Some(set)
    } else {
        None
    };
    let distance = match (&closed, &roots) {
        (Some(Some(c)), Some(r)) => multiset_distance(c, &r.roots),
        _ => None,
    };
    print_json(&SpectrumOutput {
        n: g.n(),
        mask: g.mask_string(),
        char_poly: exact.then(|| g.char_poly()),
        closed_form: closed.map(|c| c.as_deref().map(pairs)),
        numeric: roots.as_ref().map(|r| pairs(&r.roots)),
        residuals: roots.map(|r| r.residuals),
        distance,
    })
}

enum ScanOutcome {
    Agree,
    Disagree { exact: bool, numeric: bool },
    Ambiguous(String),
}

fn scan_one(g: &RingDigraph, cfg: &RootFinderConfig) -> ScanOutcome {
    let exact = g.classify_exact().essentially_cyclic;
    match g.numeric_verdict(cfg) {
        Ok(numeric) if numeric == exact => ScanOutcome::Agree,
        Ok(numeric) => ScanOutcome::Disagree { exact, numeric },
        Err(e) => ScanOutcome::Ambiguous(e.to_string()),
    }
}

fn thread_cap() -> Result<usize, Failure> {
    match std::env::var("RINGSPEC_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::Invalid(format!("RINGSPEC_THREADS must be a nonnegative integer, got {s:?}"))
        }),
    }
}

fn scan(n_min: usize, n_max: usize, parallel: bool) -> CmdResult {
    if n_min < 3 || n_max < n_min || n_max > 24 {
        return Err(Failure::Invalid(format!(
            "need 3 <= n-min <= n-max <= 24, got {n_min}..{n_max}"
        )));
    }
    // masks in (n, mask string) order
    let mut instances: Vec<RingDigraph> = Vec::new();
    for n in n_min..=n_max {
        let mut batch: Vec<RingDigraph> = (0u32..1 << n)
            .map(|bits| RingDigraph::new((0..n).map(|j| bits >> j & 1 == 1).collect()))
            .collect::<Result<_, _>>()?;
        batch.sort_by_key(|g| g.mask_string());
        instances.extend(batch);
    }
    let cfg = RootFinderConfig::default();
    let outcomes: Vec<ScanOutcome> = if parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(thread_cap()?)
            .build()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
        pool.install(|| instances.par_iter().map(|g| scan_one(g, &cfg)).collect())
    } else {
        instances.iter().map(|g| scan_one(g, &cfg)).collect()
    };

    let mut out = io::stdout().lock();
    let mut bad = 0;
    for (g, o) in instances.iter().zip(&outcomes) {
        match o {
            ScanOutcome::Agree => {}
            ScanOutcome::Disagree { exact, numeric } => {
                bad += 1;
                writeln!(out, "disagreement {g}: exact {exact}, numeric {numeric}")?;
            }
            ScanOutcome::Ambiguous(msg) => {
                bad += 1;
                writeln!(out, "ambiguous {g}: {msg}")?;
            }
        }
    }
    writeln!(out, "{bad} disagreements over {} instances", instances.len())?;
    if bad > 0 {
        return Err(Failure::Ambiguous(format!("{bad} instances failed")));
    }
    Ok(())
}

#[derive(Serialize)]
struct TreesOutput {
    n: usize,
    mask: String,
    per_root: Vec<u64>,
    total: u64,
}

#[derive(Serialize)]
struct ClosedFormTrees {
    t: u64,
}

fn trees(n: usize, mask: Option<&str>, i: Option<u64>) -> CmdResult {
    match (mask, i) {
        (Some(mask), None) => {
            let g = RingDigraph::from_mask_str(n, mask)?;
            let c = count_by_cofactor(&g.laplacian())?;
            print_json(&TreesOutput { n, mask: g.mask_string(), per_root: c.per_root, total: c.total })
        }
        (None, Some(i)) => print_json(&ClosedFormTrees { t: t_closed_form(n as u64, i)? }),
        _ => Err(Failure::Invalid("give either a mask or --i".into())),
    }
}

#[derive(Serialize)]
struct K3Output {
    discriminant: f64,
    essentially_cyclic: bool,
    numeric_essentially_cyclic: bool,
}

#[derive(Serialize)]
struct BoundaryOutput {
    boundary: [f64; 2],
}

fn weighted(cmd: Weighted) -> CmdResult {
    match cmd {
        Weighted::K3 { weights } => {
            let rows: Vec<Vec<f64>> = serde_json::from_str(&weights)
                .map_err(|e| Failure::Invalid(format!("--weights: {e}")))?;
            let w = WeightMatrix::new(rows)?;
            print_json(&K3Output {
                discriminant: k3_discriminant(&w)?,
                essentially_cyclic: k3_classify(&w)?,
                numeric_essentially_cyclic: numeric_cyclic(&w, &RootFinderConfig::default())?,
            })
        }
        Weighted::Fig6 { p } => {
            let (lo, hi) = fig6_boundary(p)?;
            print_json(&BoundaryOutput { boundary: [lo, hi] })
        }
        Weighted::C4 { a_max, x_max, steps } => {
            if steps == 0 || !(a_max.is_finite() && x_max.is_finite()) {
                return Err(Failure::Invalid("need steps >= 1 and finite maxima".into()));
            }
            let samples = c4_scan(&uniform_grid(a_max, steps), &uniform_grid(x_max, steps))?;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["sqrt_a", "sqrt_x", "discriminant", "cyclic", "triangle_ok"])?;
            for s in samples {
                w.write_record([
                    sig9(s.a.sqrt()),
                    sig9(s.x.sqrt()),
                    sig9(s.discriminant),
                    s.essentially_cyclic.to_string(),
                    s.triangle_ok.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn parse_x0(s: &str) -> Result<InitialState, Failure> {
    let bad = || Failure::Invalid(format!("cannot parse --x0 {s:?}"));
    if let Some(k) = s.strip_prefix('e') {
        return k.parse().map(InitialState::Basis).map_err(|_| bad());
    }
    if let Some(seed) = s.strip_prefix("random:") {
        return seed.parse().map(|seed| InitialState::Random { seed }).map_err(|_| bad());
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map(InitialState::Vector)
        .map_err(|_| bad())
}

fn simulate_cmd(ring: &RingArgs, step: f64, horizon: f64, x0: &str) -> CmdResult {
    let g = ring.digraph()?;
    let cfg = SimConfig {
        step,
        horizon,
        initial_state: parse_x0(x0)?,
        ..SimConfig::default()
    };
    let traj = simulate(&g.laplacian().to_real(), &cfg)?;
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=g.n()).map(|i| format!("x_{i}")))
        .collect();
    w.write_record(&header)?;
    for (t, x) in traj.times.iter().zip(&traj.states) {
        w.write_record(std::iter::once(sig9(*t)).chain(x.iter().map(|v| sig9(*v))))?;
    }
    w.flush()?;
    Ok(())
}
