//! Batch experiments behind the `ligcap` command-line tool.
//!
//! Every command writes CSV files whose leading `#` lines record the tool
//! version and the full parameter set, a matplotlib script that plots them, and
//! a refreshed `manifest.txt` with SHA-256 hashes of everything in the output
//! directory. Outputs depend only on the parameters and seed: rerunning a
//! command reproduces every file byte for byte, regardless of `--jobs`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::capacity_solver::{ideal_capacity, markov_capacity, CapacityResult, SolverConfig};
use crate::channel_model::{build_channel, mutual_information};
use crate::error::{Error, Result};
use crate::input_priors::{arcsine_cdf, arcsine_on_points, arcsine_pdf, discretize_arcsine};
use crate::receptor_dynamics::{
    independent_runs, p_from_pi1, simulate_ensemble, steady_state, EstimatorStats, ReceptorKinetics,
};

pub const TOOL_NAME: &str = "ligcap";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_NAME: &str = "manifest.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    Ideal,
    Markov,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ideal => "ideal",
            Model::Markov => "markov",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ideal" => Ok(Model::Ideal),
            "markov" => Ok(Model::Markov),
            other => Err(Error::Config(format!("unknown model `{other}` (expected ideal or markov)"))),
        }
    }
}

/// Parameters of a capacity sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub models: Vec<Model>,
    pub receptor_counts: Vec<usize>,
    /// Release probabilities for the Markov model; ignored for the ideal one.
    pub q_values: Vec<f64>,
    pub num_points: usize,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    /// Recorded in file headers; the solver itself is deterministic.
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Config("no model selected".into()));
        }
        if self.receptor_counts.is_empty() || self.receptor_counts.contains(&0) {
            return Err(Error::Config("receptor counts must be a nonempty list of positive integers".into()));
        }
        if self.models.contains(&Model::Markov) {
            if self.q_values.is_empty() {
                return Err(Error::Config("the markov model needs at least one q value".into()));
            }
            if let Some(q) = self.q_values.iter().find(|&&q| !(q > 0.0 && q <= 1.0)) {
                return Err(Error::Config(format!("q = {q} outside (0, 1]")));
            }
        }
        if self.num_points < 2 {
            return Err(Error::Config("grid needs at least 2 points".into()));
        }
        self.solver.validate()
    }

    /// One task per (model, N, q), in output order.
    fn tasks(&self) -> Vec<(Model, usize, Option<f64>)> {
        let mut tasks = Vec::new();
        for &model in &self.models {
            match model {
                Model::Ideal => tasks.extend(self.receptor_counts.iter().map(|&n| (model, n, None))),
                Model::Markov => {
                    for &q in &self.q_values {
                        tasks.extend(self.receptor_counts.iter().map(|&n| (model, n, Some(q))));
                    }
                }
            }
        }
        tasks
    }
}

/// One line of `capacity_vs_N.csv`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub model: Model,
    pub n: usize,
    pub q: Option<f64>,
    pub result: CapacityResult,
}

/// Files written by a command and whether its built-in checks passed.
#[derive(Debug, Clone, Default)]
pub struct CommandOutcome {
    pub files: Vec<PathBuf>,
    /// Every solver run met its tolerance.
    pub converged: bool,
    /// Statistical sanity checks (simulation only) passed.
    pub checks_passed: bool,
    pub summary: String,
}

fn solve(model: Model, n: usize, q: Option<f64>, num_points: usize, solver: &SolverConfig) -> Result<CapacityResult> {
    match model {
        Model::Ideal => ideal_capacity(n, num_points, solver),
        Model::Markov => {
            let q = q.ok_or_else(|| Error::Config("markov model needs q".into()))?;
            markov_capacity(n, q, num_points, solver)
        }
    }
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(work))
}

/// Solves every (model, N, q) combination of the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let tasks = spec.tasks();
    with_pool(spec.jobs, || {
        tasks
            .par_iter()
            .map(|&(model, n, q)| {
                let result = solve(model, n, q, spec.num_points, &spec.solver)?;
                Ok(SweepRow { model, n, q, result })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

fn join<T: fmt::Display>(values: &[T]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// `#`-prefixed metadata block shared by every CSV.
fn header(command: &str, seed: u64, params: &[(&str, String)]) -> String {
    let mut out = format!("# {TOOL_NAME} {TOOL_VERSION}\n# command={command}\n# seed={seed}\n");
    for (k, v) in params {
        let _ = writeln!(out, "# {k}={v}");
    }
    out
}

fn solver_params(solver: &SolverConfig, num_points: usize) -> Vec<(&'static str, String)> {
    vec![
        ("grid", num_points.to_string()),
        ("tol", format!("{:e}", solver.tolerance_bits)),
        ("max_iter", solver.max_iterations.to_string()),
        ("polish", solver.polish.to_string()),
    ]
}

fn write_file(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

/// `capacity-sweep`: capacity versus N, one curve per (model, q).
pub fn cmd_capacity_sweep(spec: &SweepSpec) -> Result<CommandOutcome> {
    let rows = run_sweep(spec)?;
    let mut params = vec![
        ("models", join(&spec.models)),
        ("receptor_counts", join(&spec.receptor_counts)),
        ("q_values", join(&spec.q_values)),
    ];
    params.extend(solver_params(&spec.solver, spec.num_points));
    let mut csv = header("capacity-sweep", spec.seed, &params);
    csv.push_str("model,N,q,capacity_bits,bound_gap_bits,iterations,num_points,converged\n");
    for row in &rows {
        let q = row.q.map(|q| q.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{:e},{},{},{}",
            row.model,
            row.n,
            q,
            row.result.capacity_bits,
            row.result.bound_gap_bits,
            row.result.iterations,
            spec.num_points,
            row.result.converged()
        );
    }

    let mut files = Vec::new();
    write_file(&spec.output_dir, "capacity_vs_N.csv", &csv, &mut files)?;
    write_file(&spec.output_dir, "plot_capacity_vs_N.py", CAPACITY_PLOT, &mut files)?;
    write_manifest(&spec.output_dir)?;

    let converged = rows.iter().all(|r| r.result.converged());
    let unconverged = rows.iter().filter(|r| !r.result.converged()).count();
    Ok(CommandOutcome {
        files,
        converged,
        checks_passed: true,
        summary: format!("{} runs, {} unconverged", rows.len(), unconverged),
    })
}

/// Parameters of `dist`.
#[derive(Debug, Clone)]
pub struct DistSpec {
    pub model: Model,
    pub n: usize,
    pub q: Option<f64>,
    pub num_points: usize,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    /// Recorded in file headers; the solver itself is deterministic.
    pub seed: u64,
}

pub fn distribution_file_name(model: Model, n: usize, q: Option<f64>) -> String {
    match (model, q) {
        (Model::Markov, Some(q)) => format!("dist_markov_N{n}_q{q}.csv"),
        _ => format!("dist_{model}_N{n}.csv"),
    }
}

/// `dist`: the capacity-achieving input distribution for one (model, N, q).
pub fn cmd_optimal_distribution(spec: &DistSpec) -> Result<(CommandOutcome, CapacityResult)> {
    spec.solver.validate()?;
    if spec.model == Model::Markov && spec.q.is_none() {
        return Err(Error::Config("the markov model needs --q".into()));
    }
    let result = solve(spec.model, spec.n, spec.q, spec.num_points, &spec.solver)?;
    let q = if spec.model == Model::Markov { spec.q } else { None };

    let mut params = vec![
        ("model", spec.model.to_string()),
        ("N", spec.n.to_string()),
        ("q", q.map(|q| q.to_string()).unwrap_or_default()),
    ];
    params.extend(solver_params(&spec.solver, spec.num_points));
    params.push(("capacity_bits", result.capacity_bits.to_string()));
    params.push(("bound_gap_bits", format!("{:e}", result.bound_gap_bits)));
    params.push(("converged", result.converged().to_string()));
    let mut csv = header("dist", spec.seed, &params);
    let grid = &result.optimal_input;
    match q {
        Some(q) => {
            csv.push_str("point,mass,p\n");
            for (&x, &m) in grid.points().iter().zip(grid.masses()) {
                let _ = writeln!(csv, "{x},{m},{}", p_from_pi1(x, q)?);
            }
        }
        None => {
            csv.push_str("point,mass\n");
            for (&x, &m) in grid.points().iter().zip(grid.masses()) {
                let _ = writeln!(csv, "{x},{m}");
            }
        }
    }

    let mut files = Vec::new();
    let name = distribution_file_name(spec.model, spec.n, q);
    write_file(&spec.output_dir, &name, &csv, &mut files)?;
    write_file(&spec.output_dir, "plot_dist.py", DIST_PLOT, &mut files)?;
    write_manifest(&spec.output_dir)?;
    let outcome = CommandOutcome {
        files,
        converged: result.converged(),
        checks_passed: true,
        summary: format!("capacity {} bits (gap {:e})", result.capacity_bits, result.bound_gap_bits),
    };
    Ok((outcome, result))
}

/// Arcsine mutual information against solver capacity on one grid.
#[derive(Debug, Clone)]
pub struct JeffreysComparison {
    pub n: usize,
    pub arcsine_bits: f64,
    pub capacity: CapacityResult,
}

impl JeffreysComparison {
    pub fn gap_bits(&self) -> f64 {
        self.capacity.capacity_bits - self.arcsine_bits
    }
}

/// Solves the ideal channel on a `num_points` grid and evaluates the arcsine
/// prior, carried by the same points, on it.
pub fn compare_jeffreys(n: usize, num_points: usize, solver: &SolverConfig) -> Result<JeffreysComparison> {
    let capacity = ideal_capacity(n, num_points, solver)?;
    let prior = arcsine_on_points(capacity.optimal_input.points())?;
    let channel = build_channel(&prior, n)?;
    let arcsine_bits = mutual_information(&prior, &channel)?;
    Ok(JeffreysComparison { n, arcsine_bits, capacity })
}

#[derive(Debug, Clone)]
pub struct JeffreysSpec {
    pub num_points: usize,
    pub compare: Vec<usize>,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    /// Recorded in file headers; the solver itself is deterministic.
    pub seed: u64,
    pub jobs: usize,
}

/// `jeffreys`: arcsine density and cell masses, optionally compared with capacity.
pub fn cmd_jeffreys(spec: &JeffreysSpec) -> Result<CommandOutcome> {
    if spec.num_points < 2 {
        return Err(Error::Config("grid needs at least 2 points".into()));
    }
    if spec.compare.contains(&0) {
        return Err(Error::Config("receptor counts must be positive".into()));
    }
    spec.solver.validate()?;
    let prior = discretize_arcsine(spec.num_points)?;
    let width = 1.0 / spec.num_points as f64;
    let mut params = vec![("grid", spec.num_points.to_string())];
    let mut csv = header("jeffreys", spec.seed, &params);
    csv.push_str("point,cell_lo,cell_hi,density,mass,cdf_hi\n");
    for (k, (&x, &m)) in prior.points().iter().zip(prior.masses()).enumerate() {
        let lo = k as f64 * width;
        let hi = (k + 1) as f64 * width;
        let _ = writeln!(csv, "{x},{lo},{hi},{},{m},{}", arcsine_pdf(x)?, arcsine_cdf(hi));
    }

    let mut files = Vec::new();
    write_file(&spec.output_dir, "jeffreys_arcsine.csv", &csv, &mut files)?;

    let mut converged = true;
    let mut summary = format!("total mass {}", prior.masses().iter().sum::<f64>());
    if !spec.compare.is_empty() {
        let rows = with_pool(spec.jobs, || {
            spec.compare
                .par_iter()
                .map(|&n| compare_jeffreys(n, spec.num_points, &spec.solver))
                .collect::<Result<Vec<_>>>()
        })??;
        params.push(("compare", join(&spec.compare)));
        params.extend(solver_params(&spec.solver, spec.num_points).into_iter().skip(1));
        let mut cmp = header("jeffreys", spec.seed, &params);
        cmp.push_str("N,arcsine_mi_bits,capacity_bits,gap_bits,bound_gap_bits,converged\n");
        for row in &rows {
            let _ = writeln!(
                cmp,
                "{},{},{},{},{:e},{}",
                row.n,
                row.arcsine_bits,
                row.capacity.capacity_bits,
                row.gap_bits(),
                row.capacity.bound_gap_bits,
                row.capacity.converged()
            );
            converged &= row.capacity.converged();
        }
        write_file(&spec.output_dir, "jeffreys_compare.csv", &cmp, &mut files)?;
        let worst = rows.iter().map(JeffreysComparison::gap_bits).fold(0.0, f64::max);
        let _ = write!(summary, ", largest capacity gap {worst} bits");
    }
    write_file(&spec.output_dir, "plot_jeffreys.py", JEFFREYS_PLOT, &mut files)?;
    write_manifest(&spec.output_dir)?;
    Ok(CommandOutcome { files, converged, checks_passed: true, summary })
}

#[derive(Debug, Clone)]
pub struct SimulateSpec {
    pub p: f64,
    pub q: f64,
    pub n: usize,
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    /// Also export the occupancy trace of the run on stream 0.
    pub trace: bool,
    pub output_dir: PathBuf,
    pub jobs: usize,
}

/// Aggregate of `simulate` against the steady-state analysis.
#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub estimates: Vec<f64>,
    pub stats: EstimatorStats,
    pub pi1: f64,
    /// `pi1 (1 - pi1) / N`
    pub expected_variance: f64,
    pub mean_ok: bool,
    pub variance_ok: bool,
}

/// Runs `trials` independent ensembles and checks the final-step occupancy
/// fractions against `pi1` and `pi1 (1 - pi1) / N` at four standard errors.
pub fn run_simulation(spec: &SimulateSpec) -> Result<SimulationReport> {
    let kinetics = ReceptorKinetics::new(spec.p, spec.q)?;
    // Ensembles start empty, so with p = 0 they stay empty whatever q is.
    let pi1 = if spec.p == 0.0 { 0.0 } else { steady_state(&kinetics)?.1 };
    if spec.n == 0 || spec.steps == 0 || spec.trials == 0 {
        return Err(Error::Config("N, steps and trials must be positive".into()));
    }
    let estimates =
        with_pool(spec.jobs, || independent_runs(&kinetics, spec.n, spec.steps, spec.trials, spec.seed))??;
    let stats = EstimatorStats::from_fractions(&estimates)?;
    let expected_variance = pi1 * (1.0 - pi1) / spec.n as f64;
    let t = spec.trials as f64;
    let mean_ok = (stats.sample_mean - pi1).abs() <= 4.0 * (expected_variance / t).sqrt();
    let variance_ok = if spec.trials < 2 {
        true
    } else if expected_variance == 0.0 {
        stats.sample_variance == 0.0
    } else {
        // normal-theory standard error of a sample variance
        let se = expected_variance * (2.0 / (t - 1.0)).sqrt();
        (stats.sample_variance - expected_variance).abs() <= 4.0 * se
    };
    Ok(SimulationReport { estimates, stats, pi1, expected_variance, mean_ok, variance_ok })
}

pub fn simulation_file_name(spec: &SimulateSpec) -> String {
    format!("simulate_p{}_q{}_N{}.csv", spec.p, spec.q, spec.n)
}

/// `simulate`: per-trial occupancy estimates plus aggregate rows.
pub fn cmd_simulate(spec: &SimulateSpec) -> Result<(CommandOutcome, SimulationReport)> {
    let report = run_simulation(spec)?;
    let params = [
        ("p", spec.p.to_string()),
        ("q", spec.q.to_string()),
        ("N", spec.n.to_string()),
        ("steps", spec.steps.to_string()),
        ("trials", spec.trials.to_string()),
    ];
    let mut csv = header("simulate", spec.seed, &params);
    csv.push_str("record,trial,estimate,analytic,within_4sigma\n");
    for (k, e) in report.estimates.iter().enumerate() {
        let _ = writeln!(csv, "trial,{k},{e},{},", report.pi1);
    }
    let _ = writeln!(csv, "mean,,{},{},{}", report.stats.sample_mean, report.pi1, report.mean_ok);
    let _ = writeln!(
        csv,
        "variance,,{},{},{}",
        report.stats.sample_variance, report.expected_variance, report.variance_ok
    );

    let mut files = Vec::new();
    write_file(&spec.output_dir, &simulation_file_name(spec), &csv, &mut files)?;
    if spec.trace {
        let kinetics = ReceptorKinetics::new(spec.p, spec.q)?;
        let trace = simulate_ensemble(&kinetics, spec.n, spec.steps, spec.seed)?;
        let mut out = header("simulate", spec.seed, &params).into_bytes();
        trace.write_csv(&mut out)?;
        let name = format!("trace_p{}_q{}_N{}.csv", spec.p, spec.q, spec.n);
        write_file(&spec.output_dir, &name, &String::from_utf8_lossy(&out), &mut files)?;
    }
    write_file(&spec.output_dir, "plot_simulate.py", SIMULATE_PLOT, &mut files)?;
    write_manifest(&spec.output_dir)?;
    let outcome = CommandOutcome {
        files,
        converged: true,
        checks_passed: report.mean_ok && report.variance_ok,
        summary: format!(
            "mean {} vs pi1 {}; variance {} vs {}",
            report.stats.sample_mean, report.pi1, report.stats.sample_variance, report.expected_variance
        ),
    };
    Ok((outcome, report))
}

/// Rewrites `manifest.txt`: one `sha256  name` line per file in `dir`, sorted by name.
pub fn write_manifest(dir: &Path) -> Result<PathBuf> {
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().map(|t| t.is_file()).unwrap_or(false))
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|n| n != MANIFEST_NAME)
        .collect();
    names.sort();
    let mut out = String::new();
    for name in names {
        let digest = Sha256::digest(fs::read(dir.join(&name))?);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        let _ = writeln!(out, "{hex}  {name}");
    }
    let path = dir.join(MANIFEST_NAME);
    fs::write(&path, out)?;
    Ok(path)
}

/// Parses a `key = value` config file; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        map.insert(key.replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}

/// Parses a comma-separated list such as `1,2,4` or `0.2, 0.5`.
pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Config(format!("cannot parse list item `{s}`"))))
        .collect()
}

const CAPACITY_PLOT: &str = r##"# Plots capacity_vs_N.csv: capacity versus receptor count, one curve per (model, q).
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "capacity_vs_N.csv"
with open(path) as f:
    rows = list(csv.DictReader(line for line in f if not line.startswith("#")))
curves = defaultdict(list)
for r in rows:
    label = r["model"] if not r["q"] else f'{r["model"]} q={r["q"]}'
    curves[label].append((int(r["N"]), float(r["capacity_bits"])))
for label, pts in sorted(curves.items()):
    pts.sort()
    plt.plot([n for n, _ in pts], [c for _, c in pts], marker="o", label=label)
plt.xscale("log", base=2)
plt.xlabel("number of receptors N")
plt.ylabel("capacity (bits per channel use)")
plt.legend()
plt.grid(True, alpha=0.3)
plt.savefig(path.replace(".csv", ".png"), dpi=150)
"##;

const DIST_PLOT: &str = r##"# Plots a dist_*.csv file: optimal input masses (and their image in p for markov runs).
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1]
with open(path) as f:
    rows = list(csv.DictReader(line for line in f if not line.startswith("#")))
x = [float(r["point"]) for r in rows]
m = [float(r["mass"]) for r in rows]
cols = 2 if "p" in rows[0] else 1
fig, axes = plt.subplots(1, cols, figsize=(5 * cols, 4), squeeze=False)
axes[0][0].stem(x, m)
axes[0][0].set_xlabel("input (occupancy probability)")
axes[0][0].set_ylabel("mass")
if cols == 2:
    axes[0][1].stem([float(r["p"]) for r in rows], m)
    axes[0][1].set_xlabel("binding probability p")
fig.tight_layout()
fig.savefig(path.replace(".csv", ".png"), dpi=150)
"##;

const JEFFREYS_PLOT: &str = r##"# Plots jeffreys_arcsine.csv (density) and jeffreys_compare.csv if present.
import csv
import os

import matplotlib.pyplot as plt


def load(path):
    with open(path) as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))


rows = load("jeffreys_arcsine.csv")
plt.plot([float(r["point"]) for r in rows], [float(r["density"]) for r in rows])
plt.xlabel("p")
plt.ylabel("arcsine density")
plt.savefig("jeffreys_arcsine.png", dpi=150)
if os.path.exists("jeffreys_compare.csv"):
    plt.figure()
    cmp = load("jeffreys_compare.csv")
    n = [int(r["N"]) for r in cmp]
    plt.plot(n, [float(r["capacity_bits"]) for r in cmp], marker="o", label="capacity")
    plt.plot(n, [float(r["arcsine_mi_bits"]) for r in cmp], marker="s", label="arcsine prior")
    plt.xscale("log", base=2)
    plt.xlabel("N")
    plt.ylabel("bits")
    plt.legend()
    plt.savefig("jeffreys_compare.png", dpi=150)
"##;

const SIMULATE_PLOT: &str = r##"# Histogram of per-trial occupancy estimates from a simulate_*.csv file.
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1]
with open(path) as f:
    rows = list(csv.DictReader(line for line in f if not line.startswith("#")))
est = [float(r["estimate"]) for r in rows if r["record"] == "trial"]
pi1 = float(next(r["analytic"] for r in rows if r["record"] == "mean"))
plt.hist(est, bins=30)
plt.axvline(pi1, color="k", linestyle="--", label="steady state")
plt.xlabel("occupancy fraction")
plt.legend()
plt.savefig(path.replace(".csv", ".png"), dpi=150)
"##;
