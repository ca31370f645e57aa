//! `ligcap`: capacity sweeps, optimal inputs, arcsine priors and receptor simulations.
//!
//! Exit status: 0 ok, 1 I/O failure, 2 usage error, 3 solver non-convergence,
//! 4 statistical sanity check failed.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use receptor_capacity::experiments::{
    cmd_capacity_sweep, cmd_jeffreys, cmd_optimal_distribution, cmd_simulate, parse_config, parse_list,
    CommandOutcome, DistSpec, JeffreysSpec, Model, SimulateSpec, SweepSpec,
};
use receptor_capacity::{Error, SolverConfig};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_STATISTICS: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ligcap", version, about = "Information capacity of ligand-receptor channels")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Input grid size
    #[arg(long, global = true, value_name = "POINTS")]
    grid: Option<usize>,
    /// Stopping tolerance on the capacity bound gap, in bits
    #[arg(long, global = true, value_name = "BITS")]
    tol: Option<f64>,
    #[arg(long, global = true, value_name = "K")]
    max_iter: Option<usize>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, value_name = "J")]
    jobs: Option<usize>,
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// key = value file supplying defaults; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity versus receptor count
    CapacitySweep {
        /// Comma-separated models: ideal, markov
        #[arg(long)]
        model: Option<String>,
        /// Comma-separated receptor counts
        #[arg(long = "n", short = 'N')]
        n: Option<String>,
        /// Comma-separated release probabilities (markov only)
        #[arg(long)]
        q: Option<String>,
    },
    /// Capacity-achieving input distribution
    Dist {
        #[arg(long)]
        model: Option<String>,
        #[arg(long = "n", short = 'N')]
        n: Option<String>,
        #[arg(long)]
        q: Option<String>,
    },
    /// Arcsine prior, optionally compared against capacity
    Jeffreys {
        /// Comma-separated receptor counts to compare at
        #[arg(long)]
        compare: Option<String>,
    },
    /// Monte Carlo runs of the two-state receptor ensemble
    Simulate {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long = "n", short = 'N')]
        n: Option<String>,
        #[arg(long)]
        steps: Option<String>,
        #[arg(long)]
        trials: Option<String>,
        /// Also export the occupancy trace of the first trial
        #[arg(long)]
        trace: bool,
    },
}

/// Flags layered over config-file values.
struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    fn set<T: ToString>(&mut self, key: &str, flag: Option<T>) {
        if let Some(v) = flag {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, Error> {
        match self.values.get(key) {
            Some(raw) => raw
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("invalid value `{raw}` for {key}"))),
            None => Ok(default),
        }
    }

    fn list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, Error> {
        match self.values.get(key) {
            Some(raw) => parse_list(raw),
            None => Ok(default.to_vec()),
        }
    }

    fn solver(&self) -> Result<SolverConfig, Error> {
        let base = SolverConfig::default();
        Ok(SolverConfig {
            tolerance_bits: self.get("tol", base.tolerance_bits)?,
            max_iterations: self.get("max_iter", base.max_iterations)?,
            ..base
        })
    }
}

const KNOWN_KEYS: &[&str] = &[
    "out", "grid", "tol", "max_iter", "jobs", "seed", "model", "n", "q", "p", "steps", "trials", "compare", "trace",
];

fn settings(common: &Common) -> Result<Settings, Error> {
    let values = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    if let Some(key) = values.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(Error::Config(format!("unknown config key `{key}`")));
    }
    let mut s = Settings { values };
    s.set("out", common.out.as_ref().map(|p| p.display().to_string()));
    s.set("grid", common.grid);
    s.set("tol", common.tol);
    s.set("max_iter", common.max_iter);
    s.set("jobs", common.jobs);
    s.set("seed", common.seed);
    Ok(s)
}

fn run(cli: Cli) -> Result<CommandOutcome, Error> {
    let mut s = settings(&cli.common)?;
    let out = PathBuf::from(s.get("out", "results".to_string())?);
    let num_points = s.get("grid", 1025usize)?;
    let jobs = s.get("jobs", 0usize)?;
    let seed = s.get("seed", 0u64)?;

    match cli.command {
        Command::CapacitySweep { model, n, q } => {
            s.set("model", model);
            s.set("n", n);
            s.set("q", q);
            let spec = SweepSpec {
                models: s.list("model", &[Model::Ideal, Model::Markov])?,
                receptor_counts: s.list("n", &[1, 2, 4, 8, 16, 32, 64, 128])?,
                q_values: s.list("q", &[0.2, 0.5, 0.8])?,
                num_points,
                solver: s.solver()?,
                output_dir: out,
                seed,
                jobs,
            };
            cmd_capacity_sweep(&spec)
        }
        Command::Dist { model, n, q } => {
            s.set("model", model);
            s.set("n", n);
            s.set("q", q);
            let model: Model = s.get("model", Model::Ideal)?;
            let spec = DistSpec {
                model,
                n: s.get("n", 64)?,
                q: (model == Model::Markov).then(|| s.get("q", 0.5)).transpose()?,
                num_points,
                solver: s.solver()?,
                output_dir: out,
                seed,
            };
            cmd_optimal_distribution(&spec).map(|(o, _)| o)
        }
        Command::Jeffreys { compare } => {
            s.set("compare", compare);
            let spec = JeffreysSpec {
                num_points,
                compare: s.list("compare", &[])?,
                solver: s.solver()?,
                output_dir: out,
                seed,
                jobs,
            };
            cmd_jeffreys(&spec)
        }
        Command::Simulate { p, q, n, steps, trials, trace } => {
            s.set("p", p);
            s.set("q", q);
            s.set("n", n);
            s.set("steps", steps);
            s.set("trials", trials);
            if trace {
                s.set("trace", Some(true));
            }
            let spec = SimulateSpec {
                p: s.get("p", 0.3)?,
                q: s.get("q", 0.3)?,
                n: s.get("n", 1000)?,
                steps: s.get("steps", 1000)?,
                trials: s.get("trials", 200)?,
                seed,
                trace: s.get("trace", false)?,
                output_dir: out,
                jobs,
            };
            cmd_simulate(&spec).map(|(o, _)| o)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!("{}", outcome.summary);
            if !outcome.converged {
                eprintln!("ligcap: some solver runs did not reach the requested tolerance");
                ExitCode::from(EXIT_NOT_CONVERGED)
            } else if !outcome.checks_passed {
                eprintln!("ligcap: statistical sanity check failed");
                ExitCode::from(EXIT_STATISTICS)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("ligcap: {err}");
            match err {
                Error::Io(_) => ExitCode::from(EXIT_IO),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
