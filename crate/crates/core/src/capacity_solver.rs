//! Blahut-Arimoto capacity computation with certified bounds.
//!
//! For a channel with rows `P(. | x_j)` and current input masses `m`, let
//! `D_j = KL(P(. | x_j) || q)` where `q` is the induced output law. Then
//! `sum_j m_j D_j = I(m)` is a lower bound on capacity and `max_j D_j` an upper
//! bound. Each Blahut-Arimoto step reweights `m_j <- m_j exp(D_j) / Z`, which
//! never decreases the lower bound, and the run stops once the two bounds are
//! within the configured tolerance.
//!
//! On fine grids the plain iteration closes the gap only like `1/t`: the
//! optimal input is a handful of atoms, and mass lingering on grid neighbours
//! of each atom drains very slowly. The solver therefore periodically polishes
//! the current iterate: it takes the points still carrying mass, maximizes the
//! mutual information over that support with an active-set Newton method, and
//! certifies the result against every grid point, adding violators until the
//! bound gap closes. The polished iterate replaces the current one only if its
//! lower bound is at least as high, so the lower bound stays monotone.

use std::f64::consts::LN_2;

use nalgebra::{DMatrix, DVector};

use crate::channel_model::{build_channel, ObservationChannel, ProbabilityGrid, LOG_FLOOR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once `upper - lower` falls to this many bits.
    pub tolerance_bits: f64,
    pub max_iterations: usize,
    /// Masses at or below this are treated as zero when reporting support.
    /// Has no effect on the iteration itself.
    pub mass_floor: f64,
    /// Interleave support polishing with the plain iteration. Same fixed point
    /// and stopping rule; without it fine grids need millions of iterations.
    pub polish: bool,
    /// Keep the lower bound of every accepted iterate in the result.
    pub record_history: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance_bits: 1e-6,
            max_iterations: 100_000,
            mass_floor: 1e-9,
            polish: true,
            record_history: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance_bits > 0.0) {
            return Err(Error::Config(format!("tolerance {} must be positive", self.tolerance_bits)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.mass_floor >= 0.0) {
            return Err(Error::Config("mass_floor must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    /// `max_iterations` ran out with the bound gap still above tolerance.
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Certified lower bound on capacity, in bits.
    pub capacity_bits: f64,
    pub optimal_input: ProbabilityGrid,
    /// Blahut-Arimoto steps plus Newton steps performed.
    pub iterations: usize,
    /// Upper minus lower bound at termination, in bits.
    pub bound_gap_bits: f64,
    pub status: SolveStatus,
    /// Lower bound (bits) of every accepted iterate, in order, when requested.
    pub lower_bound_history: Option<Vec<f64>>,
}

impl CapacityResult {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn upper_bound_bits(&self) -> f64 {
        self.capacity_bits + self.bound_gap_bits
    }

    /// Largest grid point whose optimized mass exceeds `floor`.
    pub fn max_support_point(&self, floor: f64) -> Option<f64> {
        self.optimal_input
            .points()
            .iter()
            .zip(self.optimal_input.masses())
            .rev()
            .find(|(_, &m)| m > floor)
            .map(|(&x, _)| x)
    }
}

/// Plain iterations before the first polish attempt, and between attempts.
const POLISH_EVERY: usize = 500;
/// Seed atoms whose basin holds less mass than this are discarded.
const SEED_MASS_CUTOFF: f64 = 1e-10;

/// Runs Blahut-Arimoto starting from the grid's masses.
///
/// Points with zero initial mass stay at zero, so the caller's grid should be
/// strictly positive wherever optimal mass may sit.
pub fn blahut_arimoto(
    channel: &ObservationChannel,
    grid: &ProbabilityGrid,
    config: &SolverConfig,
) -> Result<CapacityResult> {
    config.validate()?;
    channel.check_matches(grid)?;

    let rows: Vec<usize> = (0..grid.len()).filter(|&j| grid.masses()[j] > 0.0).collect();
    let mut eval = Evaluator::new(channel, &rows);
    let mut log_masses: Vec<f64> = rows.iter().map(|&j| grid.masses()[j].ln()).collect();
    normalize_log(&mut log_masses);

    let mut history = config.record_history.then(Vec::new);
    let mut iterations = 0usize;
    let mut since_polish = 0usize;

    loop {
        let masses = exp_weights(&log_masses);
        let bounds = eval.evaluate(&masses);
        if let Some(h) = history.as_mut() {
            h.push(bounds.lower_bits());
        }
        let status = if bounds.gap_bits() <= config.tolerance_bits {
            Some(SolveStatus::Converged)
        } else if iterations >= config.max_iterations {
            Some(SolveStatus::MaxIterations)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(assemble(grid, &rows, masses, bounds, iterations, status, history));
        }

        if config.polish && since_polish >= POLISH_EVERY {
            since_polish = 0;
            let budget = config.max_iterations - iterations;
            let (polished, steps) = polish(&mut eval, &masses, config.tolerance_bits, budget);
            iterations += steps;
            let pbounds = eval.evaluate(&polished);
            if pbounds.lower >= bounds.lower {
                if pbounds.gap_bits() <= config.tolerance_bits {
                    if let Some(h) = history.as_mut() {
                        h.push(pbounds.lower_bits());
                    }
                    return Ok(assemble(
                        grid,
                        &rows,
                        polished,
                        pbounds,
                        iterations,
                        SolveStatus::Converged,
                        history,
                    ));
                }
                // I is concave, so this blend is at least as good as the
                // current iterate while keeping every point reachable.
                let blended: Vec<f64> =
                    polished.iter().zip(&masses).map(|(&a, &b)| 0.999 * a + 0.001 * b).collect();
                log_masses = blended.iter().map(|&m| m.ln()).collect();
                normalize_log(&mut log_masses);
                continue;
            }
        }

        // plain step: eval.divergence holds D_j for the current masses
        for (l, &d) in log_masses.iter_mut().zip(&eval.divergence) {
            *l += d - bounds.upper;
        }
        normalize_log(&mut log_masses);
        iterations += 1;
        since_polish += 1;
    }
}

fn assemble(
    grid: &ProbabilityGrid,
    rows: &[usize],
    active_masses: Vec<f64>,
    bounds: Bounds,
    iterations: usize,
    status: SolveStatus,
    history: Option<Vec<f64>>,
) -> CapacityResult {
    let mut masses = vec![0.0; grid.len()];
    for (&j, m) in rows.iter().zip(active_masses) {
        masses[j] = m;
    }
    CapacityResult {
        capacity_bits: bounds.lower_bits(),
        optimal_input: ProbabilityGrid::from_parts_unchecked(
            grid.points().to_vec(),
            masses,
            grid.support_max(),
        ),
        iterations,
        bound_gap_bits: bounds.gap_bits(),
        status,
        lower_bound_history: history,
    }
}

/// Lower and upper capacity bounds in nats.
#[derive(Debug, Clone, Copy)]
struct Bounds {
    lower: f64,
    upper: f64,
}

impl Bounds {
    fn lower_bits(&self) -> f64 {
        (self.lower / LN_2).max(0.0)
    }

    fn gap_bits(&self) -> f64 {
        ((self.upper - self.lower) / LN_2).max(0.0)
    }
}

/// Evaluates divergences and bounds on the rows that carry initial mass.
struct Evaluator<'a> {
    channel: &'a ObservationChannel,
    rows: &'a [usize],
    /// `sum_i P(i|x_j) ln P(i|x_j)`
    neg_entropy: Vec<f64>,
    output: Vec<f64>,
    ln_output: Vec<f64>,
    divergence: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(channel: &'a ObservationChannel, rows: &'a [usize]) -> Self {
        let neg_entropy = rows
            .iter()
            .map(|&j| channel.row(j).iter().filter(|&&k| k > 0.0).map(|&k| k * k.ln()).sum())
            .collect();
        Self {
            channel,
            rows,
            neg_entropy,
            output: vec![0.0; channel.num_outputs()],
            ln_output: vec![0.0; channel.num_outputs()],
            divergence: vec![0.0; rows.len()],
        }
    }

    fn row(&self, a: usize) -> &[f64] {
        self.channel.row(self.rows[a])
    }

    fn set_output(&mut self, masses: &[f64]) {
        self.output.iter_mut().for_each(|o| *o = 0.0);
        for (&j, &m) in self.rows.iter().zip(masses) {
            if m == 0.0 {
                continue;
            }
            for (o, &k) in self.output.iter_mut().zip(self.channel.row(j)) {
                *o += m * k;
            }
        }
        for (l, &o) in self.ln_output.iter_mut().zip(&self.output) {
            *l = o.max(LOG_FLOOR).ln();
        }
    }

    fn divergence_of(&self, a: usize) -> f64 {
        let cross: f64 = self.row(a).iter().zip(&self.ln_output).map(|(&k, &l)| k * l).sum();
        self.neg_entropy[a] - cross
    }

    /// Fills `divergence` for every row and returns the bounds.
    fn evaluate(&mut self, masses: &[f64]) -> Bounds {
        self.set_output(masses);
        for a in 0..self.rows.len() {
            self.divergence[a] = self.divergence_of(a);
        }
        let lower = masses.iter().zip(&self.divergence).map(|(&m, &d)| m * d).sum();
        let upper = self.divergence.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Bounds { lower, upper }
    }

    /// Mutual information (nats) of masses given only on `support`.
    fn information_on(&mut self, support: &[usize], masses: &[f64]) -> f64 {
        let mut full = vec![0.0; self.rows.len()];
        for (&a, &m) in support.iter().zip(masses) {
            full[a] = m;
        }
        self.set_output(&full);
        support.iter().zip(masses).filter(|(_, &m)| m > 0.0).map(|(&a, &m)| m * self.divergence_of(a)).sum()
    }
}

/// Support polish: Newton on the current support plus column generation.
///
/// Returns full-length masses (indexed like the evaluator rows) and the number
/// of Newton steps spent.
fn polish(eval: &mut Evaluator, masses: &[f64], tolerance_bits: f64, budget: usize) -> (Vec<f64>, usize) {
    let tol = tolerance_bits * LN_2;
    eval.evaluate(masses);
    let (mut support, mut weights) = seed_support(&eval.divergence, masses);
    let mut steps = 0;

    for _ in 0..64 {
        steps += newton_on_support(eval, &mut support, &mut weights, tol * 1e-3, budget.saturating_sub(steps));
        let mut full = vec![0.0; masses.len()];
        for (&a, &m) in support.iter().zip(&weights) {
            full[a] = m;
        }
        let bounds = eval.evaluate(&full);
        if bounds.upper - bounds.lower <= tol || steps >= budget {
            return (full, steps);
        }
        // bring in the strongest violators, one per local peak of D
        let d = &eval.divergence;
        let mut violators: Vec<usize> = (0..d.len())
            .filter(|&a| d[a] > bounds.lower + tol)
            .filter(|&a| (a == 0 || d[a] >= d[a - 1]) && (a + 1 == d.len() || d[a] >= d[a + 1]))
            .filter(|a| !support.contains(a))
            .collect();
        if violators.is_empty() {
            return (full, steps);
        }
        violators.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
        violators.truncate(8);
        for a in violators {
            let at = support.partition_point(|&s| s < a);
            support.insert(at, a);
            weights.insert(at, 0.0);
        }
    }
    let mut full = vec![0.0; masses.len()];
    for (&a, &m) in support.iter().zip(&weights) {
        full[a] = m;
    }
    (full, steps)
}

/// Candidate atoms for a polish: local peaks of `D`, each carrying the mass of
/// the grid points nearest to it.
fn seed_support(divergence: &[f64], masses: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let d = divergence;
    let last = d.len() - 1;
    let peaks: Vec<usize> = (0..d.len())
        .filter(|&a| (a == 0 || d[a] > d[a - 1]) && (a == last || d[a] >= d[a + 1]))
        .collect();
    let mut weights = vec![0.0; peaks.len()];
    let mut k = 0;
    for (a, &m) in masses.iter().enumerate() {
        while k + 1 < peaks.len() && peaks[k + 1].abs_diff(a) < peaks[k].abs_diff(a) {
            k += 1;
        }
        weights[k] += m;
    }
    let (support, weights): (Vec<usize>, Vec<f64>) =
        peaks.into_iter().zip(weights).filter(|(_, w)| *w > SEED_MASS_CUTOFF).unzip();
    let total: f64 = weights.iter().sum();
    (support, weights.into_iter().map(|w| w / total).collect())
}

/// Maximizes mutual information over masses on `support` (summing to one) by
/// Newton steps with an active set; points driven to zero mass are dropped.
fn newton_on_support(
    eval: &mut Evaluator,
    support: &mut Vec<usize>,
    weights: &mut Vec<f64>,
    kkt_tol: f64,
    budget: usize,
) -> usize {
    let mut steps = 0;
    while steps < budget.min(200) {
        let s = support.len();
        let current = eval.information_on(support, weights);
        let grad: Vec<f64> = support.iter().map(|&a| eval.divergence_of(a)).collect();
        let carried = support.iter().zip(weights.iter()).filter(|(_, &m)| m > 0.0);
        let lo = carried.clone().map(|(&a, _)| eval.divergence_of(a)).fold(f64::INFINITY, f64::min);
        let hi = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= kkt_tol {
            break;
        }

        // Hessian of I: -sum_i P(i|a) P(i|b) / q(i)
        let mut kkt = DMatrix::<f64>::zeros(s + 1, s + 1);
        let inv_q: Vec<f64> = eval.output.iter().map(|&o| if o > LOG_FLOOR { 1.0 / o } else { 0.0 }).collect();
        for x in 0..s {
            let rx = eval.row(support[x]);
            for y in x..s {
                let ry = eval.row(support[y]);
                let h: f64 = rx.iter().zip(ry).zip(&inv_q).map(|((&u, &v), &w)| u * v * w).sum();
                kkt[(x, y)] = -h;
                kkt[(y, x)] = -h;
            }
        }
        let scale = (0..s).map(|x| kkt[(x, x)].abs()).fold(0.0, f64::max).max(1.0);
        for x in 0..s {
            kkt[(x, x)] -= 1e-12 * scale;
            kkt[(x, s)] = 1.0;
            kkt[(s, x)] = 1.0;
        }
        let mut rhs = DVector::<f64>::zeros(s + 1);
        for x in 0..s {
            rhs[x] = -grad[x];
        }
        let Some(sol) = kkt.lu().solve(&rhs) else { break };
        let delta: Vec<f64> = (0..s).map(|x| sol[x]).collect();
        if delta.iter().any(|d| !d.is_finite()) {
            break;
        }
        // zero-mass candidates the step would push negative leave the support
        let leaving: Vec<usize> = (0..s).filter(|&x| weights[x] == 0.0 && delta[x] < 0.0).collect();
        if !leaving.is_empty() && leaving.len() < s {
            for &x in leaving.iter().rev() {
                support.remove(x);
                weights.remove(x);
            }
            continue;
        }

        let mut t_max = 1.0f64;
        let mut blocking = None;
        for x in 0..s {
            if delta[x] < 0.0 {
                let t = weights[x] / -delta[x];
                if t < t_max {
                    t_max = t;
                    blocking = Some(x);
                }
            }
        }
        let mut t = t_max;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = weights.iter().zip(&delta).map(|(&m, &d)| (m + t * d).max(0.0)).collect();
            let sum: f64 = trial.iter().sum();
            let trial: Vec<f64> = trial.iter().map(|m| m / sum).collect();
            if eval.information_on(support, &trial) >= current {
                accepted = Some(trial);
                break;
            }
            t *= 0.5;
        }
        steps += 1;
        let Some(next) = accepted else { break };
        *weights = next;
        if t == t_max {
            if let Some(x) = blocking {
                support.remove(x);
                weights.remove(x);
                let sum: f64 = weights.iter().sum();
                weights.iter_mut().for_each(|m| *m /= sum);
            }
        }
    }
    steps
}

/// Masses below `e^-700` are treated as exactly zero to stay out of subnormals.
const LOG_MASS_CUTOFF: f64 = -700.0;

fn exp_weights(log_masses: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> =
        log_masses.iter().map(|&l| if l < LOG_MASS_CUTOFF { 0.0 } else { l.exp() }).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

fn normalize_log(log_masses: &mut [f64]) {
    let top = log_masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + log_masses.iter().map(|&l| (l - top).exp()).sum::<f64>().ln();
    log_masses.iter_mut().for_each(|l| *l -= lse);
}

/// Capacity of the ideal-receptor channel on a uniform grid over `[0, 1]`.
pub fn ideal_capacity(n: usize, num_points: usize, config: &SolverConfig) -> Result<CapacityResult> {
    solve_on_support(n, 1.0, num_points, config)
}

/// Capacity of the Markov-receptor channel with release probability `q`.
///
/// The input is the steady-state occupancy, which cannot exceed `1 / (1 + q)`.
pub fn markov_capacity(
    n: usize,
    q: f64,
    num_points: usize,
    config: &SolverConfig,
) -> Result<CapacityResult> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("release probability q = {q} must lie in (0, 1]")));
    }
    solve_on_support(n, 1.0 / (1.0 + q), num_points, config)
}

fn solve_on_support(
    n: usize,
    support_max: f64,
    num_points: usize,
    config: &SolverConfig,
) -> Result<CapacityResult> {
    if n == 0 {
        return Err(Error::domain("receptor count must be positive"));
    }
    let grid = ProbabilityGrid::uniform(num_points, support_max)?;
    let channel = build_channel(&grid, n)?;
    blahut_arimoto(&channel, &grid, config)
}
