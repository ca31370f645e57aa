//! Two-state Markov receptor model and Monte Carlo simulation of receptor ensembles.
//!
//! An empty receptor binds a molecule with probability `p` per step; an occupied
//! one releases it with probability `q`. The ideal receptor is the special case in
//! which every observation is a fresh Bernoulli(`p`) draw.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Per-step binding and release probabilities of a single receptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceptorKinetics {
    pub p: f64,
    pub q: f64,
}

impl ReceptorKinetics {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("binding probability p = {p} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(format!("release probability q = {q} outside [0, 1]")));
        }
        Ok(Self { p, q })
    }

    /// Second eigenvalue `1 - p - q` of the transition matrix.
    pub fn second_eigenvalue(&self) -> f64 {
        1.0 - self.p - self.q
    }
}

/// Stationary law `(pi0, pi1) = (q, p) / (p + q)`.
pub fn steady_state(kinetics: &ReceptorKinetics) -> Result<(f64, f64)> {
    let ReceptorKinetics { p, q } = *kinetics;
    if p + q <= 0.0 {
        return Err(Error::domain("p = q = 0 has no unique stationary distribution"));
    }
    let pi1 = p / (p + q);
    Ok((1.0 - pi1, pi1))
}

/// Steady-state occupancy `p / (p + q)` as a function of the binding probability.
pub fn pi1_from_p(p: f64, q: f64) -> Result<f64> {
    let k = ReceptorKinetics::new(p, q)?;
    if q == 0.0 {
        return Err(Error::domain("release probability must be positive"));
    }
    Ok(steady_state(&k)?.1)
}

/// Inverse of [`pi1_from_p`]: `p = q pi1 / (1 - pi1)` for `pi1` in `[0, 1 / (1 + q)]`.
pub fn p_from_pi1(pi1: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("release probability q = {q} outside (0, 1]")));
    }
    let upper = 1.0 / (1.0 + q);
    // admit one ulp-scale overshoot from grids built as k * upper / n
    if !(pi1 >= 0.0 && pi1 <= upper * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(Error::domain(format!(
            "occupancy {pi1} exceeds 1/(1+q) = {upper}; no binding probability produces it"
        )));
    }
    if pi1 >= upper {
        return Ok(1.0);
    }
    Ok((q * pi1 / (1.0 - pi1)).min(1.0))
}

/// Smallest `t` with `|1 - p - q|^t <= eps`.
pub fn mixing_time(kinetics: &ReceptorKinetics, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("eps = {eps} must lie in (0, 1)")));
    }
    let s = kinetics.p + kinetics.q;
    if s <= 0.0 || s >= 2.0 {
        return Err(Error::domain(format!(
            "p + q = {s}: the chain is frozen or periodic and never mixes"
        )));
    }
    let lambda = kinetics.second_eigenvalue().abs();
    if lambda == 0.0 {
        return Ok(0);
    }
    let mut t = (eps.ln() / lambda.ln()).ceil().max(0.0) as u64;
    // the log ratio can land one off when lambda^t is within rounding of eps
    while lambda.powi(t as i32) > eps {
        t += 1;
    }
    while t > 0 && lambda.powi(t as i32 - 1) <= eps {
        t -= 1;
    }
    Ok(t)
}

/// Random stream `stream` of the generator family keyed by `seed`.
///
/// Distinct `(seed, stream)` pairs give independent, reproducible sequences.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Occupancy counts of an `N`-receptor ensemble over time.
///
/// `occupancy[t]` is the number of active receptors after step `t + 1`; all
/// receptors start empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleTrace {
    pub receptor_count: usize,
    pub steps: usize,
    pub occupancy: Vec<u32>,
    pub seed: u64,
}

impl EnsembleTrace {
    /// Writes `step,occupancy` rows, steps numbered from 1.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "step,occupancy")?;
        for (t, c) in self.occupancy.iter().enumerate() {
            writeln!(out, "{},{}", t + 1, c)?;
        }
        Ok(())
    }
}

/// Simulates `n` independent receptors for `steps` steps from the all-empty state.
pub fn simulate_ensemble(
    kinetics: &ReceptorKinetics,
    n: usize,
    steps: usize,
    seed: u64,
) -> Result<EnsembleTrace> {
    simulate_ensemble_stream(kinetics, n, steps, seed, 0)
}

/// [`simulate_ensemble`] on an explicit random stream, for independent trials.
pub fn simulate_ensemble_stream(
    kinetics: &ReceptorKinetics,
    n: usize,
    steps: usize,
    seed: u64,
    stream: u64,
) -> Result<EnsembleTrace> {
    if n == 0 || steps == 0 {
        return Err(Error::domain("receptor count and step count must be positive"));
    }
    let ReceptorKinetics { p, q } = *kinetics;
    let mut rng = stream_rng(seed, stream);
    let mut active = vec![false; n];
    let mut count = 0u32;
    let mut occupancy = Vec::with_capacity(steps);
    for _ in 0..steps {
        for a in active.iter_mut() {
            let u: f64 = rng.gen();
            if *a {
                if u < q {
                    *a = false;
                    count -= 1;
                }
            } else if u < p {
                *a = true;
                count += 1;
            }
        }
        occupancy.push(count);
    }
    Ok(EnsembleTrace { receptor_count: n, steps, occupancy, seed })
}

/// Sample mean and variance of the occupancy fraction estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorStats {
    pub sample_mean: f64,
    /// Unbiased (`n - 1`) sample variance; zero for a single sample.
    pub sample_variance: f64,
    pub trials: usize,
}

impl EstimatorStats {
    pub fn from_fractions(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::contract("no samples to estimate from"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Ok(Self { sample_mean: mean, sample_variance: variance, trials: values.len() })
    }
}

/// Occupancy fraction `occupancy / N` at each sample index, summarized.
pub fn estimate_occupancy(trace: &EnsembleTrace, sample_times: &[usize]) -> Result<EstimatorStats> {
    if let Some(&bad) = sample_times.iter().find(|&&t| t >= trace.occupancy.len()) {
        return Err(Error::contract(format!(
            "sample index {bad} beyond trace of {} steps",
            trace.occupancy.len()
        )));
    }
    let n = trace.receptor_count as f64;
    let fractions: Vec<f64> =
        sample_times.iter().map(|&t| f64::from(trace.occupancy[t]) / n).collect();
    EstimatorStats::from_fractions(&fractions)
}

/// Sample indices for estimating the stationary occupancy from one trajectory:
/// a burn-in long enough to make the start-up transient negligible, then
/// `samples` indices spaced `mixing_time(eps)` apart.
pub fn thinned_schedule(kinetics: &ReceptorKinetics, eps: f64, samples: usize) -> Result<Vec<usize>> {
    let burn_in = mixing_time(kinetics, 1e-12)? as usize;
    let spacing = (mixing_time(kinetics, eps)? as usize).max(1);
    Ok((0..samples).map(|k| burn_in + k * spacing).collect())
}

/// Active-receptor count for `n` ideal receptors: a sum of `n` Bernoulli(`p`) draws.
pub fn ideal_sample(p: f64, n: usize, seed: u64) -> Result<u32> {
    check_ideal(p, n)?;
    Ok(bernoulli_sum(p, n, &mut stream_rng(seed, 0)))
}

/// `trials` independent ideal-receptor counts; trial `k` uses stream `k` of `seed`.
pub fn ideal_samples(p: f64, n: usize, trials: usize, seed: u64) -> Result<Vec<u32>> {
    check_ideal(p, n)?;
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|k| bernoulli_sum(p, n, &mut stream_rng(seed, k)))
        .collect())
}

fn check_ideal(p: f64, n: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("binding probability p = {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::domain("receptor count must be positive"));
    }
    Ok(())
}

fn bernoulli_sum<R: Rng>(p: f64, n: usize, rng: &mut R) -> u32 {
    (0..n).map(|_| u32::from(rng.gen::<f64>() < p)).sum()
}

/// Final-step occupancy fraction of `trials` independent ensemble runs.
///
/// Trial `k` runs on stream `k` of `seed`, so results do not depend on thread count.
pub fn independent_runs(
    kinetics: &ReceptorKinetics,
    n: usize,
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let trace = simulate_ensemble_stream(kinetics, n, steps, seed, k)?;
            Ok(f64::from(*trace.occupancy.last().expect("steps >= 1")) / n as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kin(p: f64, q: f64) -> ReceptorKinetics {
        ReceptorKinetics::new(p, q).unwrap()
    }

    #[test]
    fn steady_state_examples() {
        assert_eq!(steady_state(&kin(0.3, 0.3)).unwrap(), (0.5, 0.5));
        assert_eq!(steady_state(&kin(0.0, 0.5)).unwrap(), (1.0, 0.0));
        let (a, b) = steady_state(&kin(1.0, 0.5)).unwrap();
        assert!((a - 1.0 / 3.0).abs() < 1e-15 && (b - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(a + b, 1.0);
        assert!(steady_state(&kin(0.0, 0.0)).is_err());
    }

    #[test]
    fn steady_state_is_stationary() {
        for (p, q) in [(0.1, 0.9), (0.3, 0.7), (0.77, 0.05), (1.0, 1.0)] {
            let (pi0, pi1) = steady_state(&kin(p, q)).unwrap();
            let next0 = pi0 * (1.0 - p) + pi1 * q;
            let next1 = pi0 * p + pi1 * (1.0 - q);
            assert!((next0 - pi0).abs() < 1e-15 && (next1 - pi1).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_map_examples() {
        for q in [0.1, 0.5, 1.0] {
            assert_eq!(p_from_pi1(1.0 / (1.0 + q), q).unwrap(), 1.0);
            assert_eq!(p_from_pi1(0.0, q).unwrap(), 0.0);
        }
        assert!((p_from_pi1(0.4, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(p_from_pi1(0.7, 0.5).is_err());
        assert!(p_from_pi1(0.2, 0.0).is_err());
        assert!(pi1_from_p(0.5, 0.0).is_err());
    }

    #[test]
    fn bijection_sweep() {
        for q in [0.1, 0.5, 0.9] {
            for k in 0..=1000 {
                let p = k as f64 / 1000.0;
                let pi1 = pi1_from_p(p, q).unwrap();
                assert!(pi1 <= 1.0 / (1.0 + q) * (1.0 + 1e-15));
                assert!((p_from_pi1(pi1, q).unwrap() - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixing_time_examples() {
        assert_eq!(mixing_time(&kin(0.4, 0.6), 0.01).unwrap(), 0);
        assert_eq!(mixing_time(&kin(0.25, 0.25), 0.01).unwrap(), 7);
        assert_eq!(mixing_time(&kin(0.05, 0.05), 0.01).unwrap(), 44);
        // negative eigenvalue contracts in magnitude the same way
        assert_eq!(mixing_time(&kin(0.75, 0.75), 0.01).unwrap(), 7);
        assert!(mixing_time(&kin(0.0, 0.0), 0.01).is_err());
        assert!(mixing_time(&kin(1.0, 1.0), 0.01).is_err());
        assert!(mixing_time(&kin(0.3, 0.3), 1.5).is_err());
    }

    #[test]
    fn no_binding_stays_empty() {
        let t = simulate_ensemble(&kin(0.0, 0.5), 50, 100, 1).unwrap();
        assert!(t.occupancy.iter().all(|&c| c == 0));
    }

    #[test]
    fn certain_flip_alternates() {
        let t = simulate_ensemble(&kin(1.0, 1.0), 17, 6, 9).unwrap();
        assert_eq!(t.occupancy, vec![17, 0, 17, 0, 17, 0]);
    }

    #[test]
    fn simulation_is_reproducible() {
        let a = simulate_ensemble(&kin(0.3, 0.2), 100, 50, 42).unwrap();
        let b = simulate_ensemble(&kin(0.3, 0.2), 100, 50, 42).unwrap();
        let c = simulate_ensemble(&kin(0.3, 0.2), 100, 50, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.occupancy, c.occupancy);
        assert!(a.occupancy.iter().all(|&x| x <= 100));
    }

    #[test]
    fn estimator_on_constant_traces() {
        let full = EnsembleTrace { receptor_count: 5, steps: 3, occupancy: vec![5, 5, 5], seed: 0 };
        let s = estimate_occupancy(&full, &[0, 1, 2]).unwrap();
        assert_eq!((s.sample_mean, s.sample_variance, s.trials), (1.0, 0.0, 3));
        let empty = EnsembleTrace { receptor_count: 5, steps: 3, occupancy: vec![0, 0, 0], seed: 0 };
        let s = estimate_occupancy(&empty, &[2]).unwrap();
        assert_eq!((s.sample_mean, s.sample_variance), (0.0, 0.0));
        assert!(matches!(estimate_occupancy(&empty, &[]), Err(Error::Contract(_))));
        assert!(matches!(estimate_occupancy(&empty, &[3]), Err(Error::Contract(_))));
    }

    #[test]
    fn ideal_sample_endpoints() {
        for seed in 0..20 {
            assert_eq!(ideal_sample(0.0, 30, seed).unwrap(), 0);
            assert_eq!(ideal_sample(1.0, 30, seed).unwrap(), 30);
        }
        assert!(ideal_sample(1.2, 30, 0).is_err());
        assert!(ideal_sample(0.2, 0, 0).is_err());
    }

    #[test]
    fn trace_csv() {
        let t = EnsembleTrace { receptor_count: 2, steps: 2, occupancy: vec![1, 2], seed: 0 };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "step,occupancy\n1,1\n2,2\n");
    }
}
