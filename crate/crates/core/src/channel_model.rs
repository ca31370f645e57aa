//! The N-receptor observation channel.
//!
//! An input value `p` (the probability that a single receptor is active) produces
//! a count `i` of active receptors with probability `C(N, i) p^i (1 - p)^(N - i)`.
//! Continuous input laws are represented by a [`ProbabilityGrid`]: a finite set
//! of points carrying probability masses, so every integral over the input
//! becomes a weighted sum.

use crate::error::{Error, Result};
use crate::special::ln_binomial_pmf;

/// Tolerance used when validating that masses (or kernel rows) sum to one.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Output probabilities below this are floored inside logarithms only.
pub(crate) const LOG_FLOOR: f64 = 1e-300;

/// A discretized input distribution on `[0, support_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityGrid {
    points: Vec<f64>,
    masses: Vec<f64>,
    support_max: f64,
}

impl ProbabilityGrid {
    /// Validates and builds a grid.
    ///
    /// Points must be strictly increasing inside `[0, support_max]`, masses
    /// nonnegative and summing to one within [`MASS_TOLERANCE`].
    pub fn new(points: Vec<f64>, masses: Vec<f64>, support_max: f64) -> Result<Self> {
        if !(support_max > 0.0 && support_max <= 1.0) {
            return Err(Error::domain(format!("support_max {support_max} outside (0, 1]")));
        }
        if points.is_empty() {
            return Err(Error::contract("grid needs at least one point"));
        }
        if points.len() != masses.len() {
            return Err(Error::contract(format!(
                "{} points but {} masses",
                points.len(),
                masses.len()
            )));
        }
        if points.iter().any(|&x| !(0.0..=support_max).contains(&x)) {
            return Err(Error::domain(format!("grid point outside [0, {support_max}]")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::contract("grid points must be strictly increasing"));
        }
        if masses.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::domain("grid masses must be finite and nonnegative"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::contract(format!("grid masses sum to {total}, expected 1")));
        }
        Ok(Self { points, masses, support_max })
    }

    /// `num_points` equally spaced points from 0 to `support_max` inclusive,
    /// with uniform masses.
    pub fn uniform(num_points: usize, support_max: f64) -> Result<Self> {
        if num_points < 2 {
            return Err(Error::domain("a uniform grid needs at least two points"));
        }
        let last = (num_points - 1) as f64;
        let mut points: Vec<f64> =
            (0..num_points).map(|k| support_max * k as f64 / last).collect();
        // pin the endpoint exactly; k / last * s can round above s
        points[num_points - 1] = support_max;
        let masses = vec![1.0 / num_points as f64; num_points];
        Self::new(points, masses, support_max)
    }

    /// All mass on a single input value.
    pub fn point_mass(p: f64) -> Result<Self> {
        Self::new(vec![p], vec![1.0], 1.0)
    }

    /// Same points and support, different masses.
    pub fn with_masses(&self, masses: Vec<f64>) -> Result<Self> {
        Self::new(self.points.clone(), masses, self.support_max)
    }

    /// Builds the grid without re-validating. Callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(points: Vec<f64>, masses: Vec<f64>, support_max: f64) -> Self {
        Self { points, masses, support_max }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn support_max(&self) -> f64 {
        self.support_max
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Spacing between consecutive points, if the grid is uniform.
    pub fn spacing(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let h = self.support_max / (self.points.len() - 1) as f64;
        let uniform = self
            .points
            .iter()
            .enumerate()
            .all(|(k, &x)| (x - h * k as f64).abs() <= 1e-12);
        uniform.then_some(h)
    }

    /// Total mass on points inside the closed interval `[lo, hi]`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.masses)
            .filter(|(&x, _)| x >= lo && x <= hi)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Shannon entropy of the masses, in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.masses.iter().filter(|&&m| m > 0.0).map(|&m| -m * m.log2()).sum()
    }
}

/// Binomial probabilities `P(i | p)` for `i = 0..=n`.
///
/// Each entry is evaluated in the log domain and exponentiated on its own, so
/// no intermediate overflows or underflows for large `n`.
pub fn binomial_row(p: f64, n: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("binding probability {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::domain("receptor count must be positive"));
    }
    let n64 = n as u64;
    Ok((0..=n64).map(|i| ln_binomial_pmf(i, n64, p).exp()).collect())
}

/// Row-stochastic matrix of binomial laws, one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationChannel {
    receptor_count: usize,
    points: Vec<f64>,
    kernel: Vec<f64>,
}

impl ObservationChannel {
    /// Wraps an explicit row-major kernel with `receptor_count + 1` columns.
    ///
    /// Rows need not be binomial; they must be probability vectors.
    pub fn from_kernel(points: Vec<f64>, receptor_count: usize, kernel: Vec<f64>) -> Result<Self> {
        let width = receptor_count + 1;
        if kernel.len() != points.len() * width {
            return Err(Error::contract(format!(
                "kernel has {} entries, expected {} x {width}",
                kernel.len(),
                points.len()
            )));
        }
        for row in kernel.chunks_exact(width) {
            if row.iter().any(|&k| !(k >= 0.0)) {
                return Err(Error::domain("kernel entries must be nonnegative"));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::contract("kernel rows must sum to 1"));
            }
        }
        Ok(Self { receptor_count, points, kernel })
    }

    pub fn receptor_count(&self) -> usize {
        self.receptor_count
    }

    /// Number of output symbols, `N + 1`.
    pub fn num_outputs(&self) -> usize {
        self.receptor_count + 1
    }

    pub fn num_inputs(&self) -> usize {
        self.points.len()
    }

    /// Input values the rows were built from.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let w = self.num_outputs();
        &self.kernel[j * w..(j + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.kernel.chunks_exact(self.num_outputs())
    }

    /// Output law `sum_j masses[j] P(. | p_j)`.
    pub fn output_distribution(&self, masses: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_outputs()];
        for (row, &m) in self.rows().zip(masses) {
            if m == 0.0 {
                continue;
            }
            for (o, &k) in out.iter_mut().zip(row) {
                *o += m * k;
            }
        }
        out
    }

    pub(crate) fn check_matches(&self, grid: &ProbabilityGrid) -> Result<()> {
        if self.points.as_slice() != grid.points() {
            return Err(Error::contract(format!(
                "channel built on {} points does not match grid of {} points",
                self.points.len(),
                grid.len()
            )));
        }
        Ok(())
    }
}

/// Builds the observation kernel for `n` receptors on the grid's points.
pub fn build_channel(grid: &ProbabilityGrid, n: usize) -> Result<ObservationChannel> {
    let mut kernel = Vec::with_capacity(grid.len() * (n + 1));
    for &p in grid.points() {
        kernel.extend(binomial_row(p, n)?);
    }
    Ok(ObservationChannel { receptor_count: n, points: grid.points().to_vec(), kernel })
}

/// `I(P; P_hat)` in bits for the grid's input masses.
///
/// Zero-probability kernel entries contribute nothing.
pub fn mutual_information(grid: &ProbabilityGrid, channel: &ObservationChannel) -> Result<f64> {
    channel.check_matches(grid)?;
    let output = channel.output_distribution(grid.masses());
    let ln_output: Vec<f64> = output.iter().map(|&q| q.max(LOG_FLOOR).ln()).collect();
    let mut total = 0.0;
    for (row, &m) in channel.rows().zip(grid.masses()) {
        if m == 0.0 {
            continue;
        }
        let divergence: f64 = row
            .iter()
            .zip(&ln_output)
            .filter(|(&k, _)| k > 0.0)
            .map(|(&k, &lq)| k * (k.ln() - lq))
            .sum();
        total += m * divergence;
    }
    Ok((total / std::f64::consts::LN_2).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_row_endpoints() {
        assert_eq!(binomial_row(0.0, 1).unwrap(), vec![1.0, 0.0]);
        assert_eq!(binomial_row(1.0, 3).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn binomial_row_fair_pair() {
        let row = binomial_row(0.5, 2).unwrap();
        for (a, b) in row.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn binomial_row_rejects_bad_input() {
        assert!(matches!(binomial_row(-0.1, 3), Err(Error::Domain(_))));
        assert!(matches!(binomial_row(1.5, 3), Err(Error::Domain(_))));
        assert!(matches!(binomial_row(0.5, 0), Err(Error::Domain(_))));
        assert!(binomial_row(f64::NAN, 3).is_err());
    }

    #[test]
    fn large_n_row_has_no_overflow() {
        let row = binomial_row(0.37, 10_000).unwrap();
        assert!(row.iter().all(|x| x.is_finite() && *x >= 0.0));
        let s: f64 = row.iter().sum();
        assert!((s - 1.0).abs() < 1e-12, "sum = {s}");
    }

    #[test]
    fn noiseless_binary_kernel() {
        let grid = ProbabilityGrid::new(vec![0.0, 1.0], vec![0.5, 0.5], 1.0).unwrap();
        let ch = build_channel(&grid, 1).unwrap();
        assert_eq!(ch.row(0), &[1.0, 0.0]);
        assert_eq!(ch.row(1), &[0.0, 1.0]);
        assert!((mutual_information(&grid, &ch).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_four_half() {
        let grid = ProbabilityGrid::point_mass(0.5).unwrap();
        let ch = build_channel(&grid, 4).unwrap();
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0].map(|x| x / 16.0);
        for (a, b) in ch.row(0).iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_grid_rows_are_stochastic() {
        let grid = ProbabilityGrid::uniform(101, 1.0).unwrap();
        let ch = build_channel(&grid, 8).unwrap();
        for row in ch.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn point_mass_carries_no_information() {
        for n in [1, 7, 100] {
            let grid = ProbabilityGrid::point_mass(0.5).unwrap();
            let ch = build_channel(&grid, n).unwrap();
            assert_eq!(mutual_information(&grid, &ch).unwrap(), 0.0);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(ProbabilityGrid::new(vec![0.2, 0.1], vec![0.5, 0.5], 1.0).is_err());
        assert!(ProbabilityGrid::new(vec![0.1, 0.2], vec![0.5, 0.6], 1.0).is_err());
        assert!(ProbabilityGrid::new(vec![0.1, 0.6], vec![0.5, 0.5], 0.5).is_err());
        assert!(ProbabilityGrid::new(vec![0.1, 0.2], vec![1.5, -0.5], 1.0).is_err());
        assert!(ProbabilityGrid::new(vec![0.1], vec![0.5, 0.5], 1.0).is_err());
        let g = ProbabilityGrid::uniform(5, 0.5).unwrap();
        assert_eq!(g.points(), &[0.0, 0.125, 0.25, 0.375, 0.5]);
        assert_eq!(g.spacing(), Some(0.125));
    }

    #[test]
    fn mismatched_channel_is_a_contract_error() {
        let a = ProbabilityGrid::uniform(5, 1.0).unwrap();
        let b = ProbabilityGrid::uniform(6, 1.0).unwrap();
        let ch = build_channel(&a, 3).unwrap();
        assert!(matches!(mutual_information(&b, &ch), Err(Error::Contract(_))));
    }
}
