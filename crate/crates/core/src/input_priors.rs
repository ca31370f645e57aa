//! Fisher information of the receptor readout and the arcsine (Jeffreys) prior.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::channel_model::ProbabilityGrid;
use crate::error::{Error, Result};

fn check_interior(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("theta = {theta} must lie strictly inside (0, 1)")))
    }
}

/// Fisher information of `n` independent Bernoulli(`theta`) observations,
/// `n / (theta (1 - theta))`.
pub fn fisher_information(theta: f64, n: usize) -> Result<f64> {
    check_interior(theta)?;
    if n == 0 {
        return Err(Error::domain("receptor count must be positive"));
    }
    Ok(n as f64 / (theta * (1.0 - theta)))
}

/// Arcsine density `1 / (pi sqrt(theta (1 - theta)))` on `(0, 1)`.
pub fn arcsine_pdf(theta: f64) -> Result<f64> {
    check_interior(theta)?;
    Ok(1.0 / (PI * (theta * (1.0 - theta)).sqrt()))
}

/// Arcsine CDF `(2 / pi) asin(sqrt(x))`, clamped to `[0, 1]` outside the support.
pub fn arcsine_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        FRAC_2_PI * x.sqrt().asin()
    }
}

/// Arcsine prior on the midpoints of `num_points` equal cells partitioning
/// `[0, 1]`; each midpoint carries the exact probability of its cell.
pub fn discretize_arcsine(num_points: usize) -> Result<ProbabilityGrid> {
    if num_points == 0 {
        return Err(Error::domain("need at least one cell"));
    }
    let n = num_points as f64;
    let edges: Vec<f64> = (0..=num_points).map(|k| k as f64 / n).collect();
    let points = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let masses = edge_masses(&edges);
    ProbabilityGrid::new(points, masses, 1.0)
}

/// Arcsine prior carried by arbitrary points in `[0, 1]`.
///
/// Each point receives the arcsine probability of its nearest-point cell; the
/// cells of the first and last points extend to 0 and 1. This puts the prior on
/// exactly the grid a capacity solver runs on, endpoints included.
pub fn arcsine_on_points(points: &[f64]) -> Result<ProbabilityGrid> {
    if points.is_empty() {
        return Err(Error::contract("need at least one point"));
    }
    let mut edges = Vec::with_capacity(points.len() + 1);
    edges.push(0.0);
    edges.extend(points.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    edges.push(1.0);
    ProbabilityGrid::new(points.to_vec(), edge_masses(&edges), 1.0)
}

fn edge_masses(edges: &[f64]) -> Vec<f64> {
    let cdf: Vec<f64> = edges.iter().map(|&x| arcsine_cdf(x)).collect();
    let mut masses: Vec<f64> = cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let total: f64 = masses.iter().sum();
    masses.iter_mut().for_each(|m| *m /= total);
    masses
}
