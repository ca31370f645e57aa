//! Python bindings for the `receptor_capacity` crate.
//!
//! Library errors surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use receptor_capacity as rc;
use receptor_capacity::capacity_solver::SolverConfig;

fn to_py(err: rc::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn solver(tolerance_bits: f64, max_iterations: usize, polish: bool) -> SolverConfig {
    SolverConfig { tolerance_bits, max_iterations, polish, ..SolverConfig::default() }
}

/// Discrete input distribution on sorted points in `[0, support_max]`.
#[pyclass(name = "Grid", module = "pyligcap", from_py_object)]
#[derive(Clone)]
pub struct Grid {
    inner: rc::ProbabilityGrid,
}

#[pymethods]
impl Grid {
    #[new]
    #[pyo3(signature = (points, masses, support_max = 1.0))]
    fn new(points: Vec<f64>, masses: Vec<f64>, support_max: f64) -> PyResult<Self> {
        let inner = rc::ProbabilityGrid::new(points, masses, support_max).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Evenly spaced points including both endpoints, uniform masses.
    #[staticmethod]
    #[pyo3(signature = (num_points, support_max = 1.0))]
    fn uniform(num_points: usize, support_max: f64) -> PyResult<Self> {
        Ok(Self { inner: rc::ProbabilityGrid::uniform(num_points, support_max).map_err(to_py)? })
    }

    #[getter]
    fn points(&self) -> Vec<f64> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn masses(&self) -> Vec<f64> {
        self.inner.masses().to_vec()
    }

    #[getter]
    fn support_max(&self) -> f64 {
        self.inner.support_max()
    }

    fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        self.inner.mass_in(lo, hi)
    }

    fn entropy_bits(&self) -> f64 {
        self.inner.entropy_bits()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Grid({} points on [0, {}])", self.inner.len(), self.inner.support_max())
    }
}

/// Outcome of a capacity computation.
#[pyclass(name = "CapacityResult", module = "pyligcap", frozen, skip_from_py_object)]
pub struct CapacityResult {
    inner: rc::CapacityResult,
}

#[pymethods]
impl CapacityResult {
    #[getter]
    fn capacity_bits(&self) -> f64 {
        self.inner.capacity_bits
    }

    #[getter]
    fn upper_bound_bits(&self) -> f64 {
        self.inner.upper_bound_bits()
    }

    #[getter]
    fn bound_gap_bits(&self) -> f64 {
        self.inner.bound_gap_bits
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged()
    }

    #[getter]
    fn optimal_input(&self) -> Grid {
        Grid { inner: self.inner.optimal_input.clone() }
    }

    /// Largest point carrying more than `floor` mass.
    #[pyo3(signature = (floor = 1e-9))]
    fn max_support_point(&self, floor: f64) -> Option<f64> {
        self.inner.max_support_point(floor)
    }

    fn __repr__(&self) -> String {
        format!(
            "CapacityResult(capacity_bits={}, bound_gap_bits={:e}, converged={})",
            self.inner.capacity_bits,
            self.inner.bound_gap_bits,
            if self.inner.converged() { "True" } else { "False" }
        )
    }
}

/// P(i active | p) for i = 0..=n.
#[pyfunction]
fn binomial_row(p: f64, n: usize) -> PyResult<Vec<f64>> {
    rc::binomial_row(p, n).map_err(to_py)
}

/// Mutual information in bits between `grid` and the count of active receptors.
#[pyfunction]
fn mutual_information(grid: &Grid, n: usize) -> PyResult<f64> {
    let channel = rc::build_channel(&grid.inner, n).map_err(to_py)?;
    rc::mutual_information(&grid.inner, &channel).map_err(to_py)
}

/// Capacity of the n-receptor channel restricted to the points of `grid`.
#[pyfunction]
#[pyo3(signature = (grid, n, tolerance_bits = 1e-6, max_iterations = 100_000, polish = true))]
fn blahut_arimoto(
    py: Python<'_>,
    grid: &Grid,
    n: usize,
    tolerance_bits: f64,
    max_iterations: usize,
    polish: bool,
) -> PyResult<CapacityResult> {
    let cfg = solver(tolerance_bits, max_iterations, polish);
    let grid = grid.inner.clone();
    let inner = py
        .detach(|| {
            let channel = rc::build_channel(&grid, n)?;
            rc::blahut_arimoto(&channel, &grid, &cfg)
        })
        .map_err(to_py)?;
    Ok(CapacityResult { inner })
}

/// Capacity of `n` ideal receptors on a uniform grid over [0, 1].
#[pyfunction]
#[pyo3(signature = (n, num_points = 1025, tolerance_bits = 1e-6, max_iterations = 100_000))]
fn ideal_capacity(
    py: Python<'_>,
    n: usize,
    num_points: usize,
    tolerance_bits: f64,
    max_iterations: usize,
) -> PyResult<CapacityResult> {
    let cfg = solver(tolerance_bits, max_iterations, true);
    let inner = py.detach(|| rc::ideal_capacity(n, num_points, &cfg)).map_err(to_py)?;
    Ok(CapacityResult { inner })
}

/// Capacity of `n` two-state receptors with release probability `q`, over the
/// steady-state occupancy range [0, 1 / (1 + q)].
#[pyfunction]
#[pyo3(signature = (n, q, num_points = 1025, tolerance_bits = 1e-6, max_iterations = 100_000))]
fn markov_capacity(
    py: Python<'_>,
    n: usize,
    q: f64,
    num_points: usize,
    tolerance_bits: f64,
    max_iterations: usize,
) -> PyResult<CapacityResult> {
    let cfg = solver(tolerance_bits, max_iterations, true);
    let inner = py.detach(|| rc::markov_capacity(n, q, num_points, &cfg)).map_err(to_py)?;
    Ok(CapacityResult { inner })
}

#[pyfunction]
fn fisher_information(theta: f64, n: usize) -> PyResult<f64> {
    rc::fisher_information(theta, n).map_err(to_py)
}

#[pyfunction]
fn arcsine_pdf(theta: f64) -> PyResult<f64> {
    rc::arcsine_pdf(theta).map_err(to_py)
}

#[pyfunction]
fn arcsine_cdf(x: f64) -> f64 {
    rc::arcsine_cdf(x)
}

/// Arcsine prior on the midpoints of `num_points` equal cells.
#[pyfunction]
fn discretize_arcsine(num_points: usize) -> PyResult<Grid> {
    Ok(Grid { inner: rc::discretize_arcsine(num_points).map_err(to_py)? })
}

/// Stationary law `(pi0, pi1)` of a receptor with kinetics `(p, q)`.
#[pyfunction]
fn steady_state(p: f64, q: f64) -> PyResult<(f64, f64)> {
    let k = rc::ReceptorKinetics::new(p, q).map_err(to_py)?;
    rc::steady_state(&k).map_err(to_py)
}

#[pyfunction]
fn pi1_from_p(p: f64, q: f64) -> PyResult<f64> {
    rc::pi1_from_p(p, q).map_err(to_py)
}

#[pyfunction]
fn p_from_pi1(pi1: f64, q: f64) -> PyResult<f64> {
    rc::p_from_pi1(pi1, q).map_err(to_py)
}

#[pyfunction]
fn mixing_time(p: f64, q: f64, eps: f64) -> PyResult<u64> {
    let k = rc::ReceptorKinetics::new(p, q).map_err(to_py)?;
    rc::mixing_time(&k, eps).map_err(to_py)
}

/// Active-receptor counts after each of `steps` steps, starting empty.
#[pyfunction]
fn simulate_ensemble(py: Python<'_>, p: f64, q: f64, n: usize, steps: usize, seed: u64) -> PyResult<Vec<u32>> {
    let k = rc::ReceptorKinetics::new(p, q).map_err(to_py)?;
    let trace = py.detach(|| rc::simulate_ensemble(&k, n, steps, seed)).map_err(to_py)?;
    Ok(trace.occupancy)
}

/// Active counts of `trials` independent draws of `n` ideal receptors.
#[pyfunction]
fn ideal_samples(py: Python<'_>, p: f64, n: usize, trials: usize, seed: u64) -> PyResult<Vec<u32>> {
    py.detach(|| rc::receptor_dynamics::ideal_samples(p, n, trials, seed)).map_err(to_py)
}

#[pymodule]
fn pyligcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Grid>()?;
    m.add_class::<CapacityResult>()?;
    m.add_function(wrap_pyfunction!(binomial_row, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(blahut_arimoto, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(markov_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_information, m)?)?;
    m.add_function(wrap_pyfunction!(arcsine_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(arcsine_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(discretize_arcsine, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(pi1_from_p, m)?)?;
    m.add_function(wrap_pyfunction!(p_from_pi1, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_time, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_samples, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
