//! Capacity analysis for the ligand-receptor reception stage of diffusion-based
//! molecular communication.
//!
//! A receiver with `N` identical receptors reports how many of them are active.
//! Given the per-receptor activation probability (the channel input), that count
//! is binomial, so the reception stage is a channel from `[0, 1]` (or a
//! sub-interval of it) to `{0, ..., N}`. This crate provides:
//!
//! * [`channel_model`]: the binomial observation kernel and exact mutual information,
//! * [`input_priors`]: Fisher information and the arcsine (Jeffreys) prior,
//! * [`capacity_solver`]: Blahut-Arimoto capacity with certified bounds,
//! * [`receptor_dynamics`]: the two-state Markov receptor and Monte Carlo simulation,
//! * [`experiments`]: sweep orchestration and CSV output used by the `ligcap` binary.
//!
//! All information quantities are reported in bits.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity_solver;
pub mod channel_model;
mod error;
pub mod experiments;
pub mod input_priors;
pub mod receptor_dynamics;
mod special;

pub use capacity_solver::{
    blahut_arimoto, ideal_capacity, markov_capacity, CapacityResult, SolveStatus, SolverConfig,
};
pub use channel_model::{binomial_row, build_channel, mutual_information, ObservationChannel, ProbabilityGrid};
pub use error::{Error, Result};
pub use input_priors::{arcsine_cdf, arcsine_pdf, discretize_arcsine, fisher_information};
pub use receptor_dynamics::{
    estimate_occupancy, ideal_sample, mixing_time, p_from_pi1, pi1_from_p, simulate_ensemble,
    steady_state, EnsembleTrace, EstimatorStats, ReceptorKinetics,
};
