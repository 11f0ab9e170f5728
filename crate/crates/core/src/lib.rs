//! Gromov-Monge maps between point sets on the real line.
//!
//! For power costs `c(s, t) = |s - t|^alpha` the map problem reduces to the
//! quadratic assignment problem
//!
//! ```text
//! max_sigma F_sigma(x, y) = sum_{i<k} |x_i - x_k|^alpha |y_sigma(i) - y_sigma(k)|^alpha
//! ```
//!
//! This crate evaluates the objectives ([`objective`]), maximizes `F` exactly
//! or heuristically ([`solvers`]), builds the cyclic counterexample family on
//! which neither the identity nor the anti-identity is optimal
//! ([`counterexample`]), and runs sweeps and Monte Carlo studies over it
//! ([`experiments`]). The `gwline` binary wraps all of it ([`cli`]).

pub mod cli;
pub mod counterexample;
pub mod error;
pub mod experiments;
pub mod numfmt;
pub mod objective;
pub mod solvers;
pub mod types;

pub use counterexample::{
    construct_instance, degenerate_gap, f_cyc_closed_form, f_id_closed_form, find_witness_epsilon,
    verify_instance, verify_proposition, CounterexampleSpec, VerificationRecord, Witness,
};
pub use error::{Error, Result};
pub use experiments::{monte_carlo_study, sweep_epsilon, Distribution, ExperimentReport, SweepRow};
pub use objective::{
    assignment_objective, gm_objective, gw_plan_objective, plan_from_permutation, rearrangement_residual,
};
pub use solvers::{evaluate_baselines, solve_brute_force, solve_local_search, Method, SolveResult};
pub use types::{CostParams, DiscreteMeasure, Permutation, PointConfiguration, TransportPlan};
