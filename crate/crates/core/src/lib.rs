//! Maximum flow with pairwise arc conflicts.
//!
//! An instance is a directed network with integer capacities plus a set of
//! unordered arc pairs of which at most one arc may carry positive flow. The
//! crate provides an exact branch-and-bound solver, an exhaustive oracle for
//! small instances, a conflict-aware greedy heuristic, the mixed-integer model
//! with LP-format export, a benchmark instance generator and the benchmark
//! harness behind the `mfpc` binary.

pub mod bench;
pub mod bnb;
pub mod generate;
pub mod greedy;
pub mod instance;
pub mod maxflow;
pub mod model;

pub use bnb::{solve_bnb, solve_bnb_with, solve_bruteforce, BnbOptions, SolveOutcome, SolveStatus};
pub use generate::{generate, grid, CapacityRegime, GenParams};
pub use greedy::solve_greedy;
pub use instance::{
    check_feasible, parse_instance, parse_solution, serialize_instance, serialize_solution, ActivationPattern,
    FlowAssignment, Instance, Verdict, Violation,
};
pub use maxflow::{max_flow, min_cut};
pub use model::{build_model, export_lp, validate_against_model, ModelIR};
