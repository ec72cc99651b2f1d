//! Magic-state distillation with permutation-invariant gnu codes.
//!
//! `N = g·n·u` noisy copies of a single-qubit input state are projected onto
//! the codespace of a gnu code and decoded to one qubit. This crate evaluates
//! the resulting output state analytically in `O(N³)`, checks it against a
//! dense density-matrix oracle and a gate-level simulation of the two-qubit
//! circuit, solves for input parameters that reach a requested target, and
//! computes thresholds, crossovers and compositions with the Bravyi–Kitaev
//! 5- and 15-qubit protocols.
//!
//! The modules build on one another:
//!
//! - [`qmath`]: binomials, single-qubit states, trace distance, the stabiliser
//!   2-Rényi entropy.
//! - [`gnu`]: code parameters and logical states (sparse Dicke form and dense
//!   vectors).
//! - [`analytic`]: overlaps, the codespace projection `(a, b, c)`, output state,
//!   success probability and maximum error.
//! - [`closed_form`]: the closed forms for `g = n = 1`, `u = 2, 3, 4`.
//! - [`oracle`]: brute-force `2^N` density matrices and the circuit simulator.
//! - [`protocols`]: Bravyi–Kitaev error maps, threshold/crossover search and
//!   composition.
//! - [`solver`]: input-parameter inversion and magic curves.
//! - [`verify`] and [`datasets`]: self-verification suites and figure data.
//!
//! Sweeps run on rayon when the `parallel` feature is enabled (the default);
//! see [`Execution`].
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod closed_form;
pub mod datasets;
mod error;
mod exec;
pub mod gnu;
pub mod oracle;
pub mod protocols;
pub mod qmath;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
