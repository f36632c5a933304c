//! Simulation and theory evaluation for the multi-scale model (MSM) of sparse
//! random graphs with infinite-mean node fitness.
//!
//! Nodes carry i.i.d. heavy-tailed weights `w_i` with tail index `alpha` in
//! `(0, 1)`, and each pair `{i, j}` is linked independently with probability
//! `1 - exp(-delta_n * w_i * w_j)` where `delta_n = n^(-1/alpha)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Γ, log Γ and the upper incomplete gamma function (including
//!   a negative first argument).
//! - [`quadrature`]: adaptive Gauss–Kronrod integration used by the theory layer.
//! - [`weights`]: Pareto and one-sided stable fitness samplers, rescaled sums.
//! - [`graph`]: the edge sampler and the [`Graph`](graph::Graph) type.
//! - [`clustering`]: triangle counts and local / average / global clustering.
//! - [`theory`]: the annealed clustering function and its asymptotics.
//! - [`fractions`]: degree-0/1 fractions (empirical, exact conditional,
//!   incomplete-gamma approximation) and fluctuation statistics.
//! - [`experiments`]: reproducible experiment runners writing CSV/JSON.

// Published constants keep their full digits; `!(x > 0.0)` style guards
// reject NaN on purpose.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod clustering;
pub mod error;
pub mod experiments;
pub mod fractions;
pub mod graph;
pub mod io;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod stats;
pub mod theory;
pub mod weights;

pub use error::{Error, Result};
pub use rng::RngStream;
