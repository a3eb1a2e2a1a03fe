//! Heat kernels on finite simple graphs.
//!
//! The kernel `p_t(x, y) = (exp(t L) δ_x)(y)` of the Kirchhoff operator `L = A - D`
//! behaves for short times like `N(x, y) t^d / d!`, where `d` is the graph distance
//! and `N` the number of shortest paths. This crate computes the kernel two
//! independent ways, computes its Taylor coefficients exactly, checks the
//! short-time law against combinatorial oracles, and runs it backwards to recover
//! distances and geodesic counts from kernel samples.
//!
//! Module map:
//!
//! - [`graph`]: graph type, edge-list parsing, BFS distance/geodesic oracles, bipartiteness.
//! - [`spectral`]: Kirchhoff matrix and the cyclic Jacobi eigensolver.
//! - [`heat_kernel`]: spectral and uniformization kernel engines.
//! - [`extended`]: the spectral kernel in multi-hundred-bit fixed point, for tiny kernel values.
//! - [`series`]: exact rational Taylor coefficients of the kernel.
//! - [`asymptotics`]: per-pair verification reports and the distance estimator.
//! - [`corpus`]: seeded graph families used by tests and benchmarks.
//!
//! Batch work (dense products, all-pairs sweeps, multi-time kernels) runs on rayon
//! when the `parallel` feature is enabled; see [`Execution`].

pub mod asymptotics;
pub mod corpus;
pub mod error;
pub mod extended;
mod fixed;
pub mod graph;
pub mod heat_kernel;
pub mod linalg;
mod par;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder};
pub use par::Execution;
