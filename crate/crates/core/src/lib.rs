//! Clustering balanced two-component mixtures of product distributions over
//! `{0,1}^K` by maximum-weight balanced cuts on Hamming-distance graphs.
//!
//! * [`model`]: mixture centers, divergence, seeded sampling.
//! * [`graph`]: score and Hamming graphs, balanced cuts, cut statistics.
//! * [`solvers`]: exact enumeration, hill climbing, spectral baseline.
//! * [`theory`]: closed-form bounds, thresholds and failure budgets.
//! * [`harness`]: Monte Carlo sweeps, concentration checks, the CLI.

pub mod bits;
pub mod error;
pub mod graph;
pub mod harness;
pub mod model;
pub mod rng;
pub mod solvers;
pub mod theory;

pub use bits::BitVector;
pub use error::{MixcutError, Result};
pub use graph::{BalancedCut, CutGraph, Metric, Objective};
pub use model::{Component, Dataset, Figure1Params, MixtureModel};
pub use solvers::{Method, SolveResult};
