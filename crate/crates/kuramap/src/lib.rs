//! Series analysis of frequency synchronization on weighted oscillator
//! networks.
//!
//! The library builds the graph operators of a weighted connected network
//! (incidence matrix, Laplacian pseudoinverse, cutset projection, spanning
//! tree reductions), evaluates the Taylor expansion of the inverse Kuramoto
//! map term by term, and turns truncations of that series into approximate
//! synchronization manifolds and tests. A certificate module bounds where
//! the series provably converges, and a Newton-based oracle plus an RK4
//! integrator provide exact ground truth to compare against. Power-grid test
//! cases enter through a MATPOWER parser or a native JSON schema and reduce
//! to Kuramoto form.
//!
//! The numeric kernel is generic over the scalar type ([`scalar::Real`],
//! satisfied by `f32` and `f64`); concrete `f64` aliases are exported below.

pub mod caseio;
pub mod certificate;
pub mod error;
pub mod linalg;
pub mod network;
pub mod operators;
pub mod partitions;
pub mod qoperator;
pub mod scalar;
pub mod series;
pub mod solver;

pub use caseio::{random_network, CaseData};
pub use certificate::{certificate, g_function, gamma_star, in_cohesive_set};
pub use error::{Error, Result};
pub use network::Network;
pub use operators::OperatorSet;
pub use partitions::{odd_partitions, OddPartition};
pub use qoperator::{q_apply, q_inverse_apply};
pub use series::{approximate_manifold, approximate_test, expand, hadamard_power};
pub use solver::{kuramoto_map, newton_solve, simulate, NewtonOptions};

/// Default-precision network.
pub type Network64 = network::Network<f64>;
/// Default-precision operator bundle.
pub type OperatorSet64 = operators::OperatorSet<f64>;
/// Default-precision series expansion.
pub type SeriesExpansion64 = series::SeriesExpansion<f64>;
/// Default-precision certificate.
pub type SyncCertificate64 = certificate::SyncCertificate<f64>;
/// Default-precision equilibrium report.
pub type EquilibriumResult64 = solver::EquilibriumResult<f64>;

/// Single-precision variants, for callers that trade accuracy for memory.
pub type Network32 = network::Network<f32>;
pub type OperatorSet32 = operators::OperatorSet<f32>;
pub type SeriesExpansion32 = series::SeriesExpansion<f32>;
pub type SyncCertificate32 = certificate::SyncCertificate<f32>;
pub type EquilibriumResult32 = solver::EquilibriumResult<f32>;
