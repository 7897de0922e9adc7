//! Factorization-based determinantal point process (DPP) sampling.
//!
//! A DPP over the ground set `[n]` with marginal kernel `K` assigns
//! `P[Y ⊆ Y] = det(K_Y)`. The samplers here draw exact samples by running an
//! LU (general kernels) or LDL^H (Hermitian kernels) factorization in which
//! each pivot doubles as a Bernoulli parameter: index j is kept with
//! probability equal to the current diagonal entry, and on exclusion the
//! pivot is shifted by -1 before elimination continues.
//!
//! Modules:
//! - [`sampling`]: unblocked samplers, greedy MAP, conditional kernels,
//!   subset log-likelihoods.
//! - [`blocked`]: blocked and tiled-parallel samplers plus plain blocked
//!   factorizations and a benchmark harness.
//! - [`elementary`]: projection-DPP sampling via diagonally-pivoted Cholesky
//!   and the spectral sampler built on it.
//! - [`sparse`]: sparse-direct Hermitian sampling (elimination tree symbolic
//!   analysis + up-looking scalar LDL^H).
//! - [`kernels`]: concrete kernel builders (spanning trees, Aztec-diamond
//!   dominoes, shifted Laplacians, random admissible kernels, L-ensembles).
//! - [`oracle`]: brute-force subset enumeration and chi-square harnesses.
//! - [`io`]: Matrix Market readers/writers.
//! - [`ppm`]: binary PPM rasterization of spanning trees and tilings.

pub mod blocked;
pub mod elementary;
pub mod error;
pub mod io;
pub mod kernel;
pub mod kernels;
pub mod matrix;
pub mod oracle;
pub mod ppm;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod sparse;

pub use error::{DppError, Result};
pub use kernel::{FactoredKernel, MarginalKernel, Sample, Symmetry};
pub use matrix::Matrix;
pub use rng::RngStream;
pub use scalar::{Real, Scalar};
