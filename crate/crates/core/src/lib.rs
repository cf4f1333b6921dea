//! Worst-case numerical integration errors on spheres `S^d`.
//!
//! The crate evaluates reproducing kernels of Sobolev spaces `H^s(S^d)` and of
//! the log-weighted spaces `H^{(d/2, γ)}(S^d)`, computes the worst-case error
//! of a cubature rule along independent paths, validates spherical designs,
//! produces certified lower bounds, and searches for low-energy point sets.
//!
//! Modules, bottom-up:
//! - [`specfun`]: Jacobi and generalised Legendre polynomials, Gauss rules.
//! - [`kernel`]: weights, kernel coefficient tables with tail bounds.
//! - [`pointset`]: point files, generators, separation and packings.
//! - [`quaderr`]: worst-case errors, Gram moments, design checks, certificates.
//! - [`fooling`]: bump-function lower bounds for arbitrary rules.
//! - [`designopt`]: first-order optimisation of point energies.
//! - [`cli`]: the command-line front end and rate fitting.

pub mod cli;
pub mod designopt;
pub mod error;
pub mod fooling;
pub mod kernel;
pub mod pointset;
pub mod quaderr;
mod reduce;
pub mod specfun;

pub use error::{Error, Result};
pub use kernel::{SpaceKind, SpaceSpec};
pub use pointset::PointSet;
