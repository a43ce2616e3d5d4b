//! Numerics for metric-adjusted skew information and average coherence
//! under conical 2-design generalized equiangular measurements (GEAMs).
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver, density matrices, partial traces and random sampling.
//! - [`mcf`]: operator-monotone function families and their
//!   Morozova–Chentsov kernels.
//! - [`skewinfo`]: skew information `I_f(ρ, H)`, total uncertainty `Q_f`,
//!   f-entropy, quasientropy sums and the Haar-average Monte-Carlo.
//! - [`geam`]: GEAM parameters, operator construction and validation.
//! - [`coherence`]: average coherence under GEAMs and the identity suite.
//! - [`entangle`]: the two entanglement criteria and reference states.
//!
//! Batch work (Monte-Carlo, grids, sweeps) runs through [`exec::Exec`],
//! which uses rayon when the `parallel` feature is enabled and falls back
//! to a sequential loop otherwise. Results do not depend on the choice.

pub mod coherence;
pub mod entangle;
pub mod error;
pub mod exec;
pub mod geam;
pub mod linalg;
pub mod mcf;
pub mod rng;
pub mod skewinfo;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use exec::Exec;
