//! Generalized equiangular measurements.
//!
//! A GEAM in dimension `d` is a family of `N` frames; frame `k` has `M_k`
//! positive operators `P_{k,l}` with
//!
//! ```text
//! Σ_l P_{k,l} = γ_k I,   tr P_{k,l} = a_k,   tr P_{k,l}² = b_k a_k²,
//! tr(P_{k,l} P_{k,l'}) = c_k a_k²,   tr(P_{k,l} P_{k',l'}) = a_k a_{k'}/d.
//! ```
//!
//! It is a conical 2-design when `S_k = a_k²(b_k - c_k)` is the same for
//! every frame. Operators are built from an orthonormal Hermitian basis
//! (see [`HermitianBasis`]) by [`construct_geam`].

mod basis;
mod construct;
pub mod frames;
mod spec;

pub use basis::{from_measurement, gell_mann_basis, gell_mann_basis_shuffled, HermitianBasis};
pub use construct::{
    construct_geam, max_feasible_s, preset_basis, preset_geam, preset_spec, scale_to_symmetric, validate_geam, Check,
    Geam, SymmetricMeasurement, ValidationReport, POSITIVITY_FLOOR,
};
pub use spec::{nm_factorizations, GeamRecord, GeamShape, GeamSpec, Preset, Sign};
