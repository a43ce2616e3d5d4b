//! Dense complex linear algebra and quantum-state utilities.
//!
//! Matrices exchange as JSON arrays of rows, each entry a `[re, im]`
//! pair: `[[[1,0],[0,0]],[[0,0],[0,0]]]` is `|0⟩⟨0|`.

mod basis;
mod eig;
mod matrix;
pub mod sample;
mod state;

pub use basis::{gell_mann_matrices, operator_basis, orthonormality_defect};
pub use eig::{hermitian_eig, SpectralDecomposition};
pub use matrix::{pauli, tensor_product, ComplexMatrix, HermitianMatrix};
pub use sample::{sample, Sample, SampleKind};
pub use state::{
    max_entangled_vector, partial_trace, partial_trace_matrix, purity, singlet_vector, special_operator,
    swap_operator, BipartiteDims, DensityMatrix, SpecialOperator, Subsystem,
};

/// Numerical thresholds shared by the linear-algebra layer.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Largest `|A - A^†|` entry accepted before symmetrization.
    pub hermitian_input: f64,
    /// Largest negative eigenvalue accepted for a state.
    pub psd: f64,
    /// Largest `|tr ρ - 1|` accepted for a state.
    pub trace: f64,
    /// Relative off-diagonal Frobenius norm at which Jacobi stops.
    pub eig_offdiag: f64,
    pub eig_max_sweeps: usize,
    /// Eigenvalues of a state with `|λ|` at or below this are treated as 0
    /// when evaluating Morozova–Chentsov kernels.
    pub spectrum_snap: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    hermitian_input: 1e-8,
    psd: 1e-10,
    trace: 1e-12,
    eig_offdiag: 1e-13,
    eig_max_sweeps: 100,
    spectrum_snap: 1e-14,
};
