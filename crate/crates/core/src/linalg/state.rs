use num_complex::Complex64 as C64;

use super::{hermitian_eig, ComplexMatrix, HermitianMatrix, SpectralDecomposition, TOLERANCES};
use crate::error::{Error, Result};

/// A quantum state: Hermitian, positive semidefinite, unit trace.
///
/// The spectral decomposition is computed once during validation and
/// kept alongside the matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::from_hermitian(HermitianMatrix::new(m)?)
    }

    pub fn from_hermitian(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if !((tr - 1.0).abs() <= TOLERANCES.trace) {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let spectrum = hermitian_eig(&matrix)?;
        let min = *spectrum.eigenvalues().last().expect("non-empty");
        if min < -TOLERANCES.psd {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { matrix, spectrum })
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_diagonal(&vec![1.0 / d as f64; d]).expect("I/d is a state")
    }

    /// Diagonal state with the given populations.
    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::from_hermitian(HermitianMatrix::from_real_diagonal(p))
    }

    /// `|ψ⟩⟨ψ|` for the normalized `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.spectrum.eigenvalues().last().expect("non-empty")
    }

    /// `tr ρ²`, computed from the entries.
    pub fn purity(&self) -> f64 {
        self.matrix.as_matrix().data().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::from_hermitian(self.matrix.kron(&other.matrix))
    }

    /// `Σ p_i ρ_i`.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let d = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?
            .1
            .dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (p, rho) in parts {
            if rho.dim() != d {
                return Err(Error::DimensionMismatch("mixture of different dimensions".into()));
            }
            acc = &acc + &rho.matrix.as_matrix().scale_real(*p);
        }
        Self::new(acc)
    }
}

/// Free-function form of [`DensityMatrix::purity`].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Local dimensions of a bipartite system `H_A ⊗ H_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteDims {
    pub a: usize,
    pub b: usize,
}

impl BipartiteDims {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameter("subsystem dimensions must be positive".into()));
        }
        Ok(Self { a, b })
    }

    pub fn symmetric(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn total(&self) -> usize {
        self.a * self.b
    }
}

/// Which subsystem a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced matrix of a bipartite operator, keeping `keep`.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: BipartiteDims, keep: Subsystem) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, subsystems {}x{}",
            m.rows(),
            m.cols(),
            dims.a,
            dims.b
        )));
    }
    let (da, db) = (dims.a, dims.b);
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    })
}

pub fn partial_trace(rho: &DensityMatrix, dims: BipartiteDims, keep: Subsystem) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_matrix(rho.matrix().as_matrix(), dims, keep)?)
}

/// Operators and vectors that recur in bipartite examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialOperator {
    /// `F = Σ_ij |ij⟩⟨ji|`.
    Swap,
    /// `|φ+⟩ = Σ_i |ii⟩ / √d`, as a `d² x 1` column.
    MaxEntangled,
    /// `|Ψ-⟩ = (|01⟩ - |10⟩) / √2`, as a `4 x 1` column; `d` must be 2.
    Singlet,
}

pub fn special_operator(d: usize, which: SpecialOperator) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    match which {
        SpecialOperator::Swap => Ok(swap_operator(d)),
        SpecialOperator::MaxEntangled => Ok(ComplexMatrix::column(&max_entangled_vector(d))),
        SpecialOperator::Singlet if d == 2 => Ok(ComplexMatrix::column(&singlet_vector())),
        SpecialOperator::Singlet => Err(Error::InvalidParameter(format!("singlet requires d = 2, got {d}"))),
    }
}

pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    f
}

pub fn max_entangled_vector(d: usize) -> Vec<C64> {
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = C64::new(amp, 0.0);
    }
    v
}

pub fn singlet_vector() -> Vec<C64> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        C64::new(0.0, 0.0),
        C64::new(a, 0.0),
        C64::new(-a, 0.0),
        C64::new(0.0, 0.0),
    ]
}
