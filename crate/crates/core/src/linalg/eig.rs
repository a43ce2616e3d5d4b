use num_complex::Complex64 as C64;

use super::{ComplexMatrix, HermitianMatrix, TOLERANCES};
use crate::error::{Error, Result};

/// Eigenvalues (descending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Σ λ_j |φ_j⟩⟨φ_j|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * self.values[k]).sum()
        })
    }

    /// `V^† A V`: the matrix elements `⟨φ_m|A|φ_n⟩`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors.adjoint() * a) * &self.vectors
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a
/// diagonal unitary, then applies the real symmetric Jacobi rotation.
/// Sweeps continue until the off-diagonal Frobenius norm drops below
/// `eig_offdiag · max(1, ‖A‖_F)`.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let target = TOLERANCES.eig_offdiag * m.frobenius_norm().max(1.0);

    let mut converged = false;
    let mut off = off_diagonal_norm(&m);
    for _ in 0..TOLERANCES.eig_max_sweeps {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&m);
    }
    if !converged && off > target {
        return Err(Error::NoConvergence {
            sweeps: TOLERANCES.eig_max_sweeps,
            residual: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition { values, vectors })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes `m[p][q]` by `m ← U^† m U`, `v ← v U`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = (apq / r).conj();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U restricted to (p, q) = diag(1, phase) · [[c, s], [-s, c]].
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    let n = m.rows();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * u_pp + mkq * u_qp;
        m[(k, q)] = mkp * u_pq + mkq * u_qq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}
