//! Random states and unitaries.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// `G G^† / tr(G G^†)` with `G` a `d x rank` complex Gaussian matrix.
    GinibreMixed { rank: usize },
    HaarPure,
    HaarUnitary,
}

#[derive(Clone, Debug)]
pub enum Sample {
    State(DensityMatrix),
    Unitary(ComplexMatrix),
}

/// Draws one sample from stream 0 of `seed`.
pub fn sample(kind: SampleKind, d: usize, seed: u64) -> Result<Sample> {
    let mut rng = stream_rng(seed, 0);
    Ok(match kind {
        SampleKind::GinibreMixed { rank } => Sample::State(ginibre_state(&mut rng, d, rank)?),
        SampleKind::HaarPure => Sample::State(haar_pure_state(&mut rng, d)?),
        SampleKind::HaarUnitary => Sample::Unitary(haar_unitary(&mut rng, d)),
    })
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn ginibre_state<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!("rank {rank} outside 1..={d}")));
    }
    let g = gaussian_matrix(rng, d, rank);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_real(1.0 / tr))
}

pub fn haar_pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&v)
}

/// Haar-distributed unitary: the Q factor of a square complex Gaussian
/// matrix, with R's diagonal fixed to be real positive.
///
/// Gram–Schmidt (two passes per column) produces exactly that
/// normalization, since every `R_jj` is a vector norm.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, d, d);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut col = g.column_vec(j);
        for _ in 0..2 {
            for prev in &q {
                let proj: C64 = prev.iter().zip(&col).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= proj * p;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        col.iter_mut().for_each(|z| *z /= norm);
        q.push(col);
    }
    ComplexMatrix::from_fn(d, d, |i, j| q[j][i])
}
