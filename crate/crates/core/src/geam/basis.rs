use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::linalg::{gell_mann_matrices, orthonormality_defect, HermitianMatrix};
use crate::rng::stream_rng;

/// An operator orthonormal Hermitian basis `{I/√d} ∪ {G_{k,l}}` whose
/// traceless elements are split into frames: frame `k` holds
/// `G_{k,1}, …, G_{k,M_k-1}`.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    d: usize,
    partition: Vec<usize>,
    frames: Vec<Vec<HermitianMatrix>>,
}

impl HermitianBasis {
    /// Validates tracelessness, orthonormality and cardinality.
    pub fn from_frames(d: usize, frames: Vec<Vec<HermitianMatrix>>) -> Result<Self> {
        let count: usize = frames.iter().map(Vec::len).sum();
        if count != d * d - 1 {
            return Err(Error::DimensionMismatch(format!(
                "basis has {count} traceless elements, expected d² - 1 = {}",
                d * d - 1
            )));
        }
        let all: Vec<HermitianMatrix> = std::iter::once(identity_element(d))
            .chain(frames.iter().flatten().cloned())
            .collect();
        if all.iter().any(|x| x.dim() != d) {
            return Err(Error::DimensionMismatch(format!("basis elements must be {d}x{d}")));
        }
        let defect = orthonormality_defect(&all);
        if defect > 1e-10 {
            return Err(Error::InvalidParameter(format!("basis is not orthonormal (defect {defect:e})")));
        }
        let partition = frames.iter().map(|f| f.len() + 1).collect();
        Ok(Self { d, partition, frames })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Frame sizes `M_k`.
    pub fn partition(&self) -> &[usize] {
        &self.partition
    }

    /// `G_{k,1}, …, G_{k,M_k-1}` for frame `k` (0-based).
    pub fn frame(&self, k: usize) -> &[HermitianMatrix] {
        &self.frames[k]
    }

    /// `G_k = Σ_l G_{k,l}`.
    pub fn frame_sum(&self, k: usize) -> HermitianMatrix {
        let mut acc = HermitianMatrix::from_real_diagonal(&vec![0.0; self.d]);
        for g in &self.frames[k] {
            acc = acc.add(g);
        }
        acc
    }

    /// All `d²` elements, `I/√d` first.
    pub fn elements(&self) -> Vec<HermitianMatrix> {
        std::iter::once(identity_element(self.d))
            .chain(self.frames.iter().flatten().cloned())
            .collect()
    }
}

fn identity_element(d: usize) -> HermitianMatrix {
    HermitianMatrix::identity(d).scale(1.0 / (d as f64).sqrt())
}

fn check_partition(d: usize, partition: &[usize]) -> Result<()> {
    if partition.iter().any(|&m| m < 2) {
        return Err(Error::InvalidParameter("every frame needs at least 2 elements".into()));
    }
    let total: usize = partition.iter().map(|m| m - 1).sum();
    if total != d * d - 1 {
        return Err(Error::InvalidParameter(format!(
            "partition {partition:?} gives Σ(M_k - 1) = {total}, expected d² - 1 = {}",
            d * d - 1
        )));
    }
    Ok(())
}

fn split(elements: Vec<HermitianMatrix>, partition: &[usize]) -> Vec<Vec<HermitianMatrix>> {
    let mut it = elements.into_iter();
    partition.iter().map(|m| it.by_ref().take(m - 1).collect()).collect()
}

/// Generalized Gell-Mann basis split into frames: frame 1 takes the first
/// `M_1 - 1` elements of [`gell_mann_matrices`], frame 2 the next
/// `M_2 - 1`, and so on.
pub fn gell_mann_basis(d: usize, partition: &[usize]) -> Result<HermitianBasis> {
    check_partition(d, partition)?;
    HermitianBasis::from_frames(d, split(gell_mann_matrices(d), partition))
}

/// As [`gell_mann_basis`], with the element order shuffled by `seed`
/// before the split.
pub fn gell_mann_basis_shuffled(d: usize, partition: &[usize], seed: u64) -> Result<HermitianBasis> {
    check_partition(d, partition)?;
    let mut elements = gell_mann_matrices(d);
    elements.shuffle(&mut stream_rng(seed, 0));
    HermitianBasis::from_frames(d, split(elements, partition))
}

/// Basis adapted to a measurement whose frames each consist of `M`
/// equal-trace operators `E_l` with `Σ_l E_l ∝ I` and equal pairwise
/// overlaps, such as MUB projectors or a SIC.
///
/// With `T_l = E_l - tr(E_l) I/d`, `s = √M` and `H_l = κ T_l` scaled so
/// that `tr H_l² = (s+1)²(M-1)`, the frame gets `G_k = H_M/(s+1)` and
/// `G_{k,l} = (G_k - H_l)/(s(s+1))`. Construction from this basis then
/// reproduces the `E_l` up to the affine map fixed by the GEAM parameters.
pub fn from_measurement(d: usize, frames: &[Vec<HermitianMatrix>]) -> Result<HermitianBasis> {
    let mut out = Vec::with_capacity(frames.len());
    for frame in frames {
        let m = frame.len();
        if m < 2 {
            return Err(Error::InvalidParameter("every frame needs at least 2 elements".into()));
        }
        let s = (m as f64).sqrt();
        let h: Vec<HermitianMatrix> = frame
            .iter()
            .map(|e| {
                let t = e.sub(&HermitianMatrix::identity(d).scale(e.trace() / d as f64));
                let kappa = (s + 1.0) * ((m - 1) as f64 / t.hs_inner(&t)).sqrt();
                t.scale(kappa)
            })
            .collect();
        let gk = h[m - 1].scale(1.0 / (s + 1.0));
        out.push(
            h[..m - 1]
                .iter()
                .map(|hl| gk.sub(hl).scale(1.0 / (s * (s + 1.0))))
                .collect(),
        );
    }
    HermitianBasis::from_frames(d, out)
}
