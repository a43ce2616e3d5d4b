use rand::Rng;

use crate::linalg::sample::{gaussian_matrix, ginibre_state};
use crate::linalg::{DensityMatrix, HermitianMatrix};
use crate::mcf::MonotoneFunction;
use crate::rng::StreamRng;

/// Uniform weights on the simplex, split so that `1 - α - β ≥ min(α, β)`.
pub fn random_gwyd_params(rng: &mut StreamRng) -> (f64, f64) {
    let mut w: Vec<f64> = (0..3).map(|_| rng.random_range(0.02..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w.sort_by(f64::total_cmp);
    let other = if rng.random() { w[1] } else { w[2] };
    if rng.random() {
        (w[0], other)
    } else {
        (other, w[0])
    }
}

pub fn random_function(rng: &mut StreamRng) -> MonotoneFunction {
    match rng.random_range(0..4) {
        0 => MonotoneFunction::sld(),
        1 => MonotoneFunction::wy(),
        2 => MonotoneFunction::wyd(rng.random_range(0.05..0.95)).unwrap(),
        _ => {
            let (a, b) = random_gwyd_params(rng);
            MonotoneFunction::gwyd(a, b).unwrap()
        }
    }
}

/// Ginibre state of uniformly random rank.
pub fn random_state(rng: &mut StreamRng, d: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=d);
    ginibre_state(rng, d, rank).unwrap()
}

pub fn random_observable(rng: &mut StreamRng, d: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrized(&gaussian_matrix(rng, d, d))
}
