#![allow(dead_code)]

use geamlab::geam::Sign;
use geamlab::linalg::sample::{gaussian_matrix, ginibre_state};
use geamlab::linalg::{DensityMatrix, HermitianMatrix};
use geamlab::mcf::MonotoneFunction;
use geamlab::rng::StreamRng;
use rand::Rng;

pub const GRID_FUNCTIONS: [&str; 4] = ["sld", "wy", "wyd:0.3", "gwyd:0.2,0.5"];

pub fn function(s: &str) -> MonotoneFunction {
    s.parse().unwrap()
}

/// sld, wy, random wyd or a random gwyd in the monotone region.
pub fn random_function(rng: &mut StreamRng) -> MonotoneFunction {
    match rng.random_range(0..4) {
        0 => MonotoneFunction::sld(),
        1 => MonotoneFunction::wy(),
        2 => MonotoneFunction::wyd(rng.random_range(0.05..0.95)).unwrap(),
        _ => {
            let mut w: Vec<f64> = (0..3).map(|_| rng.random_range(0.02..1.0)).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            w.sort_by(f64::total_cmp);
            MonotoneFunction::gwyd(w[0], w[1]).unwrap()
        }
    }
}

pub fn state_of_rank(rng: &mut StreamRng, d: usize, rank: usize) -> DensityMatrix {
    ginibre_state(rng, d, rank).unwrap()
}

pub fn random_state(rng: &mut StreamRng, d: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=d);
    state_of_rank(rng, d, rank)
}

pub fn random_observable(rng: &mut StreamRng, d: usize) -> HermitianMatrix {
    let g = gaussian_matrix(rng, d, d);
    HermitianMatrix::new((&g + &g.adjoint()).scale_real(0.5)).unwrap()
}

pub fn random_signs(rng: &mut StreamRng, n: usize) -> Vec<Sign> {
    (0..n).map(|_| if rng.random() { Sign::Plus } else { Sign::Minus }).collect()
}
