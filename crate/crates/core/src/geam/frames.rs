//! Known rank-one measurements: complete sets of mutually unbiased bases
//! and Weyl–Heisenberg SIC-POVMs in small dimensions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::linalg::{pauli, ComplexMatrix, HermitianMatrix};

/// `d + 1` mutually unbiased bases as rank-one projectors, or `None` when
/// no construction is implemented for `d`.
///
/// `d = 2`: Pauli eigenbases. `d = 4`: common eigenbases of the five
/// maximal commuting sets of two-qubit Paulis. Odd prime `d`: the
/// standard basis plus `|e^k_j⟩ = Σ_n ω^{kn² + jn} |n⟩ / √d`.
pub fn mub_frames(d: usize) -> Option<Vec<Vec<HermitianMatrix>>> {
    match d {
        2 => Some(pauli().iter().map(pauli_pair).collect()),
        4 => Some(two_qubit_mubs()),
        _ if d > 2 && is_prime(d) => Some(prime_mubs(d)),
        _ => None,
    }
}

/// A SIC-POVM as `d²` rank-one projectors `|ψ_jk⟩⟨ψ_jk|` (the POVM
/// elements are these divided by `d`), or `None` when no fiducial is
/// stored for `d`.
pub fn sic_frame(d: usize) -> Option<Vec<HermitianMatrix>> {
    let fiducial = sic_fiducial(d)?;
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let v = weyl_heisenberg(d, j, k, &fiducial);
            out.push(projector(&v));
        }
    }
    Some(out)
}

fn sic_fiducial(d: usize) -> Option<Vec<C64>> {
    let v = match d {
        2 => {
            // Bloch vector (1, 1, 1)/√3.
            let z = 1.0 / 3f64.sqrt();
            let theta = z.acos();
            vec![C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), PI / 4.0)]
        }
        3 => vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)],
        4 => vec![
            C64::new(0.20118858648686588, 0.0),
            C64::new(0.30763455310591914, -0.25698329627163197),
            C64::new(0.0, -0.4857122140912641),
            C64::new(-0.10644596661905338, 0.742695510362896),
        ],
        _ => return None,
    };
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Some(v.into_iter().map(|z| z / norm).collect())
}

/// `X^j Z^k |ψ⟩` with `X|n⟩ = |n+1⟩`, `Z|n⟩ = ω^n |n⟩`.
fn weyl_heisenberg(d: usize, j: usize, k: usize, psi: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d];
    for n in 0..d {
        let phase = C64::from_polar(1.0, 2.0 * PI * ((k * n) % d) as f64 / d as f64);
        out[(n + j) % d] = phase * psi[n];
    }
    out
}

fn projector(v: &[C64]) -> HermitianMatrix {
    HermitianMatrix::symmetrized(&ComplexMatrix::outer(v, v))
}

fn pauli_pair(p: &HermitianMatrix) -> Vec<HermitianMatrix> {
    vec![p.affine(0.5, -0.5), p.affine(0.5, 0.5)]
}

fn two_qubit_mubs() -> Vec<Vec<HermitianMatrix>> {
    let [x, y, z] = pauli();
    let i = HermitianMatrix::identity(2);
    // (A, B) generating each maximal commuting set {A, B, AB}.
    let sets = [
        (z.kron(&i), i.kron(&z)),
        (x.kron(&i), i.kron(&x)),
        (y.kron(&i), i.kron(&y)),
        (x.kron(&y), y.kron(&z)),
        (y.kron(&x), z.kron(&y)),
    ];
    let id = HermitianMatrix::identity(4);
    sets.iter()
        .map(|(a, b)| {
            let mut frame = Vec::with_capacity(4);
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    let pa = id.add(&a.scale(s1));
                    let pb = id.add(&b.scale(s2));
                    let prod = pa.as_matrix() * pb.as_matrix();
                    frame.push(HermitianMatrix::symmetrized(&prod.scale_real(0.25)));
                }
            }
            frame
        })
        .collect()
}

fn prime_mubs(d: usize) -> Vec<Vec<HermitianMatrix>> {
    let mut frames = Vec::with_capacity(d + 1);
    frames.push(
        (0..d)
            .map(|j| {
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[j] = C64::new(1.0, 0.0);
                projector(&v)
            })
            .collect(),
    );
    let amp = 1.0 / (d as f64).sqrt();
    for k in 0..d {
        frames.push(
            (0..d)
                .map(|j| {
                    let v: Vec<C64> = (0..d)
                        .map(|n| C64::from_polar(amp, 2.0 * PI * ((k * n * n + j * n) % d) as f64 / d as f64))
                        .collect();
                    projector(&v)
                })
                .collect(),
        );
    }
    frames
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}
