use num_complex::Complex64 as C64;

use super::{ComplexMatrix, HermitianMatrix};

/// The `d² - 1` traceless generalized Gell-Mann matrices, normalized to
/// unit Hilbert–Schmidt norm.
///
/// Order: for each pair `j < k` (lexicographic) the symmetric element
/// `(E_jk + E_kj)/√2` followed by the antisymmetric `-i(E_jk - E_kj)/√2`;
/// then the diagonal ladder `(Σ_{m<l} E_mm - l E_ll)/√(l(l+1))` for
/// `l = 1..d-1`. At `d = 2` this is `σx/√2, σy/√2, σz/√2`.
pub fn gell_mann_matrices(d: usize) -> Vec<HermitianMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = C64::new(r, 0.0);
            s[(k, j)] = C64::new(r, 0.0);
            out.push(HermitianMatrix::symmetrized(&s));
            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = C64::new(0.0, -r);
            a[(k, j)] = C64::new(0.0, r);
            out.push(HermitianMatrix::symmetrized(&a));
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|m| match m.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(HermitianMatrix::from_real_diagonal(&diag));
    }
    out
}

/// `I/√d` followed by [`gell_mann_matrices`]: an operator orthonormal
/// Hermitian basis of the `d x d` matrices.
pub fn operator_basis(d: usize) -> Vec<HermitianMatrix> {
    let mut out = vec![HermitianMatrix::identity(d).scale(1.0 / (d as f64).sqrt())];
    out.extend(gell_mann_matrices(d));
    out
}

/// Largest `|tr(X_i X_j) - δ_ij|` over a set of Hermitian matrices.
pub fn orthonormality_defect(set: &[HermitianMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in set.iter().enumerate() {
        for (j, y) in set.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x.hs_inner(y) - target).abs());
        }
    }
    worst
}
