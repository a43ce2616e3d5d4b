//! Metric-adjusted skew information and the quantities built from it.
//!
//! For a state `ρ = Σ λ_j |φ_j⟩⟨φ_j|` and observable `H`,
//!
//! ```text
//! I_f(ρ, H) = f(0)/2 · Σ_{m,n} (λ_m - λ_n)² c_f(λ_m, λ_n) |⟨φ_m|H|φ_n⟩|²
//! Q_f(ρ)    = f(0)/2 · Σ_{m,n} (λ_m - λ_n)² c_f(λ_m, λ_n)
//! ```
//!
//! `Q_f` is the sum of `I_f(ρ, X_k)` over any operator orthonormal basis.
//! All evaluations work in the eigenbasis of `ρ`, where the
//! superoperator `c_f(L_ρ, R_ρ)` is diagonal.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{orthonormality_defect, sample::haar_unitary, ComplexMatrix, DensityMatrix, HermitianMatrix, TOLERANCES};
use crate::mcf::{Kernel, MonotoneFunction};
use crate::rng::stream_rng;

const MC_CHUNK: usize = 256;
pub const MIN_MC_SAMPLES: usize = 100;

/// How [`SkewContext::skew_information`] evaluates `I_f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    /// Weighted sum of `|⟨φ_m|H|φ_n⟩|²`.
    Spectral,
    /// `f(0)/2 · tr(A^† c_f(L, R) A)` with `A = i[ρ, H]`.
    Commutator,
}

/// A state and a monotone function, with the spectral data needed by
/// every evaluation precomputed.
#[derive(Clone, Debug)]
pub struct SkewContext {
    state: DensityMatrix,
    f: MonotoneFunction,
    /// Eigenvalues clipped to `[0, ∞)` with roundoff-level values set to 0.
    lambda: Vec<f64>,
    /// `f(0)/2 · c_f(λ_m, λ_n)`, 0 for the zero-weight pair.
    half_c: Vec<f64>,
    /// `(λ_m - λ_n)² · half_c[m][n]`.
    weight: Vec<f64>,
}

/// Monte-Carlo mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl SkewContext {
    pub fn new(state: DensityMatrix, f: MonotoneFunction) -> Self {
        let d = state.dim();
        let lambda: Vec<f64> = state
            .spectrum()
            .eigenvalues()
            .iter()
            .map(|&l| if l <= TOLERANCES.spectrum_snap { 0.0 } else { l })
            .collect();
        let f0 = f.f0();
        let mut half_c = vec![0.0; d * d];
        let mut weight = vec![0.0; d * d];
        for m in 0..d {
            for n in 0..d {
                let (x, y) = (lambda[m], lambda[n]);
                let hc = match f.kernel(x, y) {
                    Kernel::Value(c) => 0.5 * f0 * c,
                    Kernel::ZeroWeight => 0.0,
                };
                half_c[m * d + n] = hc;
                weight[m * d + n] = (x - y) * (x - y) * hc;
            }
        }
        Self { state, f, lambda, half_c, weight }
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn function(&self) -> &MonotoneFunction {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Eigenvalues as used by the kernels (descending, nonnegative).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    fn check_dim(&self, h: &HermitianMatrix) -> Result<()> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "observable is {0}x{0}, state is {1}x{1}",
                h.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `I_f(ρ, H)`.
    pub fn skew_information(&self, h: &HermitianMatrix, path: Path) -> Result<f64> {
        self.check_dim(h)?;
        let spec = self.state.spectrum();
        Ok(match path {
            Path::Spectral => {
                let hp = spec.to_eigenbasis(h.as_matrix());
                weighted_sum(&self.weight, &hp)
            }
            Path::Commutator => {
                let a = self.state.matrix().as_matrix().commutator(h.as_matrix()).scale(C64::i());
                let ap = spec.to_eigenbasis(&a);
                weighted_sum(&self.half_c, &ap)
            }
        })
    }

    /// `Q_f(ρ)`, in `[0, d - 1]`.
    pub fn quantum_uncertainty(&self) -> f64 {
        self.weight.iter().sum()
    }

    /// `I_f^max(ρ) = Q_f(ρ) / d`.
    pub fn max_coherence(&self) -> f64 {
        self.quantum_uncertainty() / self.dim() as f64
    }

    /// Quantum f-entropy `S_f(ρ) = d - 1 - Q_f(ρ)`.
    pub fn f_entropy(&self) -> f64 {
        (self.dim() - 1) as f64 - self.quantum_uncertainty()
    }

    /// `Σ_k S_f̃^{X_k}(ρ|ρ)` with
    /// `S_f̃^X(ρ|ρ) = Σ_{m,n} m_f̃(λ_m, λ_n) |⟨φ_m|X|φ_n⟩|²`.
    ///
    /// `basis` must hold `d²` operator orthonormal Hermitian matrices.
    pub fn quasientropy_sum(&self, basis: &[HermitianMatrix]) -> Result<f64> {
        let d = self.dim();
        if basis.len() != d * d {
            return Err(Error::InvalidParameter(format!(
                "basis has {} elements, expected {}",
                basis.len(),
                d * d
            )));
        }
        for x in basis {
            self.check_dim(x)?;
        }
        let defect = orthonormality_defect(basis);
        if defect > 1e-10 {
            return Err(Error::InvalidParameter(format!("basis is not orthonormal (defect {defect:e})")));
        }
        let tilde = self.f.tilde();
        let mut means = vec![0.0; d * d];
        for m in 0..d {
            for n in 0..d {
                means[m * d + n] = tilde.mean(self.lambda[m], self.lambda[n]);
            }
        }
        let spec = self.state.spectrum();
        Ok(basis
            .iter()
            .map(|x| weighted_sum(&means, &spec.to_eigenbasis(x.as_matrix())))
            .sum())
    }

    /// `Σ_i I_f(ρ, U|i⟩⟨i|U^†)` for one unitary `U`.
    pub fn basis_coherence(&self, u: &ComplexMatrix) -> f64 {
        let d = self.dim();
        // ⟨φ_m|U|i⟩⟨i|U^†|φ_n⟩ factorizes, so each term is |w_m|²|w_n|².
        let w = &self.state.spectrum().eigenvectors().adjoint() * u;
        let mut total = 0.0;
        for i in 0..d {
            let p: Vec<f64> = (0..d).map(|m| w[(m, i)].norm_sqr()).collect();
            for m in 0..d {
                for n in 0..d {
                    total += self.weight[m * d + n] * p[m] * p[n];
                }
            }
        }
        total
    }

    /// Haar average of [`Self::basis_coherence`], estimated from `samples`
    /// unitaries. Samples are drawn in chunks of 256; chunk `c` uses
    /// stream `c` of `seed`, so the estimate does not depend on `exec`.
    pub fn unitary_average_mc(&self, samples: usize, seed: u64, exec: Exec) -> Result<McEstimate> {
        if samples < MIN_MC_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_MC_SAMPLES} Monte-Carlo samples, got {samples}"
            )));
        }
        let d = self.dim();
        let chunks = samples.div_ceil(MC_CHUNK);
        let values: Vec<Vec<f64>> = exec.map_range(chunks, |c| {
            let mut rng = stream_rng(seed, c as u64);
            let n = MC_CHUNK.min(samples - c * MC_CHUNK);
            (0..n).map(|_| self.basis_coherence(&haar_unitary(&mut rng, d))).collect()
        });
        let values: Vec<f64> = values.into_iter().flatten().collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        Ok(McEstimate {
            mean,
            stderr: (var / n).sqrt(),
            samples,
        })
    }
}

fn weighted_sum(w: &[f64], a: &ComplexMatrix) -> f64 {
    w.iter().zip(a.data()).map(|(w, z)| w * z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{operator_basis, pauli};
    use crate::testutil::{random_function, random_observable, random_state};
    use proptest::prelude::*;

    fn diag_state() -> DensityMatrix {
        DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap()
    }

    fn ket0() -> DensityMatrix {
        DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap()
    }

    fn both(ctx: &SkewContext, h: &HermitianMatrix) -> (f64, f64) {
        (
            ctx.skew_information(h, Path::Spectral).unwrap(),
            ctx.skew_information(h, Path::Commutator).unwrap(),
        )
    }

    #[test]
    fn skew_information_examples() {
        let [sx, _, sz] = pauli();
        let ctx = SkewContext::new(diag_state(), MonotoneFunction::sld());
        assert_eq!(both(&ctx, &sz), (0.0, 0.0));
        let (s, c) = both(&ctx, &sx);
        assert!((s - 0.25).abs() < 1e-15 && (c - 0.25).abs() < 1e-15);
        let ctx = SkewContext::new(ket0(), MonotoneFunction::wy());
        let (s, c) = both(&ctx, &sx);
        assert!((s - 1.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let ctx = SkewContext::new(diag_state(), MonotoneFunction::sld());
        assert!(ctx.skew_information(&HermitianMatrix::identity(3), Path::Spectral).is_err());
    }

    #[test]
    fn uncertainty_and_entropy_examples() {
        let sld = MonotoneFunction::sld();
        let ctx = SkewContext::new(diag_state(), sld.clone());
        assert!((ctx.quantum_uncertainty() - 0.25).abs() < 1e-15);
        assert!((ctx.max_coherence() - 0.125).abs() < 1e-15);
        assert!((ctx.f_entropy() - 0.75).abs() < 1e-15);
        let mixed = SkewContext::new(DensityMatrix::maximally_mixed(3), sld.clone());
        assert_eq!(mixed.quantum_uncertainty(), 0.0);
        assert_eq!(mixed.f_entropy(), 2.0);
        for f in ["sld", "wy", "wyd:0.3", "gwyd:0.2,0.5"] {
            let f: MonotoneFunction = f.parse().unwrap();
            for d in 2..=5 {
                let mut p = vec![0.0; d];
                p[d - 1] = 1.0;
                let ctx = SkewContext::new(DensityMatrix::from_diagonal(&p).unwrap(), f.clone());
                assert!((ctx.quantum_uncertainty() - (d - 1) as f64).abs() <= 1e-12, "{f} d={d}");
                assert!((ctx.max_coherence() - (d - 1) as f64 / d as f64).abs() <= 1e-12);
                assert!(ctx.f_entropy().abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn quasientropy_examples() {
        let sld = MonotoneFunction::sld();
        let basis = operator_basis(2);
        let ctx = SkewContext::new(diag_state(), sld.clone());
        assert!((ctx.quasientropy_sum(&basis).unwrap() - 1.75).abs() <= 1e-14);
        let ctx = SkewContext::new(ket0(), sld.clone());
        assert!((ctx.quasientropy_sum(&basis).unwrap() - 1.0).abs() <= 1e-14);
        for d in 2..=4 {
            let ctx = SkewContext::new(DensityMatrix::maximally_mixed(d), MonotoneFunction::wy());
            assert!((ctx.quasientropy_sum(&operator_basis(d)).unwrap() - d as f64).abs() <= 1e-12);
        }
    }

    #[test]
    fn quasientropy_rejects_bad_bases() {
        let ctx = SkewContext::new(diag_state(), MonotoneFunction::sld());
        let mut basis = operator_basis(2);
        assert!(ctx.quasientropy_sum(&basis[..3]).is_err());
        basis[1] = basis[1].scale(1.01);
        assert!(ctx.quasientropy_sum(&basis).is_err());
    }

    #[test]
    fn monte_carlo_examples() {
        let sld = MonotoneFunction::sld();
        let mixed = SkewContext::new(DensityMatrix::maximally_mixed(2), sld.clone());
        let est = mixed.unitary_average_mc(1000, 1, Exec::Parallel).unwrap();
        assert_eq!((est.mean, est.stderr), (0.0, 0.0));
        for (rho, target) in [(ket0(), 1.0 / 3.0), (diag_state(), 1.0 / 12.0)] {
            let ctx = SkewContext::new(rho, sld.clone());
            let est = ctx.unitary_average_mc(10_000, 2024, Exec::Parallel).unwrap();
            assert!((est.mean - target).abs() <= 4.0 * est.stderr, "{est:?} vs {target}");
        }
        assert!(mixed.unitary_average_mc(99, 1, Exec::Sequential).is_err());
    }

    #[test]
    fn monte_carlo_is_strategy_independent() {
        let ctx = SkewContext::new(diag_state(), MonotoneFunction::wy());
        let a = ctx.unitary_average_mc(700, 5, Exec::Sequential).unwrap();
        let b = ctx.unitary_average_mc(700, 5, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn spectral_and_commutator_paths_agree(seed in any::<u64>(), d in 2usize..=4) {
            let mut rng = stream_rng(seed, 0);
            let ctx = SkewContext::new(random_state(&mut rng, d), random_function(&mut rng));
            let h = random_observable(&mut rng, d);
            let (s, c) = both(&ctx, &h);
            prop_assert!((s - c).abs() <= 1e-10, "{s} vs {c}");
            prop_assert!(s >= -1e-12);
        }
    }

    proptest! {
        #[test]
        fn convex_in_the_state(seed in any::<u64>(), d in 2usize..=4, p in 0.01f64..0.99) {
            let mut rng = stream_rng(seed, 1);
            let f = random_function(&mut rng);
            let (r1, r2) = (random_state(&mut rng, d), random_state(&mut rng, d));
            let h = random_observable(&mut rng, d);
            let mix = DensityMatrix::mixture(&[(p, &r1), (1.0 - p, &r2)]).unwrap();
            let i = |r: &DensityMatrix| SkewContext::new(r.clone(), f.clone()).skew_information(&h, Path::Spectral).unwrap();
            prop_assert!(i(&mix) <= p * i(&r1) + (1.0 - p) * i(&r2) + 1e-9);
        }

        #[test]
        fn additive_over_tensor_products(seed in any::<u64>(), da in 2usize..=3, db in 2usize..=3) {
            let mut rng = stream_rng(seed, 2);
            let f = random_function(&mut rng);
            let (ra, rb) = (random_state(&mut rng, da), random_state(&mut rng, db));
            let (ha, hb) = (random_observable(&mut rng, da), random_observable(&mut rng, db));
            let h = ha.kron(&HermitianMatrix::identity(db)).add(&HermitianMatrix::identity(da).kron(&hb));
            let joint = SkewContext::new(ra.kron(&rb).unwrap(), f.clone()).skew_information(&h, Path::Spectral).unwrap();
            let ia = SkewContext::new(ra, f.clone()).skew_information(&ha, Path::Spectral).unwrap();
            let ib = SkewContext::new(rb, f).skew_information(&hb, Path::Spectral).unwrap();
            prop_assert!((joint - ia - ib).abs() <= 1e-9, "{joint} vs {}", ia + ib);
        }

        #[test]
        fn uncertainty_is_basis_independent_and_bounded(seed in any::<u64>(), d in 2usize..=4) {
            let mut rng = stream_rng(seed, 3);
            let ctx = SkewContext::new(random_state(&mut rng, d), random_function(&mut rng));
            let q = ctx.quantum_uncertainty();
            prop_assert!((-1e-10..=(d - 1) as f64 + 1e-10).contains(&q));
            let rotated = |u: &ComplexMatrix| -> f64 {
                operator_basis(d)
                    .iter()
                    .map(|x| {
                        let y = HermitianMatrix::symmetrized(&(&(u * x.as_matrix()) * &u.adjoint()));
                        ctx.skew_information(&y, Path::Spectral).unwrap()
                    })
                    .sum()
            };
            let (u1, u2) = (haar_unitary(&mut rng, d), haar_unitary(&mut rng, d));
            prop_assert!((rotated(&u1) - q).abs() <= 1e-9);
            prop_assert!((rotated(&u1) - rotated(&u2)).abs() <= 1e-9);
            let basis = operator_basis(d);
            prop_assert!((ctx.quasientropy_sum(&basis).unwrap() - 1.0 - ctx.f_entropy()).abs() <= 1e-9);
        }
    }
}
