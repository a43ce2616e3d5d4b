//! Average coherence under GEAMs and the identities it satisfies.
//!
//! For a GEAM `P` with `N` frames,
//!
//! ```text
//! C_f^P(ρ) = (1/N) Σ_{k,l} I_f(ρ, P_{k,l})
//! ```
//!
//! and for a conical 2-design this equals `(S/N) Q_f(ρ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geam::{preset_geam, scale_to_symmetric, Geam, GeamSpec, HermitianBasis, Preset};
use crate::skewinfo::{Path, SkewContext};

/// One numerical identity check. `pass` is `residual <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub d: usize,
    pub f: String,
    pub spec: GeamSpec,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

/// `C_f^P(ρ)` by direct summation over every operator.
pub fn average_coherence_geam(ctx: &SkewContext, g: &Geam) -> Result<f64> {
    let total = g
        .operators()
        .map(|p| ctx.skew_information(p, Path::Spectral))
        .sum::<Result<f64>>()?;
    Ok(total / g.spec().n() as f64)
}

/// `(S/N) Q_f(ρ)`; `spec` must be conical.
pub fn closed_form_coherence(ctx: &SkewContext, spec: &GeamSpec) -> Result<f64> {
    check_dim(ctx, spec)?;
    let s = spec
        .uniform_s()
        .ok_or_else(|| Error::InvalidParameter(format!("spec is not conical: S = {:?}", spec.s_values())))?;
    Ok(s / spec.n() as f64 * ctx.quantum_uncertainty())
}

fn check_dim(ctx: &SkewContext, spec: &GeamSpec) -> Result<()> {
    if ctx.dim() != spec.dim() {
        return Err(Error::DimensionMismatch(format!("state has d = {}, spec has d = {}", ctx.dim(), spec.dim())));
    }
    Ok(())
}

/// Coherence under the symmetric measurement `{P_{k,l}/γ_k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricCoherence {
    /// `(1/N) Σ I_f(ρ, P_{k,l}/γ_k)`.
    pub direct: f64,
    /// `N S Q_f(ρ)`.
    pub closed: f64,
    /// `C_f^P(ρ)` of the underlying GEAM; `direct = N² geam_direct`.
    pub geam_direct: f64,
}

/// Requires `γ_k = 1/N` for every frame.
pub fn symmetric_measurement_coherence(ctx: &SkewContext, g: &Geam) -> Result<SymmetricCoherence> {
    let sym = scale_to_symmetric(g)?;
    let n = sym.n() as f64;
    let direct = sym
        .operators
        .iter()
        .flatten()
        .map(|p| ctx.skew_information(p, Path::Spectral))
        .sum::<Result<f64>>()?
        / n;
    let s = g
        .spec()
        .uniform_s()
        .ok_or_else(|| Error::InvalidParameter("spec is not conical".into()))?;
    Ok(SymmetricCoherence {
        direct,
        closed: n * s * ctx.quantum_uncertainty(),
        geam_direct: average_coherence_geam(ctx, g)?,
    })
}

/// Settings shared by every report of [`identity_suite`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub tolerance: f64,
    /// Haar samples for the unitary-average check.
    pub mc_samples: usize,
    /// Recorded in each report and used for the Monte-Carlo stream.
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            mc_samples: 20_000,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

/// Runs every identity on `(ρ, g, f)`:
///
/// - `theorem1`: direct `C_f^P` vs `(S/N) Q_f`
/// - `tradeoff-entropy`: `S_f + (N/S) C_f^P` vs `d - 1`
/// - `tradeoff-quasientropy`: `Σ_k S_f̃^{X_k}(ρ|ρ) + (N/S) C_f^P` vs `d`
/// - `entropy-quasientropy`: `Σ_k S_f̃^{X_k}(ρ|ρ)` vs `S_f + 1`
/// - `mub-sic-max-closed`: `Q/(d+1) + Q/(d(d+1))` vs `I_f^max`
/// - `mub-sic-max-direct`: the same from MUB and SIC preset operators
/// - `symmetric-scaling`: symmetric direct sum vs `N² C_f^P`
/// - `symmetric-closed`: symmetric direct sum vs `N S Q_f`
/// - `haar-average`: `S(d+1)/N` times the Haar mean vs `C_f^P`, with
///   tolerance `4` scaled standard errors
///
/// Trade-offs divide by `S`; at `S = 0` they are emitted with a
/// `:not-applicable` suffix and zero residual. The symmetric checks are
/// likewise not applicable when `γ` is not uniform.
pub fn identity_suite(ctx: &SkewContext, g: &Geam, basis: &HermitianBasis, cfg: &SuiteConfig) -> Result<Vec<IdentityReport>> {
    let spec = g.spec();
    check_dim(ctx, spec)?;
    if basis.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch(format!("basis has d = {}, state has d = {}", basis.dim(), ctx.dim())));
    }
    let d = ctx.dim();
    let df = d as f64;
    let n = spec.n() as f64;
    let q = ctx.quantum_uncertainty();
    let f = ctx.function().to_string();
    let report = |name: &str, lhs: f64, rhs: f64, tolerance: f64| {
        let residual = (lhs - rhs).abs();
        IdentityReport {
            identity: name.to_string(),
            d,
            f: f.clone(),
            spec: spec.clone(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
            seed: cfg.seed,
        }
    };
    let skipped = |name: &str| report(&format!("{name}:not-applicable"), 0.0, 0.0, cfg.tolerance);

    let direct = average_coherence_geam(ctx, g)?;
    let closed = closed_form_coherence(ctx, spec)?;
    let s = spec.uniform_s().expect("closed form succeeded");
    let quasi = ctx.quasientropy_sum(&basis.elements())?;
    let mut out = vec![report("theorem1", direct, closed, cfg.tolerance)];

    if s > 0.0 {
        let scaled = n / s * direct;
        out.push(report("tradeoff-entropy", ctx.f_entropy() + scaled, df - 1.0, cfg.tolerance));
        out.push(report("tradeoff-quasientropy", quasi + scaled, df, cfg.tolerance));
    } else {
        out.push(skipped("tradeoff-entropy"));
        out.push(skipped("tradeoff-quasientropy"));
    }
    out.push(report("entropy-quasientropy", quasi, ctx.f_entropy() + 1.0, cfg.tolerance));

    let mub_closed = q / (df + 1.0);
    let sic_closed = q / (df * (df + 1.0));
    out.push(report("mub-sic-max-closed", mub_closed + sic_closed, ctx.max_coherence(), cfg.tolerance));
    let mub = symmetric_measurement_coherence(ctx, &preset_geam(&Preset::Mub, d)?)?;
    let sic = symmetric_measurement_coherence(ctx, &preset_geam(&Preset::Sic, d)?)?;
    out.push(report("mub-sic-max-direct", mub.direct + sic.direct, ctx.max_coherence(), cfg.tolerance));

    match symmetric_measurement_coherence(ctx, g) {
        Ok(sym) => {
            out.push(report("symmetric-scaling", sym.direct, n * n * sym.geam_direct, cfg.tolerance));
            out.push(report("symmetric-closed", sym.direct, sym.closed, cfg.tolerance));
        }
        Err(Error::InvalidParameter(_)) => {
            out.push(skipped("symmetric-scaling"));
            out.push(skipped("symmetric-closed"));
        }
        Err(e) => return Err(e),
    }

    let mc = ctx.unitary_average_mc(cfg.mc_samples, cfg.seed, cfg.exec)?;
    let factor = s * (df + 1.0) / n;
    out.push(report("haar-average", factor * mc.mean, direct, 4.0 * factor * mc.stderr));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geam::{construct_geam, gell_mann_basis, gell_mann_basis_shuffled, preset_spec, Sign};
    use crate::linalg::DensityMatrix;
    use crate::mcf::MonotoneFunction;
    use crate::testutil::{random_function, random_state};
    use proptest::prelude::*;
    use rand::Rng;

    fn diag_ctx(f: MonotoneFunction) -> SkewContext {
        SkewContext::new(DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap(), f)
    }

    fn mub2() -> Geam {
        preset_geam(&Preset::Mub, 2).unwrap()
    }

    #[test]
    fn qubit_mub_examples() {
        let ctx = diag_ctx(MonotoneFunction::sld());
        let g = mub2();
        assert!((average_coherence_geam(&ctx, &g).unwrap() - 1.0 / 108.0).abs() < 1e-15);
        assert!((closed_form_coherence(&ctx, g.spec()).unwrap() - 1.0 / 108.0).abs() < 1e-15);
        let sym = symmetric_measurement_coherence(&ctx, &g).unwrap();
        assert!((sym.closed - 1.0 / 12.0).abs() < 1e-15);
        assert!((sym.direct / sym.geam_direct - 9.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_and_zero_s() {
        for d in 2..=4 {
            let ctx = SkewContext::new(DensityMatrix::maximally_mixed(d), MonotoneFunction::wy());
            let g = preset_geam(&Preset::Mub, d).unwrap();
            assert_eq!(average_coherence_geam(&ctx, &g).unwrap(), 0.0);
            let sym = symmetric_measurement_coherence(&ctx, &g).unwrap();
            assert_eq!((sym.direct, sym.closed), (0.0, 0.0));
        }
        let mut rng = crate::rng::stream_rng(1, 0);
        let ctx = SkewContext::new(random_state(&mut rng, 3), MonotoneFunction::sld());
        let spec = GeamSpec::conical(3, vec![3; 4], vec![0.25; 4], 0.0).unwrap();
        let g = construct_geam(&spec, &gell_mann_basis(3, spec.m()).unwrap(), &Sign::all_plus(4)).unwrap();
        assert!(average_coherence_geam(&ctx, &g).unwrap().abs() < 1e-15);
    }

    #[test]
    fn closed_form_refuses_non_conical() {
        let spec = GeamSpec::general(2, vec![2, 2, 2], vec![1.0 / 3.0; 3], vec![0.1, 0.05, 0.05]).unwrap();
        assert!(closed_form_coherence(&diag_ctx(MonotoneFunction::sld()), &spec).is_err());
    }

    #[test]
    fn corollary_presets() {
        let mut rng = crate::rng::stream_rng(5, 0);
        for d in 2..=4 {
            let df = d as f64;
            let ctx = SkewContext::new(random_state(&mut rng, d), MonotoneFunction::gwyd(0.2, 0.5).unwrap());
            let q = ctx.quantum_uncertainty();
            let b = 0.8;
            let mum = closed_form_coherence(&ctx, &preset_spec(&Preset::Mum { b }, d).unwrap()).unwrap();
            // The MUM row's S·Q is N times the average coherence.
            let sq = (df * b - 1.0) / ((df + 1.0) * (df * df - 1.0)) * q;
            assert!((mum * (df + 1.0) - sq).abs() < 1e-14);
            let gsic = closed_form_coherence(&ctx, &preset_spec(&Preset::Gsic { b }, d).unwrap()).unwrap();
            let want = (df * b - 1.0) / (df * (df * df - 1.0)) * q;
            assert!((gsic - want).abs() < 1e-14);
        }
    }

    #[test]
    fn pure_qutrit_mum() {
        let mut rng = crate::rng::stream_rng(11, 0);
        let rho = crate::linalg::sample::haar_pure_state(&mut rng, 3).unwrap();
        let ctx = SkewContext::new(rho, MonotoneFunction::gwyd(0.2, 0.5).unwrap());
        let g = preset_geam(&Preset::Mum { b: 0.8 }, 3).unwrap();
        let s = g.spec().uniform_s().unwrap();
        let want = s / 4.0 * 2.0;
        assert!((average_coherence_geam(&ctx, &g).unwrap() - want).abs() <= 1e-9);
    }

    #[test]
    fn qubit_suite_passes() {
        let ctx = diag_ctx(MonotoneFunction::sld());
        let g = mub2();
        let cfg = SuiteConfig {
            seed: 3,
            ..SuiteConfig::default()
        };
        let reports = identity_suite(&ctx, &g, &gell_mann_basis(2, &[2, 2, 2]).unwrap(), &cfg).unwrap();
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
        let t3 = reports.iter().find(|r| r.identity == "mub-sic-max-closed").unwrap();
        assert!(t3.residual <= 1e-12);
        let json = serde_json::to_string(&reports).unwrap();
        let back: Vec<IdentityReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, reports);
    }

    #[test]
    fn suite_marks_zero_s() {
        let spec = GeamSpec::conical(2, vec![2; 3], vec![1.0 / 3.0; 3], 0.0).unwrap();
        let basis = gell_mann_basis(2, spec.m()).unwrap();
        let g = construct_geam(&spec, &basis, &Sign::all_plus(3)).unwrap();
        let cfg = SuiteConfig {
            mc_samples: 200,
            ..SuiteConfig::default()
        };
        let reports = identity_suite(&diag_ctx(MonotoneFunction::wy()), &g, &basis, &cfg).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.identity.as_str()).collect();
        assert!(names.contains(&"tradeoff-entropy:not-applicable"));
        assert!(names.contains(&"tradeoff-quasientropy:not-applicable"));
        assert!(reports.iter().all(|r| r.pass));
    }

    #[test]
    fn impossible_tolerance_fails() {
        let mut rng = crate::rng::stream_rng(2, 0);
        let ctx = SkewContext::new(random_state(&mut rng, 3), MonotoneFunction::wy());
        let g = preset_geam(&Preset::Mum { b: 0.8 }, 3).unwrap();
        let cfg = SuiteConfig {
            tolerance: 1e-30,
            mc_samples: 200,
            ..SuiteConfig::default()
        };
        let reports = identity_suite(&ctx, &g, &gell_mann_basis(3, g.spec().m()).unwrap(), &cfg).unwrap();
        assert!(reports.iter().any(|r| !r.pass));
    }

    #[test]
    fn coherence_vanishes_only_at_maximally_mixed() {
        let mut rng = crate::rng::stream_rng(8, 0);
        for d in 2..=3 {
            let g = preset_geam(&Preset::Mum { b: 0.9 }, d).unwrap();
            for _ in 0..10 {
                let ctx = SkewContext::new(random_state(&mut rng, d), random_function(&mut rng));
                let c = average_coherence_geam(&ctx, &g).unwrap();
                assert!(c > 1e-9);
                assert!(ctx.quantum_uncertainty() > 1e-9);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn theorem1_any_signs_and_assignment(seed in any::<u64>(), d in 2usize..=4, which in 0usize..5) {
            let mut rng = crate::rng::stream_rng(seed, 0);
            let presets = [
                Preset::Mub,
                Preset::Mum { b: 0.8 },
                Preset::Sic,
                Preset::Gsic { b: 0.7 },
                Preset::Nm { n: d + 1, m: d, b: Some(0.6 + 0.3 / d as f64) },
            ];
            let spec = preset_spec(&presets[which], d).unwrap();
            let basis = gell_mann_basis_shuffled(d, spec.m(), rng.random()).unwrap();
            let signs: Vec<Sign> = (0..spec.n()).map(|_| if rng.random() { Sign::Plus } else { Sign::Minus }).collect();
            let g = construct_geam(&spec, &basis, &signs).unwrap();
            let ctx = SkewContext::new(random_state(&mut rng, d), random_function(&mut rng));
            let direct = average_coherence_geam(&ctx, &g).unwrap();
            let closed = closed_form_coherence(&ctx, &spec).unwrap();
            prop_assert!((direct - closed).abs() <= 1e-9, "{direct} vs {closed}");
            let sym = symmetric_measurement_coherence(&ctx, &g).unwrap();
            prop_assert!((sym.direct - sym.closed).abs() <= 1e-9);
            let n = spec.n() as f64;
            prop_assert!((sym.direct - n * n * direct).abs() <= 1e-9);
        }

        #[test]
        fn tradeoff_closure(seed in any::<u64>(), d in 2usize..=4) {
            let mut rng = crate::rng::stream_rng(seed, 0);
            let ctx = SkewContext::new(random_state(&mut rng, d), random_function(&mut rng));
            let g = preset_geam(&Preset::Gsic { b: 0.7 }, d).unwrap();
            let s = g.spec().uniform_s().unwrap();
            let direct = average_coherence_geam(&ctx, &g).unwrap();
            let quasi = ctx.quasientropy_sum(&crate::linalg::operator_basis(d)).unwrap();
            let e14 = ctx.f_entropy() + direct / s - (d as f64 - 1.0);
            let e15 = quasi + direct / s - d as f64;
            let e13 = quasi - ctx.f_entropy() - 1.0;
            prop_assert!(e14.abs() <= 1e-9 && e15.abs() <= 1e-9);
            prop_assert!((e15 - e14 - e13).abs() <= 1e-12);
        }
    }
}
