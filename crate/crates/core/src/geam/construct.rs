use serde::{Deserialize, Serialize};

use super::basis::{from_measurement, gell_mann_basis, HermitianBasis};
use super::frames::{mub_frames, sic_frame};
use super::spec::{GeamRecord, GeamShape, GeamSpec, Preset, Sign};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, HermitianMatrix};

/// Eigenvalue floor counted as positive by [`max_feasible_s`].
pub const POSITIVITY_FLOOR: f64 = 1e-12;

/// A realized GEAM: operators `P_{k,l}` for frames `k = 0..N` and
/// `l = 0..M_k`.
#[derive(Clone, Debug)]
pub struct Geam {
    spec: GeamSpec,
    signs: Vec<Sign>,
    operators: Vec<Vec<HermitianMatrix>>,
    min_eigenvalue: f64,
}

impl Geam {
    /// Wraps explicit operators, checking only their shape.
    pub fn from_parts(spec: GeamSpec, signs: Vec<Sign>, operators: Vec<Vec<HermitianMatrix>>) -> Result<Self> {
        if signs.len() != spec.n() || operators.len() != spec.n() {
            return Err(Error::DimensionMismatch(format!(
                "spec has {} frames, got {} signs and {} operator frames",
                spec.n(),
                signs.len(),
                operators.len()
            )));
        }
        for (k, frame) in operators.iter().enumerate() {
            if frame.len() != spec.m()[k] || frame.iter().any(|p| p.dim() != spec.dim()) {
                return Err(Error::DimensionMismatch(format!("frame {} does not match the spec", k + 1)));
            }
        }
        let mut min_eigenvalue = f64::INFINITY;
        for p in operators.iter().flatten() {
            let e = hermitian_eig(p)?;
            min_eigenvalue = min_eigenvalue.min(*e.eigenvalues().last().expect("non-empty"));
        }
        Ok(Self {
            spec,
            signs,
            operators,
            min_eigenvalue,
        })
    }

    pub fn spec(&self) -> &GeamSpec {
        &self.spec
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn frames(&self) -> &[Vec<HermitianMatrix>] {
        &self.operators
    }

    pub fn frame(&self, k: usize) -> &[HermitianMatrix] {
        &self.operators[k]
    }

    /// All operators in frame order.
    pub fn operators(&self) -> impl Iterator<Item = &HermitianMatrix> {
        self.operators.iter().flatten()
    }

    pub fn operator_count(&self) -> usize {
        self.operators.iter().map(Vec::len).sum()
    }

    /// Smallest eigenvalue over every `P_{k,l}`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn record(&self) -> GeamRecord {
        GeamRecord {
            spec: self.spec.clone(),
            signs: self.signs.clone(),
        }
    }

    /// Applies `f` to every operator.
    pub fn map_operators(&self, f: impl Fn(&HermitianMatrix) -> HermitianMatrix) -> Result<Self> {
        let ops = self.operators.iter().map(|fr| fr.iter().map(&f).collect()).collect();
        Self::from_parts(self.spec.clone(), self.signs.clone(), ops)
    }
}

/// `P_{k,l} = (a_k/d) I + τ_k H_{k,l}` with `τ_k = σ_k |τ_k|` and
///
/// ```text
/// H_{k,l} = G_k - √M_k (√M_k + 1) G_{k,l}   (l < M_k)
/// H_{k,M} = (√M_k + 1) G_k
/// ```
pub fn construct_geam(spec: &GeamSpec, basis: &HermitianBasis, signs: &[Sign]) -> Result<Geam> {
    if basis.dim() != spec.dim() || basis.partition() != spec.m() {
        return Err(Error::DimensionMismatch(format!(
            "basis (d = {}, partition {:?}) does not match spec (d = {}, M = {:?})",
            basis.dim(),
            basis.partition(),
            spec.dim(),
            spec.m()
        )));
    }
    if signs.len() != spec.n() {
        return Err(Error::DimensionMismatch(format!("{} signs for {} frames", signs.len(), spec.n())));
    }
    let d = spec.dim() as f64;
    let operators = (0..spec.n())
        .map(|k| {
            let s = (spec.m()[k] as f64).sqrt();
            let shift = spec.a(k) / d;
            let tau = signs[k].value() * spec.tau(k);
            let gk = basis.frame_sum(k);
            let mut frame: Vec<HermitianMatrix> = basis
                .frame(k)
                .iter()
                .map(|g| gk.sub(&g.scale(s * (s + 1.0))).affine(shift, tau))
                .collect();
            frame.push(gk.scale(s + 1.0).affine(shift, tau));
            frame
        })
        .collect();
    Geam::from_parts(spec.clone(), signs.to_vec(), operators)
}

/// One row of a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<Check>,
    /// Per frame: `tr P² / (tr P)²` of the first element.
    pub measured_b: Vec<f64>,
    /// Per frame: `tr(P_1 P_2) / (tr P_1)²`.
    pub measured_c: Vec<f64>,
    /// Per frame: `a_k² (b_k - c_k)` from the measured values.
    pub measured_s: Vec<f64>,
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name.starts_with(name))
    }

    /// True when every check except positivity passes.
    pub fn trace_conditions_pass(&self) -> bool {
        self.checks.iter().filter(|c| !c.name.starts_with("(g)")).all(|c| c.pass)
    }
}

/// Checks the GEAM conditions on the realized operators:
///
/// - (a) `Σ_l P_{k,l} = γ_k I`
/// - (b) `tr P_{k,l} = a_k`
/// - (c) `tr P_{k,l}² = b_k a_k²`
/// - (d) `tr(P_{k,l} P_{k,l'}) = c_k a_k²` for `l ≠ l'`
/// - (e) `tr(P_{k,l} P_{k',l'}) = a_k a_{k'}/d` for `k ≠ k'`
/// - (f) `d² + N - 1` operators
/// - (g) every `P_{k,l} ≥ -tol`
pub fn validate_geam(g: &Geam, tol: f64) -> ValidationReport {
    let spec = g.spec();
    let (d, n) = (spec.dim(), spec.n());
    let df = d as f64;
    let (mut dev_a, mut dev_b, mut dev_c, mut dev_d, mut dev_e) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut measured_b = Vec::with_capacity(n);
    let mut measured_c = Vec::with_capacity(n);
    let mut measured_s = Vec::with_capacity(n);
    for k in 0..n {
        let frame = g.frame(k);
        let ak = spec.a(k);
        let mut sum = HermitianMatrix::from_real_diagonal(&vec![0.0; d]);
        for p in frame {
            sum = sum.add(p);
        }
        dev_a = dev_a.max(sum.as_matrix().max_abs_diff(HermitianMatrix::identity(d).scale(spec.gamma()[k]).as_matrix()));
        for (l, p) in frame.iter().enumerate() {
            dev_b = dev_b.max((p.trace() - ak).abs());
            dev_c = dev_c.max((p.hs_inner(p) - spec.b(k) * ak * ak).abs());
            for q in &frame[l + 1..] {
                dev_d = dev_d.max((p.hs_inner(q) - spec.c(k) * ak * ak).abs());
            }
            for k2 in k + 1..n {
                let target = ak * spec.a(k2) / df;
                for q in g.frame(k2) {
                    dev_e = dev_e.max((p.hs_inner(q) - target).abs());
                }
            }
        }
        let t = frame[0].trace();
        let b = frame[0].hs_inner(&frame[0]) / (t * t);
        let c = frame[0].hs_inner(&frame[1]) / (t * t);
        measured_b.push(b);
        measured_c.push(c);
        measured_s.push(t * t * (b - c));
    }
    let count_dev = (g.operator_count() as f64 - (d * d + n - 1) as f64).abs();
    let min_eig = g.min_eigenvalue();
    let row = |name: &str, deviation: f64| Check {
        name: name.to_string(),
        deviation,
        pass: deviation <= tol,
    };
    let checks = vec![
        row("(a) frame sums", dev_a),
        row("(b) traces", dev_b),
        row("(c) purities", dev_c),
        row("(d) intra-frame overlaps", dev_d),
        row("(e) inter-frame overlaps", dev_e),
        Check {
            name: "(f) operator count".into(),
            deviation: count_dev,
            pass: count_dev == 0.0,
        },
        Check {
            name: "(g) positivity".into(),
            deviation: (-min_eig).max(0.0),
            pass: min_eig >= -tol,
        },
    ];
    ValidationReport {
        tolerance: tol,
        checks,
        measured_b,
        measured_c,
        measured_s,
        min_eigenvalue: min_eig,
    }
}

/// Largest uniform `S` in `[0, cap]` whose operators all have eigenvalues
/// `≥ -1e-12`, by bisection to `1e-10`.
///
/// Each eigenvalue of `P_{k,l}` is affine in `τ_k ∝ √S`, so the minimum is
/// concave in `√S` and the feasible set is an interval starting at 0.
pub fn max_feasible_s(shape: &GeamShape, basis: &HermitianBasis, signs: &[Sign]) -> Result<f64> {
    let feasible = |s: f64| -> Result<bool> {
        let spec = GeamSpec::conical(shape.d, shape.m.clone(), shape.gamma.clone(), s)?;
        Ok(construct_geam(&spec, basis, signs)?.min_eigenvalue() >= -POSITIVITY_FLOOR)
    };
    let cap = shape.cap();
    if feasible(cap)? {
        return Ok(cap);
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The generalized symmetric measurement `{P_{k,l}/γ_k}`, each frame
/// summing to `I`.
#[derive(Clone, Debug)]
pub struct SymmetricMeasurement {
    pub operators: Vec<Vec<HermitianMatrix>>,
}

impl SymmetricMeasurement {
    pub fn n(&self) -> usize {
        self.operators.len()
    }
}

/// `N · P_{k,l}`; requires `γ_k = 1/N` for every frame.
pub fn scale_to_symmetric(g: &Geam) -> Result<SymmetricMeasurement> {
    let n = g.spec().n() as f64;
    if g.spec().gamma().iter().any(|&gk| (gk * n - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "symmetric scaling needs γ_k = 1/N, got {:?}",
            g.spec().gamma()
        )));
    }
    Ok(SymmetricMeasurement {
        operators: g.frames().iter().map(|fr| fr.iter().map(|p| p.scale(n)).collect()).collect(),
    })
}

/// Basis used for presets: the MUB- or SIC-adapted basis when the shape
/// matches one and a construction exists for `d`, else Gell-Mann. At
/// `d = 2` the Gell-Mann (Pauli) basis already gives rank-one operators.
pub fn preset_basis(d: usize, partition: &[usize]) -> Result<HermitianBasis> {
    if d > 2 {
        if partition.len() == d + 1 && partition.iter().all(|&m| m == d) {
            if let Some(frames) = mub_frames(d) {
                return from_measurement(d, &frames);
            }
        }
        if partition == [d * d] {
            if let Some(frame) = sic_frame(d) {
                return from_measurement(d, &[frame]);
            }
        }
    }
    gell_mann_basis(d, partition)
}

/// Spec for a named preset in dimension `d`.
pub fn preset_spec(preset: &Preset, d: usize) -> Result<GeamSpec> {
    let shape = preset.shape(d)?;
    let b = match *preset {
        Preset::Mub | Preset::Sic => 1.0,
        Preset::Mum { b } | Preset::Gsic { b } | Preset::Nm { b: Some(b), .. } => {
            preset.check_b(d, b)?;
            b
        }
        Preset::Nm { b: None, .. } => {
            let basis = preset_basis(d, &shape.m)?;
            let s_max = max_feasible_s(&shape, &basis, &Sign::all_plus(shape.m.len()))?;
            let b = 0.5 * (1.0 / d as f64 + shape.b_from_s(0, s_max));
            preset.check_b(d, b)?;
            b
        }
    };
    let label = match *preset {
        Preset::Nm { n, m, b: None } => Preset::Nm { n, m, b: Some(b) }.to_string(),
        _ => preset.to_string(),
    };
    Ok(GeamSpec::from_shape(shape, preset.table_s(d, b))?.with_preset(label))
}

/// Preset spec realized on [`preset_basis`] with all signs positive.
pub fn preset_geam(preset: &Preset, d: usize) -> Result<Geam> {
    let spec = preset_spec(preset, d)?;
    let basis = preset_basis(d, spec.m())?;
    construct_geam(&spec, &basis, &Sign::all_plus(spec.n()))
}
