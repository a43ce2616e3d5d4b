use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geam::{scale_to_symmetric, Geam, GeamSpec};
use crate::linalg::{partial_trace, BipartiteDims, DensityMatrix, HermitianMatrix, Subsystem};
use crate::mcf::MonotoneFunction;
use crate::skewinfo::{Path, SkewContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    F,
    G,
    #[serde(rename = "F-scaled")]
    FScaled,
    #[serde(rename = "G-scaled")]
    GScaled,
}

impl Criterion {
    pub fn is_scaled(self) -> bool {
        matches!(self, Criterion::FScaled | Criterion::GScaled)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::F => "F",
            Criterion::G => "G",
            Criterion::FScaled => "F-scaled",
            Criterion::GScaled => "G-scaled",
        })
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(Criterion::F),
            "G" | "g" => Ok(Criterion::G),
            "F-scaled" | "f-scaled" => Ok(Criterion::FScaled),
            "G-scaled" | "g-scaled" => Ok(Criterion::GScaled),
            _ => Err(Error::Parse(format!("unknown criterion '{s}' (F, G, F-scaled, G-scaled)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

impl Verdict {
    /// `Entangled` iff `value > threshold`.
    pub fn from_values(value: f64, threshold: f64) -> Self {
        if value > threshold {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Entangled => "entangled",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Result of one criterion evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection {
    pub criterion: Criterion,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl Detection {
    fn new(criterion: Criterion, value: f64, threshold: f64) -> Self {
        Self {
            criterion,
            value,
            threshold,
            verdict: Verdict::from_values(value, threshold),
        }
    }

    /// Attaches the inputs needed to reproduce the evaluation.
    pub fn report(self, family: &str, param: Option<f64>, spec: &GeamSpec, f: Option<&MonotoneFunction>) -> DetectionReport {
        DetectionReport {
            criterion: self.criterion,
            value: self.value,
            threshold: self.threshold,
            verdict: self.verdict,
            family: family.to_string(),
            param,
            d: spec.dim(),
            spec: spec.clone(),
            f: f.map(ToString::to_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub criterion: Criterion,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub family: String,
    pub param: Option<f64>,
    pub d: usize,
    pub spec: GeamSpec,
    pub f: Option<String>,
}

/// Entrywise complex conjugate of every operator.
pub fn conjugate_geam(g: &Geam) -> Geam {
    g.map_operators(HermitianMatrix::conj)
        .expect("conjugation preserves shape")
}

fn check_pair(rho: &DensityMatrix, ga: &Geam, gb: &Geam) -> Result<usize> {
    let (a, b) = (ga.spec(), gb.spec());
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "local dimensions differ (d_A = {}, d_B = {})",
            a.dim(),
            b.dim()
        )));
    }
    let same_s = a.s_values().iter().zip(b.s_values()).all(|(x, y)| (x - y).abs() <= 1e-12);
    if a.m() != b.m() || !same_s {
        return Err(Error::InvalidParameter("GEAMs on A and B must share N, M_k and S".into()));
    }
    let d = a.dim();
    if rho.dim() != d * d {
        return Err(Error::DimensionMismatch(format!("state is {0}x{0}, expected {1}x{1}", rho.dim(), d * d)));
    }
    Ok(d)
}

fn uniform_s(spec: &GeamSpec) -> Result<f64> {
    spec.uniform_s()
        .ok_or_else(|| Error::InvalidParameter("criteria require a conical GEAM".into()))
}

fn frames(g: &Geam, scaled: bool) -> Result<Vec<Vec<HermitianMatrix>>> {
    Ok(if scaled {
        scale_to_symmetric(g)?.operators
    } else {
        g.frames().to_vec()
    })
}

/// `F = (1/N) Σ_{k,l} I_f(ρ_AB, P^A_{k,l} ⊗ I + I ⊗ P^B_{k,l})` against
/// `2S(d-1)/N`; scaled uses `P/γ_k` and `2NS(d-1)`.
pub fn criterion_f(rho: &DensityMatrix, ga: &Geam, gb: &Geam, f: &MonotoneFunction, scaled: bool) -> Result<Detection> {
    let d = check_pair(rho, ga, gb)?;
    let s = uniform_s(ga.spec())?;
    let n = ga.spec().n() as f64;
    let ctx = SkewContext::new(rho.clone(), f.clone());
    let id = HermitianMatrix::identity(d);
    let (fa, fb) = (frames(ga, scaled)?, frames(gb, scaled)?);
    let mut total = 0.0;
    for (pa, pb) in fa.iter().flatten().zip(fb.iter().flatten()) {
        let h = pa.kron(&id).add(&id.kron(pb));
        total += ctx.skew_information(&h, Path::Spectral)?;
    }
    let base = 2.0 * s * (d as f64 - 1.0) / n;
    Ok(if scaled {
        Detection::new(Criterion::FScaled, total / n, n * n * base)
    } else {
        Detection::new(Criterion::F, total / n, base)
    })
}

/// `G = Σ_{k,l} |tr((P^A_{k,l} ⊗ P^B_{k,l})(ρ_AB - ρ_A ⊗ ρ_B))|` against
/// `S √((1 - tr ρ_A²)(1 - tr ρ_B²))`; scaled uses `P/γ_k` and `N²` times
/// the threshold.
pub fn criterion_g(rho: &DensityMatrix, ga: &Geam, gb: &Geam, scaled: bool) -> Result<Detection> {
    let d = check_pair(rho, ga, gb)?;
    let s = uniform_s(ga.spec())?;
    let n = ga.spec().n() as f64;
    let dims = BipartiteDims::symmetric(d)?;
    let ra = partial_trace(rho, dims, Subsystem::A)?;
    let rb = partial_trace(rho, dims, Subsystem::B)?;
    let corr = rho.matrix().sub(&ra.matrix().kron(rb.matrix()));
    let (fa, fb) = (frames(ga, scaled)?, frames(gb, scaled)?);
    let value: f64 = fa
        .iter()
        .flatten()
        .zip(fb.iter().flatten())
        .map(|(pa, pb)| pa.kron(pb).hs_inner(&corr).abs())
        .sum();
    let threshold = s * ((1.0 - ra.purity()) * (1.0 - rb.purity())).max(0.0).sqrt();
    Ok(if scaled {
        Detection::new(Criterion::GScaled, value, n * n * threshold)
    } else {
        Detection::new(Criterion::G, value, threshold)
    })
}

/// Evaluates `criterion`; `f` is required for F and ignored for G.
pub fn detect(criterion: Criterion, rho: &DensityMatrix, ga: &Geam, gb: &Geam, f: Option<&MonotoneFunction>) -> Result<Detection> {
    match criterion {
        Criterion::F | Criterion::FScaled => {
            let f = f.ok_or_else(|| Error::InvalidParameter("criterion F needs a monotone function".into()))?;
            criterion_f(rho, ga, gb, f, criterion.is_scaled())
        }
        Criterion::G | Criterion::GScaled => criterion_g(rho, ga, gb, criterion.is_scaled()),
    }
}
