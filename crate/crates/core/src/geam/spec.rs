use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

/// Sign `σ_k` of the frame parameter `τ_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn all_plus(n: usize) -> Vec<Sign> {
        vec![Sign::Plus; n]
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be 1 or -1, got {v}"))),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Frame structure `(d, M_k, γ_k)` without the 2-design constant.
#[derive(Clone, Debug, PartialEq)]
pub struct GeamShape {
    pub d: usize,
    pub m: Vec<usize>,
    pub gamma: Vec<f64>,
}

impl GeamShape {
    /// Uniform shape: `n` frames of `m` elements, `γ = 1/n`.
    pub fn uniform(d: usize, n: usize, m: usize) -> Self {
        Self {
            d,
            m: vec![m; n],
            gamma: vec![1.0 / n as f64; n],
        }
    }

    /// Largest `S` allowed for frame `k`:
    /// `min{dγ²/M, (d-1)/(M-1) · dγ²/M}`.
    pub fn frame_cap(&self, k: usize) -> f64 {
        let (d, m, g) = (self.d as f64, self.m[k] as f64, self.gamma[k]);
        let base = d * g * g / m;
        base.min((d - 1.0) / (m - 1.0) * base)
    }

    pub fn cap(&self) -> f64 {
        (0..self.m.len()).map(|k| self.frame_cap(k)).fold(f64::INFINITY, f64::min)
    }

    /// `S = dγ²(db - 1)/(M(M - 1))` for frame `k`.
    pub fn s_from_b(&self, k: usize, b: f64) -> f64 {
        let (d, m, g) = (self.d as f64, self.m[k] as f64, self.gamma[k]);
        d * g * g * (d * b - 1.0) / (m * (m - 1.0))
    }

    /// `b = [1 + S·M(M-1)/(dγ²)]/d` for frame `k`.
    pub fn b_from_s(&self, k: usize, s: f64) -> f64 {
        let (d, m, g) = (self.d as f64, self.m[k] as f64, self.gamma[k]);
        (1.0 + s * m * (m - 1.0) / (d * g * g)) / d
    }
}

/// Parameters of a GEAM: `d`, frame sizes `M_k`, weights `γ_k` and
/// per-frame constants `S_k`. The spec is conical when all `S_k` agree.
///
/// `a_k`, `b_k`, `c_k` and `|τ_k|` are derived from these.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRecord", into = "SpecRecord")]
pub struct GeamSpec {
    shape: GeamShape,
    s: Vec<f64>,
    preset: Option<String>,
}

impl GeamSpec {
    /// Conical 2-design spec with uniform `S`.
    pub fn conical(d: usize, m: Vec<usize>, gamma: Vec<f64>, s: f64) -> Result<Self> {
        let n = m.len();
        Self::general(d, m, gamma, vec![s; n])
    }

    /// General GEAM with frame-dependent `S_k`.
    pub fn general(d: usize, m: Vec<usize>, gamma: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        let spec = Self {
            shape: GeamShape { d, m, gamma },
            s,
            preset: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_shape(shape: GeamShape, s: f64) -> Result<Self> {
        Self::conical(shape.d, shape.m, shape.gamma, s)
    }

    pub(crate) fn with_preset(mut self, name: String) -> Self {
        self.preset = Some(name);
        self
    }

    fn validate(&self) -> Result<()> {
        let GeamShape { d, m, gamma } = &self.shape;
        let (d, n) = (*d, m.len());
        if d < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
        }
        if n == 0 || gamma.len() != n || self.s.len() != n {
            return Err(Error::InvalidParameter(format!(
                "need equal, nonzero numbers of frame sizes, weights and S values (got {n}, {}, {})",
                gamma.len(),
                self.s.len()
            )));
        }
        if m.iter().any(|&mk| mk < 2) {
            return Err(Error::InvalidParameter("every frame needs M_k ≥ 2".into()));
        }
        let total: usize = m.iter().sum();
        if total != d * d + n - 1 {
            return Err(Error::InvalidParameter(format!(
                "Σ M_k = {total}, expected d² + N - 1 = {}",
                d * d + n - 1
            )));
        }
        if gamma.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::InvalidParameter("weights γ_k must be positive".into()));
        }
        let sum: f64 = gamma.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidParameter(format!("Σ γ_k = {sum}, expected 1")));
        }
        for (k, &s) in self.s.iter().enumerate() {
            let cap = self.shape.frame_cap(k);
            if !(s >= 0.0) || s > cap * (1.0 + SUM_TOL) {
                return Err(Error::InvalidParameter(format!(
                    "S_{} = {s} outside [0, {cap}] (b must lie in [1/d, min{{d, M}}/d])",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.shape.d
    }

    /// Number of frames `N`.
    pub fn n(&self) -> usize {
        self.shape.m.len()
    }

    pub fn m(&self) -> &[usize] {
        &self.shape.m
    }

    pub fn gamma(&self) -> &[f64] {
        &self.shape.gamma
    }

    pub fn shape(&self) -> &GeamShape {
        &self.shape
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s
    }

    pub fn preset(&self) -> Option<&str> {
        self.preset.as_deref()
    }

    /// `S` when every frame shares it.
    pub fn uniform_s(&self) -> Option<f64> {
        let s0 = self.s[0];
        self.s.iter().all(|&s| (s - s0).abs() <= SUM_TOL * s0.abs().max(1e-300)).then_some(s0)
    }

    pub fn is_conical(&self) -> bool {
        self.uniform_s().is_some()
    }

    /// `a_k = dγ_k/M_k`, the trace of every element of frame `k`.
    pub fn a(&self, k: usize) -> f64 {
        self.shape.d as f64 * self.shape.gamma[k] / self.shape.m[k] as f64
    }

    pub fn b(&self, k: usize) -> f64 {
        self.shape.b_from_s(k, self.s[k])
    }

    /// `c_k = (M_k - d·b_k)/(d(M_k - 1))`.
    pub fn c(&self, k: usize) -> f64 {
        let (d, m) = (self.shape.d as f64, self.shape.m[k] as f64);
        (m - d * self.b(k)) / (d * (m - 1.0))
    }

    /// `|τ_k| = √(S_k/(M_k(√M_k + 1)²))`.
    pub fn tau(&self, k: usize) -> f64 {
        let m = self.shape.m[k] as f64;
        let s1 = m.sqrt() + 1.0;
        (self.s[k] / (m * s1 * s1)).sqrt()
    }

    /// Number of measurement operators, `Σ M_k`.
    pub fn operator_count(&self) -> usize {
        self.shape.m.iter().sum()
    }

    pub fn cap(&self) -> f64 {
        self.shape.cap()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum SValue {
    Uniform(f64),
    PerFrame(Vec<f64>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpecRecord {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: Vec<usize>,
    gamma: Vec<f64>,
    #[serde(rename = "S")]
    s: SValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
}

impl TryFrom<SpecRecord> for GeamSpec {
    type Error = Error;
    fn try_from(r: SpecRecord) -> Result<Self> {
        if r.n != r.m.len() {
            return Err(Error::Parse(format!("N = {} but {} frame sizes given", r.n, r.m.len())));
        }
        let s = match r.s {
            SValue::Uniform(s) => vec![s; r.n],
            SValue::PerFrame(s) => s,
        };
        let spec = GeamSpec::general(r.d, r.m, r.gamma, s)?;
        Ok(match r.preset {
            Some(p) => spec.with_preset(p),
            None => spec,
        })
    }
}

impl From<GeamSpec> for SpecRecord {
    fn from(g: GeamSpec) -> Self {
        let s = match g.uniform_s() {
            Some(s) => SValue::Uniform(s),
            None => SValue::PerFrame(g.s.clone()),
        };
        SpecRecord {
            d: g.shape.d,
            n: g.shape.m.len(),
            m: g.shape.m,
            gamma: g.shape.gamma,
            s,
            preset: g.preset,
        }
    }
}

/// A spec together with the sign vector used to realize it; the JSON
/// form `{d, N, M, gamma, S, signs, preset?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeamRecord {
    #[serde(flatten)]
    pub spec: GeamSpec,
    pub signs: Vec<Sign>,
}

/// Named parameter families.
///
/// | syntax       | N     | M_k | γ_k     | S                          |
/// |--------------|-------|-----|---------|----------------------------|
/// | `mub`        | d + 1 | d   | 1/(d+1) | 1/(d+1)²                   |
/// | `mum:b`      | d + 1 | d   | 1/(d+1) | (db-1)/((d+1)(d²-1))       |
/// | `sic`        | 1     | d²  | 1       | 1/(d(d+1))                 |
/// | `gsic:b`     | 1     | d²  | 1       | (db-1)/(d(d²-1))           |
/// | `nm:N,M[,b]` | N     | M   | 1/N     | d(db-1)/(NM(d²-1))         |
///
/// `nm` requires `N(M-1) = d² - 1`. Without `b` it picks the midpoint
/// between `1/d` and the largest `b` whose operators are positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preset {
    Mub,
    Mum { b: f64 },
    Sic,
    Gsic { b: f64 },
    Nm { n: usize, m: usize, b: Option<f64> },
}

impl Preset {
    /// Frame structure of this preset in dimension `d`.
    pub fn shape(&self, d: usize) -> Result<GeamShape> {
        Ok(match *self {
            Preset::Mub | Preset::Mum { .. } => GeamShape::uniform(d, d + 1, d),
            Preset::Sic | Preset::Gsic { .. } => GeamShape::uniform(d, 1, d * d),
            Preset::Nm { n, m, .. } => {
                if n == 0 || m < 2 || n * (m - 1) != d * d - 1 {
                    return Err(Error::InvalidParameter(format!(
                        "nm:{n},{m} needs N(M - 1) = d² - 1 = {} (got {})",
                        d * d - 1,
                        n * m.saturating_sub(1)
                    )));
                }
                GeamShape::uniform(d, n, m)
            }
        })
    }

    /// `S` from the closed-form row for a given `b`.
    pub fn table_s(&self, d: usize, b: f64) -> f64 {
        let df = d as f64;
        match *self {
            Preset::Mub => 1.0 / ((df + 1.0) * (df + 1.0)),
            Preset::Mum { .. } => (df * b - 1.0) / ((df + 1.0) * (df * df - 1.0)),
            Preset::Sic => 1.0 / (df * (df + 1.0)),
            Preset::Gsic { .. } => (df * b - 1.0) / (df * (df * df - 1.0)),
            Preset::Nm { n, m, .. } => df * (df * b - 1.0) / ((n * m) as f64 * (df * df - 1.0)),
        }
    }

    /// Range `(1/d, hi]` of admissible `b`.
    pub fn b_upper(&self, d: usize) -> f64 {
        match *self {
            Preset::Nm { m, .. } => d.min(m) as f64 / d as f64,
            _ => 1.0,
        }
    }

    pub(crate) fn check_b(&self, d: usize, b: f64) -> Result<()> {
        let lo = 1.0 / d as f64;
        let hi = self.b_upper(d);
        if !(b > lo && b <= hi + SUM_TOL) {
            return Err(Error::InvalidParameter(format!("{self}: b = {b} outside (1/d, {hi}] = ({lo}, {hi}]")));
        }
        Ok(())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Mub => write!(f, "mub"),
            Preset::Mum { b } => write!(f, "mum:{b}"),
            Preset::Sic => write!(f, "sic"),
            Preset::Gsic { b } => write!(f, "gsic:{b}"),
            Preset::Nm { n, m, b: None } => write!(f, "nm:{n},{m}"),
            Preset::Nm { n, m, b: Some(b) } => write!(f, "nm:{n},{m},{b}"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Parses `mub`, `mum:b`, `sic`, `gsic:b` or `nm:N,M[,b]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let bad = || Error::Parse(format!("bad preset '{s}' (mub, mum:b, sic, gsic:b, nm:N,M[,b])"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = if args.is_empty() { Vec::new() } else { args.split(',').collect() };
        match (name.to_ascii_lowercase().as_str(), parts.as_slice()) {
            ("mub", []) => Ok(Preset::Mub),
            ("sic", []) => Ok(Preset::Sic),
            ("mum", [b]) => Ok(Preset::Mum { b: num(b)? }),
            ("gsic", [b]) => Ok(Preset::Gsic { b: num(b)? }),
            ("nm", [n, m]) => Ok(Preset::Nm { n: int(n)?, m: int(m)?, b: None }),
            ("nm", [n, m, b]) => Ok(Preset::Nm {
                n: int(n)?,
                m: int(m)?,
                b: Some(num(b)?),
            }),
            _ => Err(bad()),
        }
    }
}

/// Every `(N, M)` with `N(M - 1) = d² - 1`.
pub fn nm_factorizations(d: usize) -> Vec<(usize, usize)> {
    let t = d * d - 1;
    (1..=t).filter(|n| t.is_multiple_of(*n)).map(|n| (n, t / n + 1)).collect()
}
