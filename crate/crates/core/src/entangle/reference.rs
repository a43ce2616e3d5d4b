use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_entangled_vector, partial_trace, swap_operator, BipartiteDims, ComplexMatrix, DensityMatrix, Subsystem};

/// One-parameter bipartite families with maximally mixed marginals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `(1-q)/d² I + q |φ+⟩⟨φ+|`, `0 ≤ q ≤ 1`.
    Isotropic,
    /// `(d-x)/(d³-d) I + (dx-1)/(d³-d) F`, `-1 ≤ x ≤ 1`, with `F` the swap.
    Werner,
    /// `p |Ψ-⟩⟨Ψ-| + (1-p) I/4`, `-1/3 ≤ p ≤ 1`; the `d = 2` Werner
    /// state with `p = (1 - 2x)/3`.
    WernerQubit,
}

impl Family {
    /// Allowed parameter interval.
    pub fn range(self) -> (f64, f64) {
        match self {
            Family::Isotropic => (0.0, 1.0),
            Family::Werner => (-1.0, 1.0),
            Family::WernerQubit => (-1.0 / 3.0, 1.0),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Isotropic => "isotropic",
            Family::Werner => "werner",
            Family::WernerQubit => "werner-qubit",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isotropic" => Ok(Family::Isotropic),
            "werner" => Ok(Family::Werner),
            "werner-qubit" => Ok(Family::WernerQubit),
            _ => Err(Error::Parse(format!("unknown family '{s}' (isotropic, werner, werner-qubit)"))),
        }
    }
}

/// A realized member of a [`Family`] on `C^d ⊗ C^d`.
#[derive(Clone, Debug)]
pub struct ReferenceState {
    pub family: Family,
    pub d: usize,
    pub param: f64,
    pub state: DensityMatrix,
}

/// Werner parameter `x` for the two-qubit form `p`.
pub fn werner_x_from_p(p: f64) -> f64 {
    (1.0 - 3.0 * p) / 2.0
}

/// Two-qubit form `p = (1 - 2x)/3` of a `d = 2` Werner parameter.
pub fn werner_p_from_x(x: f64) -> f64 {
    (1.0 - 2.0 * x) / 3.0
}

pub fn build_reference(family: Family, d: usize, param: f64) -> Result<ReferenceState> {
    let (lo, hi) = family.range();
    if !(lo..=hi).contains(&param) {
        return Err(Error::InvalidParameter(format!("{family} parameter {param} outside [{lo}, {hi}]")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("local dimension must be at least 2, got {d}")));
    }
    let n = d * d;
    let id = ComplexMatrix::identity(n);
    let df = d as f64;
    let m = match family {
        Family::Isotropic => {
            let phi = max_entangled_vector(d);
            &id.scale_real((1.0 - param) / (n as f64)) + &ComplexMatrix::outer(&phi, &phi).scale_real(param)
        }
        Family::Werner => werner_matrix(d, param),
        Family::WernerQubit => {
            if d != 2 {
                return Err(Error::InvalidParameter(format!("werner-qubit requires d = 2, got {d}")));
            }
            werner_matrix(2, werner_x_from_p(param))
        }
    };
    let state = DensityMatrix::new(m)?;
    let dims = BipartiteDims::symmetric(d)?;
    let mixed = ComplexMatrix::identity(d).scale_real(1.0 / df);
    for keep in [Subsystem::A, Subsystem::B] {
        let r = partial_trace(&state, dims, keep)?;
        let dev = r.matrix().as_matrix().max_abs_diff(&mixed);
        if dev > 1e-12 {
            return Err(Error::InvalidState(format!("reduced state deviates from I/d by {dev:e}")));
        }
    }
    Ok(ReferenceState { family, d, param, state })
}

fn werner_matrix(d: usize, x: f64) -> ComplexMatrix {
    let df = d as f64;
    let norm = df * df * df - df;
    let id = ComplexMatrix::identity(d * d);
    &id.scale(C64::new((df - x) / norm, 0.0)) + &swap_operator(d).scale_real((df * x - 1.0) / norm)
}
