use crate::error::{Error, Result};
use crate::geam::GeamSpec;

use super::reference::werner_p_from_x;

/// Closed forms for isotropic states under criterion F with `f = sld` and
/// `P^B` the conjugate of `P^A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example1 {
    /// `4q²S(d²-1)d / (N[2(1-q) + qd²])`.
    pub f_closed: f64,
    /// `2S(d-1)/N`.
    pub f_threshold: f64,
    /// Positive root of `2d(d+1)q² - (d²-2)q - 2 = 0`.
    pub q_star: f64,
}

/// Closed forms for Werner states under criterion G with the same GEAM on
/// both sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example2 {
    /// `S|1 - dx|/d`.
    pub g_closed: f64,
    /// `S(d-1)/d`.
    pub g_threshold: f64,
    /// `2/d - 1`; entangled for `x < x_star`.
    pub x_star: f64,
    /// For `d = 2`: `(p, p*)` with `p = (1-2x)/3` and `p* = 1/3`.
    pub qubit_form: Option<(f64, f64)>,
}

fn conical(spec: &GeamSpec, d: usize) -> Result<f64> {
    if spec.dim() != d {
        return Err(Error::DimensionMismatch(format!("spec has d = {}, expected {d}", spec.dim())));
    }
    spec.uniform_s()
        .ok_or_else(|| Error::InvalidParameter("closed forms need a conical GEAM".into()))
}

/// Critical isotropic parameter `(d²-2 + √((d²-2)² + 16d(d+1))) / (4d(d+1))`.
pub fn isotropic_q_star(d: usize) -> f64 {
    let df = d as f64;
    let a = df * df - 2.0;
    (a + (a * a + 16.0 * df * (df + 1.0)).sqrt()) / (4.0 * df * (df + 1.0))
}

pub fn example1_reference(d: usize, q: f64, spec: &GeamSpec) -> Result<Example1> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("q = {q} outside [0, 1]")));
    }
    let s = conical(spec, d)?;
    let (df, n) = (d as f64, spec.n() as f64);
    Ok(Example1 {
        f_closed: 4.0 * q * q * s * (df * df - 1.0) * df / (n * (2.0 * (1.0 - q) + q * df * df)),
        f_threshold: 2.0 * s * (df - 1.0) / n,
        q_star: isotropic_q_star(d),
    })
}

pub fn example2_reference(d: usize, x: f64, spec: &GeamSpec) -> Result<Example2> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} outside [-1, 1]")));
    }
    let s = conical(spec, d)?;
    let df = d as f64;
    Ok(Example2 {
        g_closed: s * (1.0 - df * x).abs() / df,
        g_threshold: s * (df - 1.0) / df,
        x_star: 2.0 / df - 1.0,
        qubit_form: (d == 2).then(|| (werner_p_from_x(x), 1.0 / 3.0)),
    })
}
