//! Operator-monotone functions and Morozova–Chentsov kernels.
//!
//! A [`MonotoneFunction`] is one of four standard families:
//!
//! | syntax          | f(x)                                   | f(0)   |
//! |-----------------|----------------------------------------|--------|
//! | `sld`           | (1 + x) / 2                            | 1/2    |
//! | `wy`            | ((1 + √x) / 2)²                        | 1/4    |
//! | `wyd:α`         | `gwyd:α,1-α`                           | α(1-α) |
//! | `gwyd:α,β`      | 2αβ(x-1)² / ((x^α-1)(x^β-1)(x^γ+1))    | 2αβ    |
//!
//! with `γ = 1 - α - β`. When `α + β = 1` the factor `x^γ + 1` is the
//! constant 2 and `f(0) = αβ`. For `0 < γ < min(α, β)` the function dips
//! below `f(0)` near the origin, so those parameters are rejected.
//!
//! The kernel is `c_f(x, y) = 1 / (y f(x/y))` and the inverse mean is
//! `m_f(x, y) = y f(x/y) = 1 / c_f(x, y)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `|x - y| ≤ NEAR_DEGENERATE · max(x, y, 1)` switches to the diagonal
/// branch of the kernel.
const NEAR_DEGENERATE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Sld,
    Wy,
    Wyd { alpha: f64 },
    Gwyd { alpha: f64, beta: f64 },
    /// `f̃(x) = [(x + 1) - (x - 1)² f(0) / f(x)] / 2` for a base family.
    /// Has `f̃(0) = 0`, so it is not itself a regular function.
    Tilde(Box<MonotoneFunction>),
}

/// Selector for [`construct_mcf`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    Sld,
    Wy,
    Wyd,
    Gwyd,
}

/// Value of `c_f(x, y)`. The pair `(0, 0)` has no finite kernel, but its
/// contribution is always weighted by `(x - y)² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    Value(f64),
    ZeroWeight,
}

impl Kernel {
    /// `gap_sq · c`, with the zero-weight pair contributing 0.
    pub fn weighted(self, gap_sq: f64) -> f64 {
        match self {
            Kernel::Value(c) => gap_sq * c,
            Kernel::ZeroWeight => 0.0,
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Kernel::Value(c) => Some(c),
            Kernel::ZeroWeight => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneFunction {
    family: Family,
    f0: f64,
}

pub fn construct_mcf(tag: FamilyTag, alpha: f64, beta: f64) -> Result<MonotoneFunction> {
    match tag {
        FamilyTag::Sld => Ok(MonotoneFunction::sld()),
        FamilyTag::Wy => Ok(MonotoneFunction::wy()),
        FamilyTag::Wyd => MonotoneFunction::wyd(alpha),
        FamilyTag::Gwyd => MonotoneFunction::gwyd(alpha, beta),
    }
}

impl MonotoneFunction {
    pub fn sld() -> Self {
        Self { family: Family::Sld, f0: 0.5 }
    }

    pub fn wy() -> Self {
        Self { family: Family::Wy, f0: 0.25 }
    }

    pub fn wyd(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("wyd needs 0 < α < 1, got {alpha}")));
        }
        Self::checked(Family::Wyd { alpha }, alpha * (1.0 - alpha))
    }

    pub fn gwyd(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha < 0.0 || beta < 0.0 {
            return Err(Error::InvalidParameter(format!("gwyd needs α, β ≥ 0, got ({alpha}, {beta})")));
        }
        if alpha * beta == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gwyd needs α·β > 0 (kernel denominator 2αβ vanishes), got ({alpha}, {beta})"
            )));
        }
        if alpha + beta > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!("gwyd needs α + β ≤ 1, got {}", alpha + beta)));
        }
        let gamma = gamma_of(alpha, beta);
        if gamma > 0.0 && gamma < alpha.min(beta) - 1e-12 {
            // f ≈ 2αβ(1 + x^α + x^β - x^γ) near 0, which decreases when γ is smallest.
            return Err(Error::InvalidParameter(format!(
                "gwyd:{alpha},{beta} is not monotone near 0 (needs 1-α-β = 0 or 1-α-β ≥ min(α, β))"
            )));
        }
        let f0 = if gamma > 0.0 { 2.0 * alpha * beta } else { alpha * beta };
        Self::checked(Family::Gwyd { alpha, beta }, f0)
    }

    /// Cross-checks the analytic `f(0)` against `f` near 0. Power families
    /// converge like `x^r`, so the probe sits where `x^r ≤ 1e-6`.
    fn checked(family: Family, f0: f64) -> Result<Self> {
        let f = Self { family, f0 };
        let r = f.slowest_exponent();
        let probe = 10f64.powf(-6.0 / r).min(1e-8).max(1e-300);
        let tol = 1e-4 + 4.0 * probe.powf(r);
        let near = f.eval_positive(probe);
        if !((near - f0).abs() <= tol * f0) {
            return Err(Error::InvalidParameter(format!(
                "f(0) = {f0} disagrees with f({probe:e}) = {near} for {f}"
            )));
        }
        Ok(f)
    }

    /// Smallest positive power of x appearing in f near 0.
    fn slowest_exponent(&self) -> f64 {
        match &self.family {
            Family::Sld | Family::Tilde(_) => 1.0,
            Family::Wy => 0.5,
            Family::Wyd { alpha } => alpha.min(1.0 - alpha),
            Family::Gwyd { alpha, beta } => {
                let g = gamma_of(*alpha, *beta);
                let r = alpha.min(*beta);
                if g > 0.0 {
                    r.min(g)
                } else {
                    r
                }
            }
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `f(0)`.
    pub fn f0(&self) -> f64 {
        self.f0
    }

    /// `f(x)` for `x ≥ 0`.
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.f0
        } else {
            self.eval_positive(x)
        }
    }

    fn eval_positive(&self, x: f64) -> f64 {
        if x == 1.0 {
            return 1.0;
        }
        match &self.family {
            Family::Sld => 0.5 * (1.0 + x),
            Family::Wy => {
                let h = 0.5 * (1.0 + x.sqrt());
                h * h
            }
            Family::Wyd { alpha } => gwyd_f(*alpha, 1.0 - *alpha, x),
            Family::Gwyd { alpha, beta } => gwyd_f(*alpha, *beta, x),
            Family::Tilde(base) => {
                let dx = x - 1.0;
                0.5 * ((x + 1.0) - dx * dx * base.f0 / base.eval_positive(x))
            }
        }
    }

    /// Morozova–Chentsov kernel `c_f(x, y)`.
    pub fn c_value(&self, x: f64, y: f64) -> Result<Kernel> {
        check_args(x, y)?;
        Ok(self.kernel(x, y))
    }

    /// Kernel for arguments already known to be nonnegative.
    pub(crate) fn kernel(&self, x: f64, y: f64) -> Kernel {
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        if hi == 0.0 {
            return Kernel::ZeroWeight;
        }
        if lo == 0.0 {
            return Kernel::Value(1.0 / (hi * self.f0));
        }
        if hi - lo <= NEAR_DEGENERATE * hi.max(1.0) {
            return Kernel::Value(2.0 / (hi + lo));
        }
        Kernel::Value(match &self.family {
            Family::Sld => 2.0 / (x + y),
            Family::Wy => {
                let s = x.sqrt() + y.sqrt();
                4.0 / (s * s)
            }
            Family::Wyd { alpha } => gwyd_c(*alpha, 1.0 - *alpha, x, y),
            Family::Gwyd { alpha, beta } => gwyd_c(*alpha, *beta, x, y),
            Family::Tilde(_) => 1.0 / (lo * self.eval_positive(hi / lo)),
        })
    }

    /// `m_f(x, y) = y f(x/y)`, the eigenvalue action of `c_f(L, R)^{-1}`.
    pub fn inverse_mean(&self, x: f64, y: f64) -> Result<f64> {
        check_args(x, y)?;
        Ok(self.mean(x, y))
    }

    pub(crate) fn mean(&self, x: f64, y: f64) -> f64 {
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        if hi == 0.0 {
            0.0
        } else if lo == 0.0 {
            hi * self.f0
        } else {
            lo * self.eval_positive(hi / lo)
        }
    }

    /// The transform `f̃` used by the quasientropy identity.
    pub fn tilde(&self) -> MonotoneFunction {
        MonotoneFunction {
            family: Family::Tilde(Box::new(self.clone())),
            // (0 - 1)² f(0) / f(0) = 1, so f̃(0) = (1 - 1) / 2.
            f0: 0.0,
        }
    }
}

/// Free-function form of [`MonotoneFunction::tilde`].
pub fn f_tilde_transform(f: &MonotoneFunction) -> MonotoneFunction {
    f.tilde()
}

fn gamma_of(alpha: f64, beta: f64) -> f64 {
    let g = 1.0 - alpha - beta;
    if g.abs() <= 1e-12 {
        0.0
    } else {
        g
    }
}

fn check_args(x: f64, y: f64) -> Result<()> {
    if !(x >= 0.0 && y >= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kernel arguments must be finite and nonnegative, got ({x}, {y})"
        )));
    }
    Ok(())
}

/// `f_{α,β}(x)` via `expm1`, accurate near `x = 1`.
fn gwyd_f(alpha: f64, beta: f64, x: f64) -> f64 {
    let g = gamma_of(alpha, beta);
    let ln = if (x - 1.0).abs() < 0.5 { (x - 1.0).ln_1p() } else { x.ln() };
    let dx = x - 1.0;
    let tail = if g == 0.0 { 2.0 } else { x.powf(g) + 1.0 };
    2.0 * alpha * beta * dx * dx / ((alpha * ln).exp_m1() * (beta * ln).exp_m1() * tail)
}

/// Closed-form GWYD kernel
/// `(x^α - y^α)(x^β - y^β)(x^γ + y^γ) / (2αβ (x - y)²)`.
fn gwyd_c(alpha: f64, beta: f64, x: f64, y: f64) -> f64 {
    let g = gamma_of(alpha, beta);
    let tail = if g == 0.0 { 2.0 } else { x.powf(g) + y.powf(g) };
    let dxy = x - y;
    (x.powf(alpha) - y.powf(alpha)) * (x.powf(beta) - y.powf(beta)) * tail / (2.0 * alpha * beta * dxy * dxy)
}

impl fmt::Display for MonotoneFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Sld => write!(f, "sld"),
            Family::Wy => write!(f, "wy"),
            Family::Wyd { alpha } => write!(f, "wyd:{alpha}"),
            Family::Gwyd { alpha, beta } => write!(f, "gwyd:{alpha},{beta}"),
            Family::Tilde(base) => write!(f, "tilde({base})"),
        }
    }
}

impl FromStr for MonotoneFunction {
    type Err = Error;

    /// Parses `sld`, `wy`, `wyd:α` or `gwyd:α,β`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
                .collect()
        };
        match (name.to_ascii_lowercase().as_str(), args.is_empty()) {
            ("sld", true) => Ok(Self::sld()),
            ("wy", true) => Ok(Self::wy()),
            ("wyd", false) => match nums()?.as_slice() {
                [a] => Self::wyd(*a),
                _ => Err(Error::Parse(format!("{s}: expected wyd:α"))),
            },
            ("gwyd", false) => match nums()?.as_slice() {
                [a, b] => Self::gwyd(*a, *b),
                _ => Err(Error::Parse(format!("{s}: expected gwyd:α,β"))),
            },
            _ => Err(Error::Parse(format!("unknown function '{s}' (sld, wy, wyd:α, gwyd:α,β)"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn families() -> Vec<MonotoneFunction> {
        vec![
            MonotoneFunction::sld(),
            MonotoneFunction::wy(),
            MonotoneFunction::wyd(0.3).unwrap(),
            MonotoneFunction::gwyd(0.2, 0.5).unwrap(),
            MonotoneFunction::gwyd(0.05, 0.1).unwrap(),
            MonotoneFunction::gwyd(0.5, 0.5).unwrap(),
        ]
    }

    fn grid() -> impl Iterator<Item = f64> {
        (1..=100).map(|k| 0.1 * k as f64)
    }

    #[test]
    fn invariants_on_grid() {
        for f in families() {
            assert!((f.eval(1.0) - 1.0).abs() <= 1e-12, "{f}");
            assert!(f.f0() > 0.0);
            let mut prev = f.eval(0.0);
            for x in grid() {
                let fx = f.eval(x);
                assert!((fx - x * f.eval(1.0 / x)).abs() <= 1e-10, "{f} symmetry at {x}");
                assert!(fx >= prev, "{f} monotone at {x}");
                prev = fx;
            }
        }
    }

    #[test]
    fn family_values() {
        let sld = MonotoneFunction::sld();
        assert_eq!((sld.eval(1.0), sld.f0()), (1.0, 0.5));
        let wy = MonotoneFunction::wy();
        assert!((wy.eval(4.0) - 2.25).abs() < 1e-15);
        assert_eq!(wy.f0(), 0.25);
        assert_eq!(MonotoneFunction::gwyd(0.5, 0.5).unwrap().f0(), 0.25);
        assert!((MonotoneFunction::gwyd(0.2, 0.5).unwrap().f0() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn wy_equals_gwyd_half_half() {
        let a = MonotoneFunction::wy();
        let b = MonotoneFunction::gwyd(0.5, 0.5).unwrap();
        for x in grid() {
            assert!((a.eval(x) - b.eval(x)).abs() <= 1e-12);
        }
    }

    #[test]
    fn gwyd_with_unit_sum_is_wyd() {
        let a = MonotoneFunction::gwyd(0.3, 0.7).unwrap();
        let b = MonotoneFunction::wyd(0.3).unwrap();
        assert_eq!(a.f0(), b.f0());
        for x in grid() {
            assert!((a.eval(x) - b.eval(x)).abs() <= 1e-10);
            let y = 1.0 / (1.0 + x);
            assert!((a.c_value(x, y).unwrap().value().unwrap() - b.c_value(x, y).unwrap().value().unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn parameter_domain_errors() {
        assert!(MonotoneFunction::gwyd(0.0, 0.5).is_err());
        assert!(MonotoneFunction::gwyd(0.6, 0.6).is_err());
        assert!(MonotoneFunction::gwyd(-0.1, 0.5).is_err());
        assert!(MonotoneFunction::gwyd(0.24, 0.73).is_err());
        assert!(MonotoneFunction::gwyd(0.3, 0.4).is_ok());
        assert!(MonotoneFunction::gwyd(0.5, 0.25).is_ok());
        assert!(MonotoneFunction::wyd(1.0).is_err());
        assert!(MonotoneFunction::wyd(0.0).is_err());
        assert!(construct_mcf(FamilyTag::Gwyd, 0.2, 0.5).is_ok());
        assert!(construct_mcf(FamilyTag::Sld, f64::NAN, f64::NAN).is_ok());
    }

    #[test]
    fn kernel_examples() {
        let sld = MonotoneFunction::sld();
        assert_eq!(sld.c_value(0.75, 0.25).unwrap(), Kernel::Value(2.0));
        assert_eq!(MonotoneFunction::wy().c_value(1.0, 0.0).unwrap(), Kernel::Value(4.0));
        for f in families() {
            assert_eq!(f.c_value(0.5, 0.5).unwrap(), Kernel::Value(2.0));
            assert_eq!(f.c_value(0.0, 0.0).unwrap(), Kernel::ZeroWeight);
            assert!(f.c_value(-1e-3, 0.5).is_err());
            assert!(f.inverse_mean(0.5, -1.0).is_err());
        }
        assert_eq!(Kernel::ZeroWeight.weighted(0.0), 0.0);
    }

    #[test]
    fn inverse_mean_examples() {
        let sld = MonotoneFunction::sld();
        assert_eq!(sld.inverse_mean(0.75, 0.25).unwrap(), 0.5);
        assert_eq!(sld.inverse_mean(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(MonotoneFunction::wy().inverse_mean(1.0, 1.0).unwrap(), 1.0);
        for f in families() {
            assert!((f.inverse_mean(0.3, 0.0).unwrap() - 0.3 * f.f0()).abs() < 1e-15);
            assert!((f.inverse_mean(0.7, 0.7).unwrap() - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn tilde_transform() {
        for f in families() {
            let t = f.tilde();
            assert_eq!(t.eval(1.0), 1.0);
            assert_eq!(t.eval(0.0), 0.0);
            assert_eq!(t.inverse_mean(0.4, 0.0).unwrap(), 0.0);
        }
        let t = MonotoneFunction::sld().tilde();
        for x in grid() {
            assert!((t.eval(x) - 2.0 * x / (x + 1.0)).abs() <= 1e-12);
        }
        assert!((t.eval(3.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn boundary_limit_rate() {
        // c(x, ε) x f(0) → 1 like (ε/x)^r with r the slowest exponent.
        for f in families() {
            let r = f.slowest_exponent();
            for x in [0.2, 0.5, 1.0] {
                for eps in [1e-6, 1e-9] {
                    let c = f.c_value(x, eps).unwrap().value().unwrap();
                    let rel = (c * x * f.f0() - 1.0).abs();
                    assert!(rel <= 4.0 * (eps / x).powf(r) + 1e-9, "{f} x={x} eps={eps} rel={rel}");
                }
            }
        }
        for f in [MonotoneFunction::sld(), MonotoneFunction::wy()] {
            let c = f.c_value(1.0, 1e-9).unwrap().value().unwrap();
            assert!((c * f.f0() - 1.0).abs() <= 1e-3);
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["sld", "wy", "wyd:0.3", "gwyd:0.2,0.5"] {
            let f: MonotoneFunction = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        for bad in ["", "wyd", "gwyd:0.2", "gwyd:0.7,0.7", "xyz", "wy:1"] {
            assert!(bad.parse::<MonotoneFunction>().is_err(), "{bad}");
        }
    }

    fn any_family() -> impl Strategy<Value = MonotoneFunction> {
        any::<u64>().prop_map(|seed| crate::testutil::random_function(&mut crate::rng::stream_rng(seed, 0)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn kernel_symmetry_and_reciprocity(f in any_family(), x in 1e-6f64..=1.0, y in 1e-6f64..=1.0) {
            let cxy = f.c_value(x, y).unwrap().value().unwrap();
            let cyx = f.c_value(y, x).unwrap().value().unwrap();
            prop_assert!((cxy - cyx).abs() <= 1e-12 * cxy.max(1.0));
            prop_assert!((f.inverse_mean(x, y).unwrap() * cxy - 1.0).abs() <= 1e-10);
        }
    }

    proptest! {
        #[test]
        fn gwyd_closed_form_matches_definition(seed in any::<u64>(), x in 0.01f64..=1.0, y in 0.01f64..=1.0) {
            let (a, b) = crate::testutil::random_gwyd_params(&mut crate::rng::stream_rng(seed, 0));
            let f = MonotoneFunction::gwyd(a, b).unwrap();
            let closed = f.c_value(x, y).unwrap().value().unwrap();
            let direct = 1.0 / (y * f.eval(x / y));
            prop_assert!((closed - direct).abs() <= 1e-9 * closed.max(1.0), "{closed} vs {direct}");
        }
    }
}
