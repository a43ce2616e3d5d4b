use serde::{Deserialize, Serialize};

use super::criteria::{detect, Criterion, Verdict};
use super::reference::{build_reference, Family};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geam::Geam;
use crate::mcf::MonotoneFunction;

/// Inclusive grid `start, start + step, …` up to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(end > start) || !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "empty sweep range [{start}, {end}] with step {step}"
            )));
        }
        Ok(Self { start, end, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| (self.start + i as f64 * self.step).min(self.end)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Midpoint of the first pair of neighbouring points whose verdicts
    /// differ.
    pub critical: Option<f64>,
}

/// What a sweep evaluates at each parameter.
#[derive(Clone, Copy, Debug)]
pub struct SweepSetup<'a> {
    pub family: Family,
    pub d: usize,
    pub criterion: Criterion,
    pub ga: &'a Geam,
    pub gb: &'a Geam,
    pub f: Option<&'a MonotoneFunction>,
}

pub fn sweep(setup: &SweepSetup<'_>, range: &SweepRange, exec: Exec) -> Result<SweepResult> {
    let points = range.points();
    let rows = exec
        .map(&points, |&param| {
            let state = build_reference(setup.family, setup.d, param)?.state;
            let det = detect(setup.criterion, &state, setup.ga, setup.gb, setup.f)?;
            Ok(SweepRow {
                param,
                value: det.value,
                threshold: det.threshold,
                verdict: det.verdict,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let critical = rows
        .windows(2)
        .find(|w| w[0].verdict != w[1].verdict)
        .map(|w| 0.5 * (w[0].param + w[1].param));
    Ok(SweepResult { rows, critical })
}
