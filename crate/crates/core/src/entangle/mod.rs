//! Entanglement criteria built from GEAMs on both parties.
//!
//! Both criteria are sufficient: a value above the threshold proves the
//! state entangled, anything else is inconclusive.

mod criteria;
mod examples;
mod reference;
mod sweep;

pub use criteria::{conjugate_geam, criterion_f, criterion_g, detect, Criterion, Detection, DetectionReport, Verdict};
pub use examples::{example1_reference, example2_reference, isotropic_q_star, Example1, Example2};
pub use reference::{build_reference, werner_p_from_x, werner_x_from_p, Family, ReferenceState};
pub use sweep::{sweep, SweepRange, SweepResult, SweepRow, SweepSetup};
