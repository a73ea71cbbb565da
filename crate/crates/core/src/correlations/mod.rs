//! Correlation matrices, their simulation by box protocols, and the
//! three-box simulation of projective measurements.

mod matrix;
mod rt;
mod simulate;

pub use matrix::{layercake_decompose, BooleanMixture, CorrelationMatrix, CorrelationParseError};
pub use rt::{
    random_projector, random_unit, rt_comm, rt_nlb, rt_trial, rt_trials, sgn, RtContext, RtError,
    RtNlbOutcome, RtOutcome, RtSummary, Transform, RT_BOXES, UNIT_TOLERANCE,
};
pub use simulate::simulate_distribution;
