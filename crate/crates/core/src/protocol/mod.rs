//! Protocol representations, the exact and sampling engines, validation,
//! audits and the text format.

mod audit;
mod engine;
mod format;
mod types;
mod validate;

pub use audit::*;
pub use engine::{
    exec_exact, exec_exact_with, exec_sample, limit_t, nlb_leaves, sample_with, Event, Exec,
    ExecError, Leaf, OutcomeDistribution, Policy, Sample, DEFAULT_LIMIT_T,
};
pub use format::{write_any, write_protocol, FormatError, ProtocolFile};
pub use types::*;
pub use validate::{validate, validate_any, Violation, ViolationKind};
