//! Error type shared by every module.

use alloc::string::String;
use alloc::vec::Vec;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    Schema,
    /// Well-formed input that violates a modeling precondition.
    Domain,
    /// A numerical routine could not produce an answer.
    Numerical,
}

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An observation or event names a disease outside the space.
    #[error("unknown disease label `{0}`")]
    UnknownDisease(String),
    /// A disease index is outside the space.
    #[error("disease index {index} out of range for a space of {size}")]
    UnknownIndex {
        /// Offending index.
        index: usize,
        /// Number of diseases.
        size: usize,
    },
    /// Structural mismatch between inputs (lengths, duplicated labels, ...).
    #[error("schema error: {0}")]
    Schema(String),
    /// A scalar lies outside its admissible range.
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        /// What was being checked.
        what: &'static str,
        /// Offending value.
        value: f64,
        /// Lower bound.
        lo: f64,
        /// Upper bound.
        hi: f64,
    },
    /// A model or agent parameter violates its invariants.
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    /// The requested evidence would run past the model horizon.
    #[error("horizon exceeded: {needed} observations needed, horizon is {horizon}")]
    HorizonExceeded {
        /// Observations the query needs.
        needed: usize,
        /// Configured horizon.
        horizon: usize,
    },
    /// The value gap has the same sign at both ends of the search interval.
    #[error("no indifference point in the interval (gap {gap_lo} at lo, {gap_hi} at hi)")]
    NoSolution {
        /// Value gap at the lower end.
        gap_lo: f64,
        /// Value gap at the upper end.
        gap_hi: f64,
    },
    /// The free outcome does not move the value: it sits on a null event.
    #[error("free outcome covers only null events")]
    Degenerate,
    /// Iteration cap reached before the tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NoConvergence {
        /// Iterations performed.
        iterations: usize,
        /// Final residual.
        residual: f64,
    },
    /// A standard sequence left the interval before reaching its length.
    #[error("standard sequence truncated after {} points", .achieved.len())]
    Truncated {
        /// Points elicited before the escape.
        achieved: Vec<f64>,
    },
    /// Elicited data contradict a structural requirement.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    /// The event is null for the data or agent at hand.
    #[error("event is null")]
    NullEvent,
    /// Gauge outcome has the same utility as zero.
    #[error("degenerate gauge: U(x) equals U(0)")]
    DegenerateGauge,
    /// The agent is not strictly positively related on some disease.
    #[error("non-identifiable: disease {disease} moves by {shift} after its own observation")]
    NonIdentifiable {
        /// Disease index.
        disease: usize,
        /// Probability shift p' - p.
        shift: f64,
    },
    /// A check that needs at least three diseases.
    #[error("inapplicable: {0}")]
    Inapplicable(&'static str),
    /// The agent only answers evidence-free queries.
    #[error("agent does not condition on evidence")]
    EvidenceUnsupported,
    /// A capacity lookup for an unlisted event.
    #[error("missing capacity entry for event {0}")]
    MissingEntry(String),
    /// Two records for one event disagree.
    #[error("conflicting records for event {event}: {first} vs {second}")]
    Conflict {
        /// Event rendered as member indices.
        event: String,
        /// Value from the first record.
        first: f64,
        /// Value from the second record.
        second: f64,
    },
    /// Two pieces of evidence that Dempster's rule cannot combine.
    #[error("total conflict between mass functions")]
    TotalConflict,
    /// A weighted evidence body with no observations.
    #[error("evidence body {0} is empty but carries positive weight")]
    EmptyBody(usize),
    /// Invariant broken inside the library.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Classification used for exit codes.
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            UnknownDisease(_) | UnknownIndex { .. } | Schema(_) | MissingEntry(_) | Conflict { .. } => {
                ErrorKind::Schema
            }
            NoSolution { .. } | Degenerate | NoConvergence { .. } | Truncated { .. } | Internal(_) => {
                ErrorKind::Numerical
            }
            _ => ErrorKind::Domain,
        }
    }
}
