//! Carnap's inductive updating rule and the decision-theoretic machinery
//! around it.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation: preference oracles, tradeoff-based utility and probability
//! elicitation, the updating engine with its axiom checks and parameter
//! identification, and nonadditive decision-weight tooling. File formats and
//! the command-line front end live in the companion `carnap` crate.
//!
//! Module map:
//!
//! - [`domain`]: disease spaces, outcome intervals, acts, events, evidence.
//! - [`utility`]: strictly increasing utility curves.
//! - [`root`]: monotone bisection used by every indifference query.
//! - [`agents`]: simulated decision makers answering certainty-equivalent
//!   queries.
//! - [`tradeoff`]: standard sequences, the tradeoff relation, consistency
//!   and order-axiom audits, probabilities from utility exchange rates.
//! - [`carnap`]: the updating rule, sequence probabilities, the decision
//!   conditions as executable checks, identification, evidence combination.
//! - [`nonadditive`]: capacities, probability weighting, debiasing,
//!   belief functions and the degeneracy experiment.
#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod agents;
pub mod carnap;
pub mod domain;
pub mod error;
pub mod nonadditive;
pub mod root;
pub mod tradeoff;
pub mod utility;

pub use agents::{
    certainty_equivalent, indifference_point, seu_value, Agent, CarnapAgent, ChoquetAgent,
    FreeSlot, MixtureAgent, SeuAgent, UrnAgent,
};
pub use carnap::{CarnapModel, PosteriorReport};
pub use domain::{binary_act, splice, Act, DiseaseSpace, Event, Evidence, OutcomeInterval};
pub use error::{Error, ErrorKind, Result};
pub use utility::UtilityCurve;
