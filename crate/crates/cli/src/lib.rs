//! Command-line front end for `carnap-core`.
//!
//! JSON in, JSON/CSV/SVG out. Every artifact records the resolved
//! configuration, and identical inputs with the same `--seed` give
//! byte-identical files.

pub mod cli;
pub mod commands;
pub mod error;
pub mod schema;
pub mod svg;

pub use cli::{run, Cli};
pub use error::CliError;
