//! Scenario ingestion and command dispatch for the `cover` binary.
//!
//! Every command produces a [`Report`]: a short human-readable text and a
//! JSON payload with `"format_version": 1`. Groups in the payload are
//! written as `{"invariants": [...], "free_rank": r}` (the latter only when
//! nonzero) and elements in canonical coordinates, so any group in a report
//! can be fed back as a group specification.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod selftest;

use std::fmt;

pub use commands::{run_command, Command};
pub use scenario::{parse_input, Scenario};

/// The JSON schema version written into every report.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed document: missing or mistyped fields, wrong lengths.
    Schema(String),
    /// Well-formed but mathematically inconsistent input.
    Semantic(String),
    /// Valid input on which a computation refuses to proceed.
    Rejected(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Rejected(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Schema(_) => "schema",
            CliError::Semantic(_) => "semantic",
            CliError::Rejected(_) => "rejected",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Semantic(m) => write!(f, "semantic error: {m}"),
            CliError::Rejected(m) => write!(f, "computation rejected: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
}

impl Report {
    /// Pretty-printed JSON followed by a newline.
    pub fn json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
        s.push('\n');
        s
    }
}
