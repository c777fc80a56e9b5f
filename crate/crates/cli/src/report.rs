//! Report envelope, error classes and exit codes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "crystal-forge/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub input: Value,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: Value, result: Value) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            input,
            result,
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// A report together with its plain-text rendering.
pub struct Output {
    pub report: Report,
    pub text: String,
    /// Set when the computation ran but a recorded value disagreed.
    pub failed: bool,
}

impl Output {
    pub fn new(report: Report, text: String) -> Self {
        Output {
            report,
            text,
            failed: false,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
    Core(crystal_forge::Error),
}

impl From<crystal_forge::Error> for CliError {
    fn from(e: crystal_forge::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use crystal_forge::Error::*;
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 4,
            CliError::Core(UnknownId(_)) => 2,
            CliError::Core(NewtonPrecisionExceeded { .. } | PrecisionExhausted { .. }) => 3,
            CliError::Core(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Domain(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}
