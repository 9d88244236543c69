//! Batch front-end: reads a JSON experiment spec, runs one pipeline command
//! and renders deterministic JSON and CSV reports.

pub mod commands;
pub mod spec;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub use commands::{run, Command};
pub use spec::{load, read_spec, ExperimentSpec, LoadOptions, Loaded};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] kazlab_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "malformed-input",
            _ => "computational-failure",
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() })
    }
}

/// One command's output: the JSON document, a CSV table and a short
/// human-readable summary for the terminal.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub json: Value,
    pub csv: String,
    pub summary: String,
}

impl Report {
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        let stem = self.command.name();
        let mut json = serde_json::to_string_pretty(&self.json).expect("report serializes");
        json.push('\n');
        std::fs::write(dir.join(format!("{stem}.json")), json)?;
        std::fs::write(dir.join(format!("{stem}.csv")), &self.csv)?;
        Ok(())
    }
}

pub(crate) fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

/// CSV with a fixed header; fields never contain commas.
pub(crate) struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { out: header.join(",") + "\n", width: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.width);
        let _ = writeln!(self.out, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Plain decimal for moderate magnitudes, scientific otherwise.
pub(crate) fn real(x: f64) -> String {
    if x == 0.0 || (1e-3..1e12).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub(crate) fn opt_f64(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}
