//! Fixture-driven checking of the `twogroup` laws: load a fixture, run a
//! suite of laws on it, write a report, or export the structure constants
//! of its Lie 2-algebra.

pub mod fixture;
pub mod report;
pub mod suite;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use twogroup::lie2::{DocumentTolerances, StructureDocument};
use twogroup::matrix_lie::{CLOSURE_TOL, FD_STEP, RICHARDSON_TOL};

pub use fixture::{load_fixture, Fixture, FixtureKind, Tolerances};
pub use report::{LawResult, Outcome, RunOutput, SuiteReport};
pub use suite::run_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Finite,
    Lie,
    Invariance,
    Limit,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Finite => "finite",
            Suite::Lie => "lie",
            Suite::Invariance => "invariance",
            Suite::Limit => "limit",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: parse error: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: invalid value at `{field}`: {message}", path.display())]
    Validation {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("{operation} does not apply to the {kind} fixture `{fixture}`")]
    IncompatibleSuite {
        /// `suite <name>` or `export`.
        operation: String,
        kind: FixtureKind,
        fixture: String,
    },
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: io::Error },
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports and documents serialize");
    text.push('\n');
    fs::write(path, text).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        error,
    })
}

pub fn write_report(path: &Path, output: &RunOutput) -> Result<(), CliError> {
    write_json(path, output)
}

/// Writes the structure constants and structure maps of a matrix fixture's
/// Lie 2-algebra as JSON and returns the document written.
pub fn export_structure(fixture: &Fixture, out: &Path) -> Result<StructureDocument, CliError> {
    let x = fixture.field_category().ok_or_else(|| CliError::IncompatibleSuite {
        operation: "export".into(),
        kind: fixture.kind(),
        fixture: fixture.name.clone(),
    })?;
    let doc = x.l.to_document(
        &fixture.name,
        DocumentTolerances {
            finite_difference_step: FD_STEP,
            richardson_relative: RICHARDSON_TOL,
            closure: CLOSURE_TOL,
        },
    );
    write_json(out, &doc)?;
    Ok(doc)
}

pub fn load_structure(path: &Path) -> Result<StructureDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        error,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
