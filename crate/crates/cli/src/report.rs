use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::fixture::FixtureKind;
use crate::Suite;

/// How a law was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// Exact check: passes with zero violations.
    Count { violations: usize },
    /// Passes when `residual <= bound`.
    AtMost { residual: f64, bound: f64 },
    /// Passes when `residual >= bound`; used where a check must detect a
    /// failure.
    AtLeast { residual: f64, bound: f64 },
    /// The check could not be carried out.
    Error { message: String },
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match *self {
            Outcome::Count { violations } => violations == 0,
            Outcome::AtMost { residual, bound } => residual <= bound,
            Outcome::AtLeast { residual, bound } => residual >= bound,
            Outcome::Error { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawResult {
    pub id: String,
    pub statement: String,
    pub mode: Mode,
    /// Cases examined: pairs, samples or basis elements.
    pub checked: usize,
    pub outcome: Outcome,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl LawResult {
    pub fn new(id: &str, statement: &str, mode: Mode, checked: usize, outcome: Outcome) -> Self {
        Self {
            id: id.to_string(),
            statement: statement.to_string(),
            mode,
            checked,
            passed: outcome.passed(),
            outcome,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// The deterministic part of a run: for a given fixture, seed and sample
/// count it serializes to the same bytes every time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub fixture: String,
    pub kind: FixtureKind,
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    /// Sorted by `id`.
    pub laws: Vec<LawResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| !l.passed)
    }

    pub fn law(&self, id: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.id == id)
    }

    /// One line per law, for the terminal.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} ({}, suite {}, seed {})\n",
            self.fixture, self.kind, self.suite, self.seed
        );
        for l in &self.laws {
            let status = if l.passed { "ok  " } else { "FAIL" };
            let value = match &l.outcome {
                Outcome::Count { violations } => format!("{violations} violations / {} checked", l.checked),
                Outcome::AtMost { residual, bound } => format!("{residual:.3e} <= {bound:.0e} ({} checked)", l.checked),
                Outcome::AtLeast { residual, bound } => {
                    format!("{residual:.3e} >= {bound:.0e} ({} checked)", l.checked)
                }
                Outcome::Error { message } => message.clone(),
            };
            out.push_str(&format!("  {status} {:<40} {value}\n", l.id));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} laws, {} failed\n", self.laws.len(), failed));
        out
    }
}

/// A report together with its timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub report: SuiteReport,
    pub wall_time_seconds: f64,
}

impl RunOutput {
    pub fn new(report: SuiteReport, wall_time: Duration) -> Self {
        Self {
            report,
            wall_time_seconds: wall_time.as_secs_f64(),
        }
    }
}
