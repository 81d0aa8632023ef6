//! Verification reports: one record per pipeline step and an overall verdict.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The compute budget ran out before a step finished.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub predicted: String,
    pub computed: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inconclusive: bool,
    pub ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub pipeline: String,
    pub prime: u32,
    pub seed: u64,
    pub steps: Vec<Step>,
    pub verdict: Verdict,
    pub version: String,
}

impl Report {
    pub fn new(pipeline: &str, prime: u32, seed: u64, steps: Vec<Step>) -> Report {
        let verdict = if steps.iter().any(|s| s.inconclusive) {
            Verdict::Inconclusive
        } else if !steps.is_empty() && steps.iter().all(|s| s.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Report {
            pipeline: pipeline.into(),
            prime,
            seed,
            steps,
            verdict,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The report with timings zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for s in &mut r.steps {
            s.ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("pipeline {}  prime {}  seed {}\n", self.pipeline, self.prime, self.seed);
        let w = self.steps.iter().map(|s| s.name.len()).max().unwrap_or(0);
        for s in &self.steps {
            let tag = if s.inconclusive {
                "????"
            } else if s.pass {
                "pass"
            } else {
                "FAIL"
            };
            let _ = writeln!(
                out,
                "  [{tag}] {:w$}  predicted {}  computed {}  ({} ms)",
                s.name, s.predicted, s.computed, s.ms
            );
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (text|json)")),
        }
    }
}

/// Renders the report and writes it to `path` when given.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<String> {
    let s = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    if let Some(p) = path {
        std::fs::write(p, &s)?;
    }
    Ok(s)
}

/// Collects steps as a pipeline runs. Clones share the log, so a supervisor
/// can read the partial record of a pipeline that ran out of time.
#[derive(Clone, Debug)]
pub struct Recorder {
    steps: Arc<Mutex<Vec<Step>>>,
    last: Arc<Mutex<Instant>>,
}

impl Default for Recorder {
    fn default() -> Self {
        Recorder { steps: Arc::default(), last: Arc::new(Mutex::new(Instant::now())) }
    }
}

impl Recorder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a step timed from the previous record; returns `pass`.
    pub fn record(&self, name: &str, predicted: impl ToString, computed: impl ToString, pass: bool) -> bool {
        let mut last = self.last.lock().unwrap();
        let ms = last.elapsed().as_millis() as u64;
        *last = Instant::now();
        self.steps.lock().unwrap().push(Step {
            name: name.into(),
            predicted: predicted.to_string(),
            computed: computed.to_string(),
            pass,
            inconclusive: false,
            ms,
        });
        pass
    }

    /// Restarts the step clock.
    pub fn tick(&self) {
        *self.last.lock().unwrap() = Instant::now();
    }

    /// Marks the running step as cut off by the budget.
    pub fn timeout(&self, name: &str) {
        let ms = self.last.lock().unwrap().elapsed().as_millis() as u64;
        self.steps.lock().unwrap().push(Step {
            name: name.into(),
            predicted: "-".into(),
            computed: "timeout".into(),
            pass: false,
            inconclusive: true,
            ms,
        });
    }

    pub fn steps(&self) -> Vec<Step> {
        self.steps.lock().unwrap().clone()
    }
}
