//! Reports: a config echo, per-case records with verdicts, and a summary.
//! JSON carries everything; CSV flattens the numeric fields of each case.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::Suite;
use crate::{Error, Result, CORPUS_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub inputs: BTreeMap<String, String>,
    /// Finite numeric outputs; non-finite values are reported in the
    /// verdict message instead.
    pub numbers: BTreeMap<String, f64>,
    pub verdict: Verdict,
}

impl Case {
    pub fn new(id: impl Into<String>) -> Self {
        Case {
            id: id.into(),
            inputs: BTreeMap::new(),
            numbers: BTreeMap::new(),
            verdict: Verdict {
                status: Status::Pass,
                message: String::new(),
            },
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Records `value` under `key`; a non-finite value is noted in the
    /// message and left out of the numbers.
    pub fn num(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.numbers.insert(key.to_string(), value);
        } else {
            self.note(&format!("{key} = {value}"));
        }
    }

    pub fn note(&mut self, msg: &str) {
        if !self.verdict.message.is_empty() {
            self.verdict.message.push_str("; ");
        }
        self.verdict.message.push_str(msg);
    }

    /// Pass when `ok`, otherwise fail with `msg`.
    pub fn check(mut self, ok: bool, msg: impl Into<String>) -> Self {
        let msg = msg.into();
        self.verdict.status = if ok { Status::Pass } else { Status::Fail };
        if !msg.is_empty() {
            self.note(&msg);
        }
        self
    }

    pub fn error(mut self, e: &Error) -> Self {
        self.verdict.status = Status::Error;
        self.note(&e.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub corpus_version: String,
    pub suite: Suite,
    /// Only present when timing was requested, so that reports of identical
    /// runs stay byte-identical by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub all_pass: bool,
}

impl Summary {
    pub fn of(cases: &[Case]) -> Self {
        let count = |s: Status| cases.iter().filter(|c| c.verdict.status == s).count();
        let (passed, failed, errors) = (count(Status::Pass), count(Status::Fail), count(Status::Error));
        Summary {
            total: cases.len(),
            passed,
            failed,
            errors,
            all_pass: failed == 0 && errors == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub config: ExperimentConfig,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: Suite, config: ExperimentConfig, cases: Vec<Case>) -> Self {
        Report {
            meta: Meta {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                corpus_version: CORPUS_VERSION.into(),
                suite,
                wall_clock_s: None,
            },
            summary: Summary::of(&cases),
            config,
            cases,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
    }

    /// Column order: `id`, `t`, `status`, then every other number key in
    /// sorted order. Missing values are empty cells.
    pub fn csv_header(&self) -> Vec<String> {
        let keys: BTreeSet<&str> = self
            .cases
            .iter()
            .flat_map(|c| c.numbers.keys().map(String::as_str))
            .filter(|k| *k != "t")
            .collect();
        ["id", "t", "status"]
            .into_iter()
            .chain(keys)
            .map(String::from)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let header = self.csv_header();
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&header).map_err(io)?;
        for case in &self.cases {
            let status = serde_json::to_value(case.verdict.status)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            let mut row = vec![case.id.clone()];
            row.push(case.numbers.get("t").map(|v| format!("{v:?}")).unwrap_or_default());
            row.push(status);
            for key in &header[3..] {
                row.push(case.numbers.get(key).map(|v| format!("{v:?}")).unwrap_or_default());
            }
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Writes the report to `path`.
pub fn emit(report: &Report, format: Format, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = std::io::BufWriter::new(file);
    match format {
        Format::Json => {
            let text = report.to_json()?;
            out.write_all(text.as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .and_then(|_| out.flush())
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        Format::Csv => report.write_csv(out),
    }
}
