//! Configuration ingestion, suite dispatch and reporting behind the `wcsg`
//! binary.

pub mod config;
pub mod expr;
pub mod report;
mod suites;

use serde::{Deserialize, Serialize};

pub use config::ExperimentConfig;
pub use report::{emit, Case, Format, Report, Status};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    NormTable,
    SemigroupCheck,
    CocycleCheck,
    BoundTable,
    GeneratorCheck,
    Reconstruct,
    ContinuityProbe,
    Admissibility,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::NormTable,
        Suite::SemigroupCheck,
        Suite::CocycleCheck,
        Suite::BoundTable,
        Suite::GeneratorCheck,
        Suite::Reconstruct,
        Suite::ContinuityProbe,
        Suite::Admissibility,
    ];
}

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    /// Quadrature tolerance.
    pub tol: Option<f64>,
    /// Angular node count of the quadrature and of the sample grid.
    pub grid: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig> {
        if let Some(tol) = self.tol {
            cfg.policy.tol = tol;
        }
        if let Some(n) = self.grid {
            cfg.policy.n_theta = n;
            cfg.sweep.grid.n_theta = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs `suite` (or the suite named in the config). Configuration problems
/// are errors; failures inside individual cases are recorded in the report.
pub fn run(config: &ExperimentConfig, suite: Option<Suite>) -> Result<Report> {
    let suite = suite.or(config.suite).ok_or_else(|| Error::Config {
        path: "suite".into(),
        msg: "no suite given on the command line or in the config".into(),
    })?;
    let mut echo = config.clone();
    echo.suite = Some(suite);
    let cases = suites::run_suite(suite, &echo)?;
    Ok(Report::new(suite, echo, cases))
}
