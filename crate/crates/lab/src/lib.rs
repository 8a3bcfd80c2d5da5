//! Seeded experiment runners over `dyadlab-core`, emitting CSV tables.

pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

use std::time::Instant;

pub use config::{Experiment, ExperimentConfig, WeakMode};
pub use error::{LabError, Result};
pub use table::CsvTable;

/// One named assertion made by a runner.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), pass, detail: detail.into() }
    }

    pub fn fail(name: &str, detail: impl Into<String>) -> Self {
        Self::new(name, false, detail)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub table: CsvTable,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// RNG stream of one `(κ, trial)` pair, so output never depends on scheduling.
pub(crate) fn stream_id(kappa: u32, trial: usize) -> u64 {
    (u64::from(kappa) << 32) | trial as u64
}

/// Runs the configured experiment and appends the standard footer.
pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match cfg.experiment {
        Experiment::Sharpness => experiments::sharpness::run(cfg)?,
        Experiment::Domination => experiments::domination::run(cfg)?,
        Experiment::Weaktype => experiments::weaktype::run(cfg)?,
        Experiment::Apchar => experiments::apchar::run(cfg)?,
        Experiment::Cover => experiments::cover::run(cfg)?,
    };
    let t = &mut report.table;
    t.note("experiment", cfg.experiment);
    t.note("seed", cfg.seed);
    t.note("version", env!("CARGO_PKG_VERSION"));
    t.note("passed", report.checks.iter().all(|c| c.pass));
    t.note("wall_time_s", format!("{:.3}", start.elapsed().as_secs_f64()));
    Ok(report)
}
