//! Runs one configuration and writes its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use wmr_pendulum::angle;
use wmr_pendulum::diagnostics::DiagnosticsError;
use wmr_pendulum::sim::{detect_events, SimError};
use wmr_pendulum::{simulate, ResidualReport, Scenario, SwingUpLaw, Trajectory};

use crate::config::RunConfig;
use crate::output::{write_csv, Summary};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("simulation failed: {0}")]
    Sim(#[from] SimError),
    #[error("diagnostics failed: {0}")]
    Diagnostics(#[from] DiagnosticsError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub trajectory: Trajectory,
    pub summary: Summary,
}

/// Starts hanging straight down at rest, where the swing-up law exerts nothing.
pub fn is_excluded_start(sc: &Scenario) -> bool {
    let (s, c) = angle::sin_cos(sc.initial.theta);
    s == 0.0 && c < 0.0 && sc.initial.theta_dot == 0.0
}

/// Simulates without touching the filesystem.
pub fn execute(cfg: &RunConfig, name: &str) -> Result<Outcome, RunError> {
    let sc = cfg.scenario;
    let tr = simulate(&sc)?;
    let report = if cfg.diagnostics {
        Some(ResidualReport::compute(&tr, &sc.params, &sc.gains)?)
    } else {
        None
    };
    let corrected_energy_law_max = if cfg.diagnostics && sc.swing_up_law == SwingUpLaw::Printed {
        let companion = Scenario {
            swing_up_law: SwingUpLaw::Corrected,
            ..sc
        };
        let ctr = simulate(&companion)?;
        ResidualReport::compute(&ctr, &sc.params, &sc.gains)?.energy_law_max
    } else {
        None
    };
    let excluded = is_excluded_start(&sc);
    let theta0 = tr.records[0].state.theta;
    let summary = Summary {
        name: name.to_string(),
        scenario: sc,
        final_record: *tr.last().expect("a trajectory has at least one record"),
        events: detect_events(&tr, &cfg.events),
        report,
        excluded_initial_condition: excluded,
        stayed_at_start: excluded && tr.records.iter().all(|r| r.state.theta == theta0),
        corrected_energy_law_max,
    };
    Ok(Outcome {
        trajectory: tr,
        summary,
    })
}

/// Simulates and writes `trajectory.csv` and `summary.txt` into `dir`.
pub fn run(cfg: &RunConfig, name: &str, dir: &Path) -> Result<Outcome, RunError> {
    let outcome = execute(cfg, name)?;
    let io = |path: PathBuf| move |source| RunError::Io { path, source };
    fs::create_dir_all(dir).map_err(io(dir.to_path_buf()))?;
    let csv_path = dir.join(TRAJECTORY_FILE);
    let file = fs::File::create(&csv_path).map_err(io(csv_path.clone()))?;
    write_csv(&outcome.trajectory, &cfg.columns, file).map_err(io(csv_path))?;
    let summary_path = dir.join(SUMMARY_FILE);
    fs::write(&summary_path, outcome.summary.render()).map_err(io(summary_path))?;
    Ok(outcome)
}
