// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run and sweep execution.
//!
//! Sweep points evaluate on a rayon pool sized by `--jobs`; results are
//! buffered and written in sweep order, so output bytes do not depend on
//! completion order.

use std::fmt;
use std::path::Path;

use dfs_control::{propagate, Error, Trajectory};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::output;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2: the run description is unusable.
    Config(String),
    /// Exit code 3: a numerical invariant failed during propagation.
    Numeric(String),
    /// Exit code 4: output could not be written.
    Io(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        Self::Config(msg)
    }

    pub fn io(msg: String) -> Self {
        Self::Io(msg)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric(_) => 3,
            Self::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "config error: {msg}"),
            Self::Numeric(msg) => write!(f, "numerical invariant violation: {msg}"),
            Self::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

fn from_core(e: Error) -> CliError {
    match e {
        Error::PositivityViolation { .. }
        | Error::TraceViolation { .. }
        | Error::StepPositivity { .. }
        | Error::StepTrace { .. } => CliError::Numeric(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

/// One sweep point of the aggregate CSV.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_value: f64,
    pub fid_target_final: f64,
    pub fid_dfs_final: f64,
    pub v_final: f64,
}

/// Integrate one point and enforce the row invariants the CSV promises.
fn propagate_point(cfg: &RunConfig) -> Result<Trajectory, CliError> {
    let (model, config, rho0, probes) = cfg.to_preset().assemble().map_err(from_core)?;
    let config = config.with_guards(cfg.eps_den, cfg.eps_num, cfg.f_max);
    let traj = propagate(&model, &config, &rho0, &cfg.integrator, &probes).map_err(from_core)?;
    let mut prev = f64::INFINITY;
    for s in &traj.samples {
        if s.lyapunov > prev + 1e-8 {
            return Err(CliError::Numeric(format!(
                "V increased from {prev} to {} at t = {}",
                s.lyapunov, s.t
            )));
        }
        prev = s.lyapunov;
    }
    Ok(traj)
}

/// Single trajectory: `trajectory.csv` plus `summary.txt` under `out_dir`.
pub fn run_single(cfg: &RunConfig, out_dir: &Path) -> Result<Trajectory, CliError> {
    let traj = propagate_point(cfg)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("{}: {e}", out_dir.display())))?;
    output::write_trajectory_csv(&out_dir.join("trajectory.csv"), &traj, cfg.precision)?;
    output::write_run_summary(&out_dir.join("summary.txt"), &traj, cfg.precision)?;
    Ok(traj)
}

/// Grid in axis-major order: the primary axis varies slowest.
fn grid(cfg: &RunConfig) -> Result<Vec<(f64, RunConfig)>, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("sweep requires sweep.axis/start/stop/count".into()))?;
    let primary = sweep.primary.values();
    let mut points = Vec::new();
    match &sweep.secondary {
        None => {
            for &v in &primary {
                points.push((v, cfg.with_axis_value(sweep.primary.kind, v)));
            }
        }
        Some(sec) => {
            for &v in &primary {
                let base = cfg.with_axis_value(sweep.primary.kind, v);
                for w in sec.values() {
                    points.push((v, base.with_axis_value(sec.kind, w)));
                }
            }
        }
    }
    Ok(points)
}

fn axis_names(cfg: &RunConfig) -> Vec<String> {
    let mut names = Vec::new();
    if let Some(s) = &cfg.sweep {
        names.push(s.primary.kind.name().to_string());
        if let Some(sec) = &s.secondary {
            names.push(sec.kind.name().to_string());
        }
    }
    names
}

/// Sweep: aggregate `sweep.csv`, `summary.txt`, and optional per-point
/// trajectories, in deterministic sweep order.
pub fn run_sweep(cfg: &RunConfig, out_dir: &Path, jobs: usize) -> Result<Vec<SweepRow>, CliError> {
    let points = grid(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config(format!("cannot build worker pool: {e}")))?;
    let results: Vec<(f64, Result<Trajectory, CliError>)> = pool.install(|| {
        points
            .par_iter()
            .map(|(axis_value, point)| (*axis_value, propagate_point(point)))
            .collect()
    });

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("{}: {e}", out_dir.display())))?;
    let mut rows = Vec::with_capacity(results.len());
    let mut saturation_total = 0u64;
    for (index, (axis_value, result)) in results.into_iter().enumerate() {
        let traj = result.map_err(|e| match e {
            CliError::Numeric(msg) => CliError::Numeric(format!("sweep point {index}: {msg}")),
            other => other,
        })?;
        let last = traj.last();
        saturation_total += traj.saturation_events;
        rows.push(SweepRow {
            axis_value,
            fid_target_final: last.fid_target,
            fid_dfs_final: last.fid_dfs,
            v_final: last.lyapunov,
        });
        if cfg.per_point {
            let path = out_dir.join(format!("point_{index:04}.csv"));
            output::write_trajectory_csv(&path, &traj, cfg.precision)?;
        }
    }
    output::write_sweep_csv(&out_dir.join("sweep.csv"), &rows, cfg.precision)?;
    output::write_sweep_summary(
        &out_dir.join("summary.txt"),
        &rows,
        &axis_names(cfg),
        saturation_total,
        cfg.precision,
    )?;
    Ok(rows)
}
