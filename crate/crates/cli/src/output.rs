// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV and summary writers with locale-independent number formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use dfs_control::Trajectory;

use crate::exec::{CliError, SweepRow};

pub const TRAJECTORY_HEADER: &str = "t,f1,f2,f3,V,fid_target,fid_dfs,trace,min_eig,comm_norm";
pub const SWEEP_HEADER: &str = "axis_value,fid_target_final,fid_dfs_final,V_final";

/// Shortest representation of `x` truncated to `sig` significant digits,
/// fixed-point for moderate exponents and scientific otherwise.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (_, exp) = sci
        .split_once('e')
        .expect("e-format always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp >= -4 && (exp as i64) < sig as i64 {
        let decimals = (sig as i64 - 1 - exp as i64).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let (mant, _) = sci.split_once('e').expect("checked above");
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::io(format!("{}: {e}", path.display()))
}

pub fn write_trajectory_csv(
    path: &Path,
    traj: &Trajectory,
    precision: usize,
) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut go = || -> std::io::Result<()> {
        writeln!(w, "{TRAJECTORY_HEADER}")?;
        for s in &traj.samples {
            let field = |j: usize| s.fields.values.get(j).copied().unwrap_or(0.0);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{}",
                fmt_sig(s.t, precision),
                fmt_sig(field(0), precision),
                fmt_sig(field(1), precision),
                fmt_sig(field(2), precision),
                fmt_sig(s.lyapunov, precision),
                fmt_sig(s.fid_target, precision),
                fmt_sig(s.fid_dfs, precision),
                fmt_sig(s.trace, precision),
                fmt_sig(s.min_eigenvalue, precision),
                fmt_sig(s.commutator_norm, precision),
            )?;
        }
        w.flush()
    };
    go().map_err(|e| io_err(path, e))
}

pub fn write_run_summary(path: &Path, traj: &Trajectory, precision: usize) -> Result<(), CliError> {
    let last = traj.last();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut go = || -> std::io::Result<()> {
        writeln!(w, "status = ok")?;
        writeln!(w, "samples = {}", traj.samples.len())?;
        writeln!(w, "t_final = {}", fmt_sig(last.t, precision))?;
        writeln!(
            w,
            "fid_target_final = {}",
            fmt_sig(last.fid_target, precision)
        )?;
        writeln!(w, "fid_dfs_final = {}", fmt_sig(last.fid_dfs, precision))?;
        writeln!(w, "V_final = {}", fmt_sig(last.lyapunov, precision))?;
        writeln!(
            w,
            "comm_norm_final = {}",
            fmt_sig(last.commutator_norm, precision)
        )?;
        writeln!(w, "saturation_events = {}", traj.saturation_events)?;
        writeln!(
            w,
            "max_trace_drift_rate = {}",
            fmt_sig(traj.max_trace_drift_rate, precision)
        )?;
        w.flush()
    };
    go().map_err(|e| io_err(path, e))
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow], precision: usize) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut go = || -> std::io::Result<()> {
        writeln!(w, "{SWEEP_HEADER}")?;
        for row in rows {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_sig(row.axis_value, precision),
                fmt_sig(row.fid_target_final, precision),
                fmt_sig(row.fid_dfs_final, precision),
                fmt_sig(row.v_final, precision),
            )?;
        }
        w.flush()
    };
    go().map_err(|e| io_err(path, e))
}

pub fn write_sweep_summary(
    path: &Path,
    rows: &[SweepRow],
    axes: &[String],
    saturation_total: u64,
    precision: usize,
) -> Result<(), CliError> {
    let min = |f: fn(&SweepRow) -> f64| rows.iter().map(f).fold(f64::INFINITY, f64::min);
    let max = |f: fn(&SweepRow) -> f64| rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut go = || -> std::io::Result<()> {
        writeln!(w, "status = ok")?;
        writeln!(w, "points = {}", rows.len())?;
        for (i, ax) in axes.iter().enumerate() {
            if i == 0 {
                writeln!(w, "axis = {ax}")?;
            } else {
                writeln!(w, "axis2 = {ax}")?;
            }
        }
        let p = precision;
        writeln!(
            w,
            "fid_target_final_min = {}",
            fmt_sig(min(|r| r.fid_target_final), p)
        )?;
        writeln!(
            w,
            "fid_target_final_max = {}",
            fmt_sig(max(|r| r.fid_target_final), p)
        )?;
        writeln!(
            w,
            "fid_dfs_final_min = {}",
            fmt_sig(min(|r| r.fid_dfs_final), p)
        )?;
        writeln!(
            w,
            "fid_dfs_final_max = {}",
            fmt_sig(max(|r| r.fid_dfs_final), p)
        )?;
        writeln!(w, "V_final_min = {}", fmt_sig(min(|r| r.v_final), p))?;
        writeln!(w, "V_final_max = {}", fmt_sig(max(|r| r.v_final), p))?;
        writeln!(w, "saturation_events_total = {saturation_total}")?;
        w.flush()
    };
    go().map_err(|e| io_err(path, e))
}
