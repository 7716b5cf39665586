// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Batch front end for the dfs-control simulator.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical-invariant violation,
//! 4 i/o error. `check-dfs` exits 3 when the certificate fails.

mod config;
mod exec;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dfs_control::{dark_states, dfs_check, Figure};

use config::RunConfig;
use exec::CliError;

#[derive(Parser)]
#[command(
    name = "dfs-control",
    version,
    about = "Lyapunov feedback control of open quantum systems: runs, sweeps, DFS checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one closed-loop trajectory, writing trajectory.csv and summary.txt.
    Run(RunArgs),
    /// Run a parameter sweep, writing sweep.csv, summary.txt and optional per-point files.
    Sweep(RunArgs),
    /// Check the three DFS conditions for the scenario's dark-state pair.
    CheckDfs(ConfigArgs),
    /// Print the built-in presets as config files.
    Presets,
}

#[derive(Args)]
struct ConfigArgs {
    /// Start from a named preset (fig2..fig6); defaults to fig3 values.
    #[arg(long)]
    preset: Option<String>,
    /// Apply `key = value` overrides from a file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the fully resolved configuration to stdout and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    base: ConfigArgs,
    /// Output directory (overrides output.path).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

fn resolve(args: &ConfigArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.preset {
        Some(name) => {
            let figure: Figure = name
                .parse()
                .map_err(|e: dfs_control::Error| CliError::config(e.to_string()))?;
            RunConfig::from_preset(figure)
        }
        None => RunConfig::default(),
    };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_str(&text)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(args: &RunArgs, sweep: bool) -> Result<(), CliError> {
    let cfg = resolve(&args.base)?;
    if args.base.print_config {
        print!("{}", cfg.print());
        return Ok(());
    }
    let out_dir = args.out.clone().unwrap_or_else(|| cfg.output_path.clone());
    if sweep {
        let jobs = args
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let rows = exec::run_sweep(&cfg, &out_dir, jobs)?;
        println!(
            "wrote {} ({} points)",
            out_dir.join("sweep.csv").display(),
            rows.len()
        );
    } else {
        let traj = exec::run_single(&cfg, &out_dir)?;
        let last = traj.last();
        println!("wrote {}", out_dir.join("trajectory.csv").display());
        println!(
            "t = {}, fid_target = {:.6}, fid_dfs = {:.6}, V = {:.6}",
            last.t, last.fid_target, last.fid_dfs, last.lyapunov
        );
    }
    Ok(())
}

fn cmd_check_dfs(args: &ConfigArgs) -> Result<bool, CliError> {
    let cfg = resolve(args)?;
    if args.print_config {
        print!("{}", cfg.print());
        return Ok(true);
    }
    let model =
        dfs_control::build_model(&cfg.scenario).map_err(|e| CliError::config(e.to_string()))?;
    let (d1, d2) = dark_states(cfg.scenario.phi);
    let report = dfs_check(&[d1, d2], &model, dfs_control::tol::DFS_DEFAULT)
        .map_err(|e| CliError::config(e.to_string()))?;
    println!(
        "dfs check: {}",
        if report.passed { "passed" } else { "FAILED" }
    );
    println!(
        "invariance residual (condition 1) = {:.3e}",
        report.invariance_residual
    );
    for (m, ch) in report.channels.iter().enumerate() {
        println!(
            "channel {}: c = {:.3e}{:+.3e}i, residual (condition 2) = {:.3e}",
            m + 1,
            ch.eigenvalue.re,
            ch.eigenvalue.im,
            ch.residual
        );
    }
    println!(
        "gamma eigenvalue g = {:.3e}, residual (condition 3) = {:.3e}, |g - sum rate*|c|^2| = {:.3e}",
        report.gamma_eigenvalue, report.gamma_residual, report.gamma_consistency
    );
    println!("tolerance = {:.1e}", report.tol);
    Ok(report.passed)
}

fn cmd_presets() {
    for figure in Figure::ALL {
        println!("# preset {figure}");
        print!("{}", RunConfig::from_preset(figure).print());
        println!();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), CliError> = match &cli.cmd {
        Cmd::Run(args) => cmd_run(args, false),
        Cmd::Sweep(args) => cmd_run(args, true),
        Cmd::CheckDfs(args) => match cmd_check_dfs(args) {
            Ok(true) => Ok(()),
            Ok(false) => Err(CliError::Numeric("DFS conditions not satisfied".into())),
            Err(e) => Err(e),
        },
        Cmd::Presets => {
            cmd_presets();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dfs-control: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
