// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat key-value run configuration.
//!
//! The format is line-oriented `section.key = value` with `#` comments,
//! chosen to diff cleanly and parse without dependencies. `--print-config`
//! emits every key with full-precision values, so an echoed configuration
//! re-parses to the identical run.

use std::path::PathBuf;

use dfs_control::{
    Figure, FigurePreset, InitialStateParams, IntegratorSettings, ScenarioParams, Target,
};

use crate::exec::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Beta1,
    Beta2,
    Beta3,
    Kappa3,
}

impl AxisKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Beta1 => "beta1",
            Self::Beta2 => "beta2",
            Self::Beta3 => "beta3",
            Self::Kappa3 => "kappa3",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "beta1" => Ok(Self::Beta1),
            "beta2" => Ok(Self::Beta2),
            "beta3" => Ok(Self::Beta3),
            "kappa3" => Ok(Self::Kappa3),
            other => Err(CliError::config(format!(
                "unknown sweep axis '{other}' (expected beta1|beta2|beta3|kappa3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub kind: AxisKind,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.start + k as f64 * step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub primary: SweepAxis,
    pub secondary: Option<SweepAxis>,
}

/// Fully resolved run description; defaults equal the fig3 preset.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioParams,
    pub target: Target,
    pub kappa2: f64,
    /// Zero removes the third control from the active set.
    pub kappa3: f64,
    pub eps_den: f64,
    pub eps_num: f64,
    pub f_max: f64,
    pub init: InitialStateParams,
    pub integrator: IntegratorSettings,
    pub sweep: Option<SweepSpec>,
    pub output_path: PathBuf,
    pub precision: usize,
    pub per_point: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_preset(Figure::Fig3)
    }
}

impl RunConfig {
    pub fn from_preset(figure: Figure) -> Self {
        let p = dfs_control::preset(figure);
        Self {
            scenario: p.scenario,
            target: p.target,
            kappa2: p.kappa2,
            kappa3: p.kappa3.unwrap_or(0.0),
            eps_den: dfs_control::tol::EPS_DEN,
            eps_num: dfs_control::tol::EPS_NUM,
            f_max: dfs_control::tol::F_MAX,
            init: p.init,
            integrator: p.integrator,
            sweep: None,
            output_path: PathBuf::from("out"),
            precision: 9,
            per_point: false,
        }
    }

    /// Apply `key = value` overrides; unknown keys are rejected.
    pub fn apply_str(&mut self, text: &str) -> Result<(), CliError> {
        // Sweep keys may arrive in any order; collected here and assembled
        // after the scan.
        let mut axis: [Option<AxisKind>; 2] = [None, None];
        let mut start: [Option<f64>; 2] = [None, None];
        let mut stop: [Option<f64>; 2] = [None, None];
        let mut count: [Option<usize>; 2] = [None, None];
        if let Some(s) = &self.sweep {
            axis[0] = Some(s.primary.kind);
            start[0] = Some(s.primary.start);
            stop[0] = Some(s.primary.stop);
            count[0] = Some(s.primary.count);
            if let Some(sec) = &s.secondary {
                axis[1] = Some(sec.kind);
                start[1] = Some(sec.start);
                stop[1] = Some(sec.stop);
                count[1] = Some(sec.count);
            }
        }

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad =
                |what: &str| CliError::config(format!("line {}: {what}: '{raw}'", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected 'key = value'"))?;
            let key = key.trim();
            let value = value.trim();
            let f = || -> Result<f64, CliError> {
                let v: f64 = value.parse().map_err(|_| bad("expected a number"))?;
                if !v.is_finite() {
                    return Err(bad("value must be finite"));
                }
                Ok(v)
            };
            let n = || -> Result<usize, CliError> {
                value
                    .parse()
                    .map_err(|_| bad("expected a non-negative integer"))
            };
            let b = || -> Result<bool, CliError> {
                match value {
                    "true" => Ok(true),
                    "false" => Ok(false),
                    _ => Err(bad("expected true or false")),
                }
            };
            match key {
                "scenario.omega" => self.scenario.omega = f()?,
                "scenario.phi" => self.scenario.phi = f()?,
                "scenario.delta0" => self.scenario.delta0 = f()?,
                "scenario.delta1" => self.scenario.delta1 = f()?,
                "scenario.delta2" => self.scenario.delta2 = f()?,
                "scenario.gamma1" => self.scenario.gamma1 = f()?,
                "scenario.gamma2" => self.scenario.gamma2 = f()?,
                "scenario.gamma3" => self.scenario.gamma3 = f()?,
                "scenario.use_h3_variant" => self.scenario.use_h3_variant = b()?,
                "control.target" => {
                    self.target = value.parse().map_err(|e| bad(&format!("{e}")))?
                }
                "control.kappa2" => self.kappa2 = f()?,
                "control.kappa3" => self.kappa3 = f()?,
                "control.eps_den" => self.eps_den = f()?,
                "control.eps_num" => self.eps_num = f()?,
                "control.f_max" => self.f_max = f()?,
                "init.beta1" => self.init.beta1 = f()?,
                "init.beta2" => self.init.beta2 = f()?,
                "init.beta3" => self.init.beta3 = f()?,
                "integrate.dt" => self.integrator.dt = f()?,
                "integrate.t_final" => self.integrator.t_final = f()?,
                "integrate.record_stride" => self.integrator.record_stride = n()?,
                "integrate.renormalize" => self.integrator.renormalize = b()?,
                "sweep.axis" => axis[0] = Some(AxisKind::parse(value)?),
                "sweep.start" => start[0] = Some(f()?),
                "sweep.stop" => stop[0] = Some(f()?),
                "sweep.count" => count[0] = Some(n()?),
                "sweep.axis2" => axis[1] = Some(AxisKind::parse(value)?),
                "sweep.start2" => start[1] = Some(f()?),
                "sweep.stop2" => stop[1] = Some(f()?),
                "sweep.count2" => count[1] = Some(n()?),
                "output.path" => self.output_path = PathBuf::from(value),
                "output.precision" => self.precision = n()?,
                "output.per_point" => self.per_point = b()?,
                other => {
                    return Err(CliError::config(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }

        self.sweep = match (axis[0], start[0], stop[0], count[0]) {
            (None, None, None, None) => None,
            (Some(kind), Some(start0), Some(stop0), Some(count0)) => {
                let secondary =
                    match (axis[1], start[1], stop[1], count[1]) {
                        (None, None, None, None) => None,
                        (Some(kind), Some(start), Some(stop), Some(count)) => Some(SweepAxis {
                            kind,
                            start,
                            stop,
                            count,
                        }),
                        _ => return Err(CliError::config(
                            "incomplete secondary sweep axis: need sweep.axis2/start2/stop2/count2"
                                .into(),
                        )),
                    };
                Some(SweepSpec {
                    primary: SweepAxis {
                        kind,
                        start: start0,
                        stop: stop0,
                        count: count0,
                    },
                    secondary,
                })
            }
            _ => {
                return Err(CliError::config(
                    "incomplete sweep axis: need sweep.axis/start/stop/count".into(),
                ))
            }
        };
        self.validate()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.scenario
            .validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        self.integrator
            .validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        if self.kappa2 <= 0.0 || self.kappa2.is_nan() {
            return Err(CliError::config(format!(
                "control.kappa2 must be positive, got {}",
                self.kappa2
            )));
        }
        if self.kappa3 < 0.0 {
            return Err(CliError::config(format!(
                "control.kappa3 must be non-negative (0 disables the third control), got {}",
                self.kappa3
            )));
        }
        if !(6..=17).contains(&self.precision) {
            return Err(CliError::config(format!(
                "output.precision must lie in [6, 17], got {}",
                self.precision
            )));
        }
        if let Some(sweep) = &self.sweep {
            for ax in std::iter::once(&sweep.primary).chain(sweep.secondary.iter()) {
                if ax.count < 1 {
                    return Err(CliError::config(format!(
                        "sweep count for {} must be >= 1",
                        ax.kind.name()
                    )));
                }
                if ax.kind == AxisKind::Kappa3 && (ax.start < 0.0 || ax.stop < 0.0) {
                    return Err(CliError::config(
                        "kappa3 sweep values must be non-negative".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Point configuration with one sweep value substituted.
    pub fn with_axis_value(&self, kind: AxisKind, value: f64) -> Self {
        let mut point = self.clone();
        point.sweep = None;
        match kind {
            AxisKind::Beta1 => point.init.beta1 = value,
            AxisKind::Beta2 => point.init.beta2 = value,
            AxisKind::Beta3 => point.init.beta3 = value,
            AxisKind::Kappa3 => point.kappa3 = value,
        }
        point
    }

    pub fn to_preset(&self) -> FigurePreset {
        FigurePreset {
            scenario: self.scenario.clone(),
            target: self.target,
            kappa2: self.kappa2,
            kappa3: (self.kappa3 > 0.0).then_some(self.kappa3),
            init: self.init.clone(),
            integrator: self.integrator.clone(),
        }
    }

    /// Echo every key in a stable order at full precision.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("scenario.omega", format!("{}", self.scenario.omega));
        push("scenario.phi", format!("{}", self.scenario.phi));
        push("scenario.delta0", format!("{}", self.scenario.delta0));
        push("scenario.delta1", format!("{}", self.scenario.delta1));
        push("scenario.delta2", format!("{}", self.scenario.delta2));
        push("scenario.gamma1", format!("{}", self.scenario.gamma1));
        push("scenario.gamma2", format!("{}", self.scenario.gamma2));
        push("scenario.gamma3", format!("{}", self.scenario.gamma3));
        push(
            "scenario.use_h3_variant",
            format!("{}", self.scenario.use_h3_variant),
        );
        push("control.target", format!("{}", self.target));
        push("control.kappa2", format!("{}", self.kappa2));
        push("control.kappa3", format!("{}", self.kappa3));
        push("control.eps_den", format!("{}", self.eps_den));
        push("control.eps_num", format!("{}", self.eps_num));
        push("control.f_max", format!("{}", self.f_max));
        push("init.beta1", format!("{}", self.init.beta1));
        push("init.beta2", format!("{}", self.init.beta2));
        push("init.beta3", format!("{}", self.init.beta3));
        push("integrate.dt", format!("{}", self.integrator.dt));
        push("integrate.t_final", format!("{}", self.integrator.t_final));
        push(
            "integrate.record_stride",
            format!("{}", self.integrator.record_stride),
        );
        push(
            "integrate.renormalize",
            format!("{}", self.integrator.renormalize),
        );
        if let Some(sweep) = &self.sweep {
            push("sweep.axis", sweep.primary.kind.name().into());
            push("sweep.start", format!("{}", sweep.primary.start));
            push("sweep.stop", format!("{}", sweep.primary.stop));
            push("sweep.count", format!("{}", sweep.primary.count));
            if let Some(sec) = &sweep.secondary {
                push("sweep.axis2", sec.kind.name().into());
                push("sweep.start2", format!("{}", sec.start));
                push("sweep.stop2", format!("{}", sec.stop));
                push("sweep.count2", format!("{}", sec.count));
            }
        }
        push("output.path", self.output_path.display().to_string());
        push("output.precision", format!("{}", self.precision));
        push("output.per_point", format!("{}", self.per_point));
        out
    }
}
