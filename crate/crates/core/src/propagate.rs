// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-step integration of the closed-loop master equation and trajectory
//! recording.
//!
//! The feedback fields are functions of the state alone, so the closed loop
//! is an autonomous nonlinear ODE. A classical RK4 step re-evaluates the
//! fields at every stage state; fixed stepping keeps trajectories
//! bit-reproducible across parameter sweeps.

use num_complex::Complex64 as C64;

use crate::control::{ControlConfig, FieldContext, FieldSample};
use crate::error::{Error, Result};
use crate::lindblad::{apply_dissipator, DensityMatrix, LindbladModel};
use crate::operators::{expectation, hermitian_eigenvalues, ComplexMatrix, StateVector};
use crate::tol;

/// Fixed-step integrator parameters (time in units of 1/gamma).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorSettings {
    pub dt: f64,
    pub t_final: f64,
    /// Record every this many steps (the initial and final states are always
    /// recorded).
    pub record_stride: usize,
    /// Divide by the trace after each step; drift stays monitored either way.
    pub renormalize: bool,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 30.0,
            record_stride: 10,
            renormalize: true,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || self.dt.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.t_final < self.dt {
            return Err(Error::InvalidConfig(format!(
                "t_final {} is shorter than one step {}",
                self.t_final, self.dt
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig("record_stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Target state and DFS basis used for the fidelity diagnostics recorded
/// along a trajectory.
#[derive(Debug, Clone)]
pub struct Probes {
    pub target: StateVector,
    pub dfs_basis: Vec<StateVector>,
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    pub rho: DensityMatrix,
    pub fields: FieldSample,
    pub lyapunov: f64,
    pub fid_target: f64,
    pub fid_dfs: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    /// Frobenius norm of [A, rho].
    pub commutator_norm: f64,
}

/// Recorded closed-loop trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Stage-level count of saturation events over the whole run.
    pub saturation_events: u64,
    /// Max over steps of |Tr rho - 1| / dt before renormalization.
    pub max_trace_drift_rate: f64,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectories are never empty")
    }
}

/// The closed-loop system: model plus feedback law, with the per-run
/// constants (commutators, Gamma) precomputed.
pub struct ClosedLoop<'a> {
    model: &'a LindbladModel,
    config: &'a ControlConfig,
    ctx: FieldContext,
    gamma: ComplexMatrix,
}

impl<'a> ClosedLoop<'a> {
    pub fn new(model: &'a LindbladModel, config: &'a ControlConfig) -> Result<Self> {
        if config.observable().dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: config.observable().dim(),
            });
        }
        let ctx = FieldContext::new(config, model)?;
        Ok(Self {
            model,
            config,
            ctx,
            gamma: model.gamma_matrix(),
        })
    }

    /// Feedback fields at a state.
    pub fn fields(&self, rho: &DensityMatrix) -> FieldSample {
        self.fields_raw(rho.matrix()).1
    }

    fn fields_raw(&self, rho: &ComplexMatrix) -> (ComplexMatrix, FieldSample) {
        let lrho = apply_dissipator(self.model.channels(), &self.gamma, rho);
        let fields = self.ctx.sample(self.config, &lrho, rho);
        (lrho, fields)
    }

    /// Right-hand side of the closed loop at a state matrix.
    fn rhs_raw(&self, rho: &ComplexMatrix) -> (ComplexMatrix, FieldSample) {
        let (lrho, fields) = self.fields_raw(rho);
        let mut h = self.model.h0().matrix().clone();
        for (f, hn) in fields.values.iter().zip(self.model.controls()) {
            if *f != 0.0 {
                h = &h + &hn.matrix().scaled(C64::new(*f, 0.0));
            }
        }
        let comm = &(&h * rho) - &(rho * &h);
        let out = &comm.scaled(C64::new(0.0, -1.0)) + &lrho;
        (out, fields)
    }

    /// -i[H0 + sum f_n H_n, rho] + L(rho) with law-generated fields.
    pub fn rhs(&self, rho: &DensityMatrix) -> ComplexMatrix {
        self.rhs_raw(rho.matrix()).0
    }

    fn step_raw(
        &self,
        rho: &ComplexMatrix,
        dt: f64,
        renormalize: bool,
    ) -> Result<(ComplexMatrix, u32, f64)> {
        let mut saturations = 0u32;
        let mut count = |fs: &FieldSample| {
            if fs.saturated {
                saturations += 1;
            }
        };

        let (k1, f1) = self.rhs_raw(rho);
        count(&f1);
        let half = 0.5 * dt;
        let s2 = rho + &k1.scaled(C64::new(half, 0.0));
        let (k2, f2) = self.rhs_raw(&s2);
        count(&f2);
        let s3 = rho + &k2.scaled(C64::new(half, 0.0));
        let (k3, f3) = self.rhs_raw(&s3);
        count(&f3);
        let s4 = rho + &k3.scaled(C64::new(dt, 0.0));
        let (k4, f4) = self.rhs_raw(&s4);
        count(&f4);

        let incr = &(&k1 + &k4) + &(&k2 + &k3).scaled(C64::new(2.0, 0.0));
        let next = rho + &incr.scaled(C64::new(dt / 6.0, 0.0));
        // Hermitize; RK4 preserves Hermiticity up to rounding only.
        let mut next = next.hermitian_part();

        let trace = next.trace().re;
        if !trace.is_finite() || (trace - 1.0).abs() > 0.5 {
            return Err(Error::StepTrace {
                defect: (trace - 1.0).abs(),
            });
        }
        let drift = (trace - 1.0).abs();

        self.check_positivity(&next)?;
        if renormalize {
            next = next.scaled(C64::new(1.0 / trace, 0.0));
        }
        Ok((next, saturations, drift))
    }

    fn check_positivity(&self, rho: &ComplexMatrix) -> Result<()> {
        // Gershgorin certificate first; the full eigenvalue check only runs
        // when the cheap bound cannot rule a violation out.
        let n = rho.dim();
        let mut bound = f64::INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            for j in 0..n {
                if i != j {
                    radius += rho.entry(i, j).norm();
                }
            }
            bound = bound.min(rho.entry(i, i).re - radius);
        }
        if bound >= tol::STEP_MIN_EIG {
            return Ok(());
        }
        let min_eigenvalue = hermitian_eigenvalues(rho)[0];
        if min_eigenvalue < tol::STEP_MIN_EIG {
            return Err(Error::StepPositivity { min_eigenvalue });
        }
        Ok(())
    }

    /// One RK4 step of length `dt`, renormalized.
    pub fn step(&self, rho: &DensityMatrix, dt: f64) -> Result<DensityMatrix> {
        if dt <= 0.0 || dt.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let (next, _, _) = self.step_raw(rho.matrix(), dt, true)?;
        Ok(DensityMatrix::wrap_unchecked(next))
    }

    /// Integrate from `rho0` and record diagnostics every
    /// `settings.record_stride` steps.
    pub fn propagate(
        &self,
        rho0: &DensityMatrix,
        settings: &IntegratorSettings,
        probes: &Probes,
    ) -> Result<Trajectory> {
        settings.validate()?;
        if rho0.dim() != self.model.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.model.dim(),
                got: rho0.dim(),
            });
        }
        let n_steps = (settings.t_final / settings.dt).round().max(1.0) as usize;
        let mut samples = Vec::with_capacity(n_steps / settings.record_stride + 2);
        let mut rho = rho0.matrix().clone();
        let mut saturation_events = 0u64;
        let mut max_drift_rate = 0.0f64;

        samples.push(self.record(0.0, &rho, probes)?);
        for k in 1..=n_steps {
            let t = k as f64 * settings.dt;
            let (next, sat, drift) = self
                .step_raw(&rho, settings.dt, settings.renormalize)
                .map_err(|e| match e {
                    Error::StepPositivity { min_eigenvalue } => {
                        Error::PositivityViolation { t, min_eigenvalue }
                    }
                    Error::StepTrace { defect } => Error::TraceViolation { t, defect },
                    other => other,
                })?;
            rho = next;
            saturation_events += u64::from(sat);
            max_drift_rate = max_drift_rate.max(drift / settings.dt);
            if k % settings.record_stride == 0 || k == n_steps {
                samples.push(self.record(t, &rho, probes)?);
            }
        }

        Ok(Trajectory {
            samples,
            saturation_events,
            max_trace_drift_rate: max_drift_rate,
        })
    }

    fn record(&self, t: f64, rho: &ComplexMatrix, probes: &Probes) -> Result<TrajectorySample> {
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > tol::DENSITY_TRACE {
            return Err(Error::TraceViolation {
                t,
                defect: (trace - 1.0).abs(),
            });
        }
        let min_eigenvalue = hermitian_eigenvalues(rho)[0];
        if min_eigenvalue < tol::DENSITY_MIN_EIG {
            return Err(Error::PositivityViolation { t, min_eigenvalue });
        }
        let (_, fields) = self.fields_raw(rho);
        let state = DensityMatrix::wrap_unchecked(rho.clone());
        let lyapunov = expectation(self.config.observable(), rho)?;
        let fid_target = fidelity(&state, &probes.target)?;
        let fid_dfs = subspace_fidelity(&state, &probes.dfs_basis)?;
        let commutator_norm =
            crate::control::invariant_set_distance(self.config.observable(), &state)?;
        Ok(TrajectorySample {
            t,
            rho: state,
            fields,
            lyapunov,
            fid_target,
            fid_dfs,
            trace,
            min_eigenvalue,
            commutator_norm,
        })
    }
}

/// Closed-loop right-hand side at `rho` (law-generated fields).
pub fn rhs(
    model: &LindbladModel,
    config: &ControlConfig,
    rho: &DensityMatrix,
) -> Result<ComplexMatrix> {
    Ok(ClosedLoop::new(model, config)?.rhs(rho))
}

/// One RK4 step of the closed loop.
pub fn step(
    model: &LindbladModel,
    config: &ControlConfig,
    rho: &DensityMatrix,
    dt: f64,
) -> Result<DensityMatrix> {
    ClosedLoop::new(model, config)?.step(rho, dt)
}

/// Integrate the closed loop and record a trajectory.
pub fn propagate(
    model: &LindbladModel,
    config: &ControlConfig,
    rho0: &DensityMatrix,
    settings: &IntegratorSettings,
    probes: &Probes,
) -> Result<Trajectory> {
    ClosedLoop::new(model, config)?.propagate(rho0, settings, probes)
}

/// Integrate the master equation with the fields frozen at fixed values.
///
/// The generator is then linear and time-independent, which makes this the
/// reference point for comparisons against exact superoperator
/// exponentiation; no renormalization or hermitization is applied.
pub fn propagate_fixed_fields(
    model: &LindbladModel,
    fields: &[f64],
    rho0: &DensityMatrix,
    dt: f64,
    t_final: f64,
) -> Result<DensityMatrix> {
    if fields.len() != model.controls().len() {
        return Err(Error::InvalidConfig(format!(
            "{} field values for {} controls",
            fields.len(),
            model.controls().len()
        )));
    }
    if dt <= 0.0 || dt.is_nan() || t_final < dt {
        return Err(Error::InvalidConfig(format!(
            "invalid fixed-field horizon: dt = {dt}, t_final = {t_final}"
        )));
    }
    let mut h = model.h0().matrix().clone();
    for (f, hn) in fields.iter().zip(model.controls()) {
        h = &h + &hn.matrix().scaled(C64::new(*f, 0.0));
    }
    let gamma = model.gamma_matrix();
    let generator = |rho: &ComplexMatrix| -> ComplexMatrix {
        let comm = &(&h * rho) - &(rho * &h);
        &comm.scaled(C64::new(0.0, -1.0)) + &apply_dissipator(model.channels(), &gamma, rho)
    };

    let n_steps = (t_final / dt).round().max(1.0) as usize;
    let mut rho = rho0.matrix().clone();
    for _ in 0..n_steps {
        let k1 = generator(&rho);
        let k2 = generator(&(&rho + &k1.scaled(C64::new(0.5 * dt, 0.0))));
        let k3 = generator(&(&rho + &k2.scaled(C64::new(0.5 * dt, 0.0))));
        let k4 = generator(&(&rho + &k3.scaled(C64::new(dt, 0.0))));
        let incr = &(&k1 + &k4) + &(&k2 + &k3).scaled(C64::new(2.0, 0.0));
        rho = &rho + &incr.scaled(C64::new(dt / 6.0, 0.0));
    }
    Ok(DensityMatrix::wrap_unchecked(rho))
}

/// <psi| rho |psi>.
pub fn fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: target.dim(),
        });
    }
    let image = rho.matrix().mul_vec(target.amplitudes());
    let f: C64 = target
        .amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(f.re)
}

/// Tr(P rho) with P the projector onto the span of an orthonormal basis.
pub fn subspace_fidelity(rho: &DensityMatrix, basis: &[StateVector]) -> Result<f64> {
    let mut defect: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        if u.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                got: u.dim(),
            });
        }
        for (j, w) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((u.inner(w) - want).norm());
        }
    }
    if defect > tol::DFS_DEFAULT {
        return Err(Error::NonOrthonormalBasis {
            defect,
            tol: tol::DFS_DEFAULT,
        });
    }
    basis.iter().map(|b| fidelity(rho, b)).sum()
}
