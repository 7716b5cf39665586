// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lyapunov function, feedback-field synthesis, critical-point structure and
//! LaSalle diagnostics.
//!
//! With `V(rho) = Tr(rho A)` and `[A, H0] = 0`, the derivative along the
//! master equation is `dV/dt = Tr(L(rho) A) - i sum_n f_n Tr([A, H_n] rho)`.
//! The cancellation field `f_j0 = -i Tr(L(rho) A) / Tr([A, H_j0] rho)` wipes
//! out the dissipator term, and `f_j = -i kappa_j (Tr([A, H_j] rho))*` makes
//! every remaining term a negative square, so V never increases.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lindblad::{apply_dissipator, DensityMatrix, LindbladModel};
use crate::operators::{
    commutator, expectation, spectral_decomposition, ComplexMatrix, HermitianOperator,
};
use crate::tol;

/// Observable, cancellation index and control strengths for the feedback law.
#[derive(Debug, Clone)]
pub struct ControlConfig {
    a: HermitianOperator,
    j0: usize,
    kappas: Vec<f64>,
    eps_den: f64,
    eps_num: f64,
    f_max: f64,
}

impl ControlConfig {
    /// Build a configuration against a model.
    ///
    /// `kappas` holds one strength per control other than `j0`, in control
    /// order. Requires `[A, H0] = 0`: otherwise the free motion alone could
    /// raise V and no field choice restores descent.
    pub fn new(
        a: HermitianOperator,
        j0: usize,
        kappas: Vec<f64>,
        model: &LindbladModel,
    ) -> Result<Self> {
        if a.dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: a.dim(),
            });
        }
        let f = model.controls().len();
        if f > 0 {
            if j0 >= f {
                return Err(Error::IndexOutOfRange { index: j0, dim: f });
            }
            if kappas.len() != f - 1 {
                return Err(Error::InvalidConfig(format!(
                    "expected {} control strengths for {} controls, got {}",
                    f - 1,
                    f,
                    kappas.len()
                )));
            }
        } else if !kappas.is_empty() {
            return Err(Error::InvalidConfig(
                "control strengths given for a model without controls".into(),
            ));
        }
        for &k in &kappas {
            if k <= 0.0 || k.is_nan() {
                return Err(Error::InvalidConfig(format!(
                    "control strength must be positive, got {k}"
                )));
            }
        }
        let comm = commutator(a.matrix(), model.h0().matrix())?;
        let defect = comm.frobenius_norm();
        if defect > tol::OBSERVABLE_COMMUTES {
            return Err(Error::InvalidConfig(format!(
                "[A, H0] has Frobenius norm {defect:.3e}; the observable must commute with H0"
            )));
        }
        Ok(Self {
            a,
            j0,
            kappas,
            eps_den: tol::EPS_DEN,
            eps_num: tol::EPS_NUM,
            f_max: tol::F_MAX,
        })
    }

    /// Override the numerical guards of the cancellation field.
    pub fn with_guards(mut self, eps_den: f64, eps_num: f64, f_max: f64) -> Self {
        self.eps_den = eps_den;
        self.eps_num = eps_num;
        self.f_max = f_max;
        self
    }

    pub fn observable(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn cancellation_index(&self) -> usize {
        self.j0
    }

    /// Strength kappa_j for control `j`; zero for the cancellation index.
    pub fn kappa(&self, j: usize) -> f64 {
        if j == self.j0 {
            0.0
        } else if j < self.j0 {
            self.kappas[j]
        } else {
            self.kappas[j - 1]
        }
    }

    pub fn eps_den(&self) -> f64 {
        self.eps_den
    }

    pub fn eps_num(&self) -> f64 {
        self.eps_num
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }
}

/// Feedback fields at one state, with the traces that produced them.
#[derive(Debug, Clone)]
pub struct FieldSample {
    /// f_n per control, in control order.
    pub values: Vec<f64>,
    /// Re Tr(L(rho) A), the quantity the cancellation field removes.
    pub numerator: f64,
    /// Tr([A, H_j0] rho); purely imaginary for valid inputs.
    pub denominator: C64,
    /// Set when the cancellation field hit the saturation bound.
    pub saturated: bool,
    /// Largest imaginary residue left after extracting the real fields.
    pub max_imag_residue: f64,
}

impl FieldSample {
    /// Externally supplied field values (diagnostics zeroed), e.g. to probe
    /// the open loop or to freeze fields for oracle comparisons.
    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            values,
            numerator: 0.0,
            denominator: C64::ZERO,
            saturated: false,
            max_imag_residue: 0.0,
        }
    }
}

/// Precomputed [A, H_j] commutators; the per-state work is then a handful of
/// trace inner products.
#[derive(Debug, Clone)]
pub(crate) struct FieldContext {
    comms: Vec<ComplexMatrix>,
}

impl FieldContext {
    pub(crate) fn new(config: &ControlConfig, model: &LindbladModel) -> Result<Self> {
        let comms = model
            .controls()
            .iter()
            .map(|h| commutator(config.a.matrix(), h.matrix()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { comms })
    }

    /// Trace Tr([A, H_j] rho) per control.
    pub(crate) fn traces(&self, rho: &ComplexMatrix) -> Vec<C64> {
        self.comms.iter().map(|c| rho.trace_product(c)).collect()
    }

    /// Synthesize all fields given the dissipator image of the state.
    pub(crate) fn sample(
        &self,
        config: &ControlConfig,
        lrho: &ComplexMatrix,
        rho: &ComplexMatrix,
    ) -> FieldSample {
        let minus_i = C64::new(0.0, -1.0);
        let num_c = lrho.trace_product(config.a.matrix());
        let mut max_imag_residue = num_c.im.abs();
        let mut values = vec![0.0; self.comms.len()];
        let mut denominator = C64::ZERO;
        let mut saturated = false;

        for (j, t) in self.traces(rho).iter().enumerate() {
            if j == config.j0 {
                denominator = *t;
                let f = if t.norm() < config.eps_den {
                    if num_c.norm() < config.eps_num {
                        0.0
                    } else {
                        // Denominator collapsed under a live numerator: pin
                        // the field at the bound, keeping the sign of the
                        // limiting ratio.
                        saturated = true;
                        config.f_max.copysign((minus_i * num_c * t.conj()).re)
                    }
                } else {
                    let raw = minus_i * num_c / t;
                    max_imag_residue = max_imag_residue.max(raw.im.abs());
                    if raw.re.abs() > config.f_max {
                        saturated = true;
                        config.f_max.copysign(raw.re)
                    } else {
                        raw.re
                    }
                };
                values[j] = f;
            } else {
                let raw = minus_i * config.kappa(j) * t.conj();
                max_imag_residue = max_imag_residue.max(raw.im.abs());
                values[j] = raw.re;
            }
        }

        FieldSample {
            values,
            numerator: num_c.re,
            denominator,
            saturated,
            max_imag_residue,
        }
    }
}

fn check_compatible(config: &ControlConfig, model: &LindbladModel) -> Result<()> {
    if config.a.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: config.a.dim(),
        });
    }
    let f = model.controls().len();
    if f > 0 && (config.j0 >= f || config.kappas.len() != f - 1) {
        return Err(Error::InvalidConfig(format!(
            "control configuration ({} strengths, cancellation index {}) does not fit a model \
             with {} controls",
            config.kappas.len(),
            config.j0,
            f
        )));
    }
    Ok(())
}

/// V(rho) = Tr(rho A).
pub fn lyapunov_value(config: &ControlConfig, rho: &DensityMatrix) -> Result<f64> {
    expectation(&config.a, rho.matrix())
}

/// Feedback fields of the control law at `rho`.
pub fn control_fields(
    config: &ControlConfig,
    model: &LindbladModel,
    rho: &DensityMatrix,
) -> Result<FieldSample> {
    check_compatible(config, model)?;
    if rho.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: rho.dim(),
        });
    }
    let ctx = FieldContext::new(config, model)?;
    let lrho = apply_dissipator(model.channels(), &model.gamma_matrix(), rho.matrix());
    Ok(ctx.sample(config, &lrho, rho.matrix()))
}

/// dV/dt for the given fields: `Tr(L(rho) A) - i sum_n f_n Tr([A, H_n] rho)`.
///
/// With unsaturated law-generated fields this is
/// `-sum_{j != j0} kappa_j |Tr([A, H_j] rho)|^2 <= 0`.
pub fn lyapunov_derivative(
    config: &ControlConfig,
    model: &LindbladModel,
    rho: &DensityMatrix,
    fields: &FieldSample,
) -> Result<f64> {
    check_compatible(config, model)?;
    if fields.values.len() != model.controls().len() {
        return Err(Error::InvalidConfig(format!(
            "{} field values for {} controls",
            fields.values.len(),
            model.controls().len()
        )));
    }
    let lrho = apply_dissipator(model.channels(), &model.gamma_matrix(), rho.matrix());
    let mut vdot = lrho.trace_product(config.a.matrix());
    let ctx = FieldContext::new(config, model)?;
    for (f, t) in fields.values.iter().zip(ctx.traces(rho.matrix())) {
        vdot += C64::new(0.0, -1.0) * *f * t;
    }
    Ok(vdot.re)
}

/// Nature of V around the critical state |A_j><A_j|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalPointClass {
    Minimum,
    Maximum,
    Saddle,
}

impl std::fmt::Display for CriticalPointClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Minimum => write!(f, "minimum"),
            Self::Maximum => write!(f, "maximum"),
            Self::Saddle => write!(f, "saddle"),
        }
    }
}

/// Classify the eigenprojector of `a` at `index` (ascending eigenvalue order)
/// as a minimum, maximum or saddle of V over state space.
///
/// Second-order variations around the projector pick up `A_alpha - A_j`
/// weights, so only the position of A_j in the spectrum matters.
pub fn classify_critical_point(a: &HermitianOperator, index: usize) -> Result<CriticalPointClass> {
    let dec = spectral_decomposition(a);
    let n = dec.eigenvalues.len();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, dim: n });
    }
    let value = dec.eigenvalues[index];
    let min = dec.eigenvalues[0];
    let max = dec.eigenvalues[n - 1];
    if (value - min).abs() <= tol::DEGENERACY {
        Ok(CriticalPointClass::Minimum)
    } else if (value - max).abs() <= tol::DEGENERACY {
        Ok(CriticalPointClass::Maximum)
    } else {
        Ok(CriticalPointClass::Saddle)
    }
}

/// Frobenius norm of [A, rho]: zero exactly on the LaSalle invariant set the
/// closed loop converges to.
pub fn invariant_set_distance(a: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    Ok(commutator(a.matrix(), rho.matrix())?.frobenius_norm())
}
