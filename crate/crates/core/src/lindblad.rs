// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! The controlled Markovian open system and its decoherence-free-subspace
//! certificate.
//!
//! The model is `drho/dt = -i[H0 + sum_n f_n H_n, rho] + L(rho)` with the
//! dissipator `L(rho) = sum_m lambda_m (L_m rho L_m^+ - {L_m^+ L_m, rho}/2)`.
//! A subspace spanned by an orthonormal basis is decoherence-free iff
//! (1) the span is invariant under H0, (2) every jump operator acts on the
//! basis as the same scalar c_m, and (3) Gamma = sum lambda_m L_m^+ L_m acts
//! as the scalar g = sum lambda_m |c_m|^2.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operators::{anticommutator, ComplexMatrix, HermitianOperator, StateVector};
use crate::{hermitian_eigenvalues, tol};

/// One decay channel: jump operator plus positive rate.
#[derive(Debug, Clone)]
pub struct DecayChannel {
    jump: ComplexMatrix,
    rate: f64,
}

impl DecayChannel {
    pub fn new(jump: ComplexMatrix, rate: f64) -> Result<Self> {
        if rate <= 0.0 || rate.is_nan() {
            return Err(Error::NonPositiveRate { rate });
        }
        Ok(Self { jump, rate })
    }

    pub fn jump(&self) -> &ComplexMatrix {
        &self.jump
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// Free Hamiltonian, control Hamiltonians and decay channels, all of one
/// dimension. Immutable once built.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    h0: HermitianOperator,
    controls: Vec<HermitianOperator>,
    channels: Vec<DecayChannel>,
}

impl LindbladModel {
    pub fn new(
        h0: HermitianOperator,
        controls: Vec<HermitianOperator>,
        channels: Vec<DecayChannel>,
    ) -> Result<Self> {
        let dim = h0.dim();
        for c in &controls {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        for ch in &channels {
            if ch.jump.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: ch.jump.dim(),
                });
            }
        }
        Ok(Self {
            h0,
            controls,
            channels,
        })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn h0(&self) -> &HermitianOperator {
        &self.h0
    }

    pub fn controls(&self) -> &[HermitianOperator] {
        &self.controls
    }

    pub fn channels(&self) -> &[DecayChannel] {
        &self.channels
    }

    /// Model with the same Hamiltonian and channels but a truncated control
    /// list; used to take a control out of the active set entirely.
    pub fn with_controls(&self, controls: Vec<HermitianOperator>) -> Result<Self> {
        Self::new(self.h0.clone(), controls, self.channels.clone())
    }

    /// Gamma = sum_m lambda_m L_m^+ L_m as a raw matrix.
    pub(crate) fn gamma_matrix(&self) -> ComplexMatrix {
        let mut gamma = ComplexMatrix::zeros(self.dim());
        for ch in &self.channels {
            let ldl = &ch.jump.dagger() * &ch.jump;
            gamma = &gamma + &ldl.scaled(C64::new(ch.rate, 0.0));
        }
        gamma
    }
}

/// Hermitian, unit-trace, positive-semidefinite state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > tol::DENSITY_HERMITIAN {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("hermiticity defect {defect:.3e}"),
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::DENSITY_TRACE || trace.im.abs() > tol::DENSITY_TRACE {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace {trace} deviates from 1"),
            });
        }
        let min_eig = hermitian_eigenvalues(&matrix)[0];
        if min_eig < tol::DENSITY_MIN_EIG {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("min eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { matrix })
    }

    /// |psi><psi|.
    pub fn pure(psi: &StateVector) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scaled(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// Wrap a matrix the integrator already keeps physical; recording-time
    /// checks re-validate against the strict invariants.
    pub(crate) fn wrap_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }
}

/// Dissipator evaluation shared by the public op and the integrator.
pub(crate) fn apply_dissipator(
    channels: &[DecayChannel],
    gamma: &ComplexMatrix,
    rho: &ComplexMatrix,
) -> ComplexMatrix {
    let mut out = anticommutator(gamma, rho).scaled(C64::new(-0.5, 0.0));
    for ch in channels {
        let sandwich = &(&ch.jump * rho) * &ch.jump.dagger();
        out = &out + &sandwich.scaled(C64::new(ch.rate, 0.0));
    }
    out
}

/// L(rho): Hermitian and traceless for every valid state.
pub fn dissipator(model: &LindbladModel, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if model.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: rho.dim(),
        });
    }
    Ok(apply_dissipator(
        model.channels(),
        &model.gamma_matrix(),
        rho.matrix(),
    ))
}

/// Gamma = sum_m lambda_m L_m^+ L_m.
pub fn gamma_operator(model: &LindbladModel) -> HermitianOperator {
    HermitianOperator::new(model.gamma_matrix().hermitian_part())
        .expect("Gamma is Hermitian by construction")
}

/// Per-channel outcome of the DFS check.
#[derive(Debug, Clone)]
pub struct ChannelDfsResult {
    /// c_m extracted as <psi_1| L_m |psi_1>.
    pub eigenvalue: C64,
    /// max_n || L_m psi_n - c_m psi_n ||.
    pub residual: f64,
}

/// Result of checking the three DFS conditions on a basis.
#[derive(Debug, Clone)]
pub struct DfsReport {
    pub passed: bool,
    /// Condition (1): max_n of the norm of the component of H0 psi_n outside
    /// the span of the basis.
    pub invariance_residual: f64,
    /// Condition (2), one entry per decay channel.
    pub channels: Vec<ChannelDfsResult>,
    /// Condition (3): the extracted eigenvalue g of Gamma.
    pub gamma_eigenvalue: f64,
    /// Condition (3): max_n || Gamma psi_n - g psi_n ||.
    pub gamma_residual: f64,
    /// |g - sum_m lambda_m |c_m|^2|.
    pub gamma_consistency: f64,
    pub gamma: HermitianOperator,
    pub tol: f64,
}

fn sub_scaled(v: &[C64], w: &[C64], scale: C64) -> f64 {
    v.iter()
        .zip(w)
        .map(|(a, b)| (a - scale * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Check the three DFS conditions for the span of `basis` against `model`.
///
/// Condition (1) tests invariance of the span rather than eigenvector-ness:
/// H0 may rotate states within the subspace.
pub fn dfs_check(basis: &[StateVector], model: &LindbladModel, tol: f64) -> Result<DfsReport> {
    if basis.is_empty() {
        return Err(Error::InvalidConfig("DFS basis must be non-empty".into()));
    }
    let dim = model.dim();
    for b in basis {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
    }
    let mut ortho_defect: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (j, w) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            ortho_defect = ortho_defect.max((u.inner(w) - want).norm());
        }
    }
    if ortho_defect > tol {
        return Err(Error::NonOrthonormalBasis {
            defect: ortho_defect,
            tol,
        });
    }

    // Condition (1): H0 maps the span into itself.
    let mut invariance_residual: f64 = 0.0;
    for b in basis {
        let image = model.h0().matrix().mul_vec(b.amplitudes());
        let mut outside = image.clone();
        for p in basis {
            let coeff: C64 = p
                .amplitudes()
                .iter()
                .zip(&image)
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (o, a) in outside.iter_mut().zip(p.amplitudes()) {
                *o -= coeff * a;
            }
        }
        let norm = outside.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        invariance_residual = invariance_residual.max(norm);
    }

    // Condition (2): every jump operator acts as one scalar on the basis.
    let first = &basis[0];
    let mut channels = Vec::with_capacity(model.channels().len());
    for ch in model.channels() {
        let image = ch.jump.mul_vec(first.amplitudes());
        let c: C64 = first
            .amplitudes()
            .iter()
            .zip(&image)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let mut residual: f64 = 0.0;
        for b in basis {
            let image = ch.jump.mul_vec(b.amplitudes());
            residual = residual.max(sub_scaled(&image, b.amplitudes(), c));
        }
        channels.push(ChannelDfsResult {
            eigenvalue: c,
            residual,
        });
    }

    // Condition (3): Gamma acts as g = sum lambda |c|^2.
    let gamma = gamma_operator(model);
    let gamma_image = gamma.matrix().mul_vec(first.amplitudes());
    let g: C64 = first
        .amplitudes()
        .iter()
        .zip(&gamma_image)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let g = g.re;
    let mut gamma_residual: f64 = 0.0;
    for b in basis {
        let image = gamma.matrix().mul_vec(b.amplitudes());
        gamma_residual = gamma_residual.max(sub_scaled(&image, b.amplitudes(), g.into()));
    }
    let g_from_channels: f64 = model
        .channels()
        .iter()
        .zip(&channels)
        .map(|(ch, r)| ch.rate * r.eigenvalue.norm_sqr())
        .sum();
    let gamma_consistency = (g - g_from_channels).abs();

    let passed = invariance_residual < tol
        && channels.iter().all(|c| c.residual < tol)
        && gamma_residual < tol
        && gamma_consistency < tol;

    Ok(DfsReport {
        passed,
        invariance_residual,
        channels,
        gamma_eigenvalue: g,
        gamma_residual,
        gamma_consistency,
        gamma,
        tol,
    })
}
