// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("entry buffer of length {len} does not match dimension {dim}")]
    BadShape { len: usize, dim: usize },

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.1e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("state vector norm {norm} deviates from 1 beyond {tol:.1e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("invalid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("basis is not orthonormal: defect {defect:.3e} exceeds {tol:.1e}")]
    NonOrthonormalBasis { defect: f64, tol: f64 },

    #[error("imaginary residue {residue:.3e} exceeds {tol:.1e} in {context}")]
    ImaginaryResidue {
        residue: f64,
        tol: f64,
        context: &'static str,
    },

    #[error("decay rate must be positive, got {rate}")]
    NonPositiveRate { rate: f64 },

    #[error("eigenvector index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("positivity violated at t = {t}: min eigenvalue {min_eigenvalue:.3e}; reduce dt")]
    PositivityViolation { t: f64, min_eigenvalue: f64 },

    #[error("positivity violated within a step: min eigenvalue {min_eigenvalue:.3e}; reduce dt")]
    StepPositivity { min_eigenvalue: f64 },

    #[error("trace invariant violated at t = {t}: |Tr rho - 1| = {defect:.3e}")]
    TraceViolation { t: f64, defect: f64 },

    #[error("trace diverged within a step: |Tr rho - 1| = {defect:.3e}; reduce dt")]
    StepTrace { defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
