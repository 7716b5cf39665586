// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Centralized numerical tolerances.
//!
//! Construction-time tolerances sit near machine precision; run-time
//! tolerances allow for integration error. Keeping them in one place avoids
//! ad-hoc magic numbers scattered through the crate.

/// Entrywise Hermiticity defect allowed when constructing a
/// [`HermitianOperator`](crate::HermitianOperator).
pub const HERMITIAN_DEFECT: f64 = 1e-12;

/// Euclidean-norm deviation from 1 allowed for a [`StateVector`](crate::StateVector).
pub const STATE_NORM: f64 = 1e-12;

/// Hermiticity defect allowed for a density matrix (looser than operator
/// construction: states pass through the integrator).
pub const DENSITY_HERMITIAN: f64 = 1e-10;

/// |Tr rho - 1| allowed for a density matrix.
pub const DENSITY_TRACE: f64 = 1e-9;

/// Most negative eigenvalue a density matrix may carry.
pub const DENSITY_MIN_EIG: f64 = -1e-8;

/// Imaginary residue allowed on traces that are real by construction.
pub const IMAG_RESIDUE: f64 = 1e-10;

/// Default residual tolerance for the three DFS conditions.
pub const DFS_DEFAULT: f64 = 1e-9;

/// Frobenius norm allowed for [A, H0] when building a control configuration.
pub const OBSERVABLE_COMMUTES: f64 = 1e-9;

/// Default denominator guard for the cancellation field.
pub const EPS_DEN: f64 = 1e-10;

/// Default numerator guard for the cancellation field.
pub const EPS_NUM: f64 = 1e-10;

/// Default saturation bound for the cancellation field.
pub const F_MAX: f64 = 1e3;

/// Degeneracy tolerance when classifying critical points by eigenvalue order.
pub const DEGENERACY: f64 = 1e-10;

/// Most negative eigenvalue tolerated mid-integration (looser than the
/// density-matrix invariant; recording re-checks at the strict bound).
pub const STEP_MIN_EIG: f64 = -1e-6;

/// Pre-renormalization trace drift allowed per unit time.
pub const TRACE_DRIFT_RATE: f64 = 1e-7;

/// Off-diagonal mass at which the Jacobi eigensolver stops, relative to the
/// Frobenius norm of the input.
pub const JACOBI_OFF: f64 = 1e-14;
