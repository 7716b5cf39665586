// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lyapunov state-feedback control of Markovian open quantum systems.
//!
//! The library simulates an N-level system governed by a Lindblad master
//! equation, synthesizes feedback fields from a Lyapunov function
//! `V(rho) = Tr(rho A)`, and integrates the resulting closed-loop dynamics.
//! The feedback drives the state into a decoherence-free subspace (DFS) and
//! onto a chosen eigenstate of the free Hamiltonian inside it.
//!
//! Modules:
//! - [`operators`]: dense complex linear algebra (commutators, traces,
//!   Hermitian eigendecomposition).
//! - [`lindblad`]: the controlled open-system model, its dissipator, and the
//!   three-condition DFS certificate.
//! - [`control`]: Lyapunov function, feedback-field synthesis, critical-point
//!   classification, LaSalle diagnostics.
//! - [`propagate`]: fixed-step RK4 integration of the closed loop, trajectory
//!   recording, fidelities.
//! - [`scenario`]: the built-in four-level example (dark states, control
//!   Hamiltonians, figure presets).

pub mod control;
pub mod error;
pub mod lindblad;
pub mod operators;
pub mod propagate;
pub mod scenario;
#[cfg(test)]
pub(crate) mod testutil;
pub mod tol;

pub use control::{
    classify_critical_point, control_fields, invariant_set_distance, lyapunov_derivative,
    lyapunov_value, ControlConfig, CriticalPointClass, FieldSample,
};
pub use error::Error;
pub use lindblad::{
    dfs_check, dissipator, gamma_operator, DecayChannel, DensityMatrix, DfsReport, LindbladModel,
};
pub use operators::{
    commutator, expectation, frobenius_norm, hermitian_eigenvalues, spectral_decomposition,
    ComplexMatrix, HermitianOperator, SpectralDecomposition, StateVector, C64,
};
pub use propagate::{
    fidelity, propagate, propagate_fixed_fields, rhs, step, subspace_fidelity, ClosedLoop,
    IntegratorSettings, Probes, Trajectory, TrajectorySample,
};
pub use scenario::{
    build_model, dark_states, initial_state, observable_for_target, preset, target_state, Figure,
    FigurePreset, InitialStateParams, ScenarioParams, Target,
};
