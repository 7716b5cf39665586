// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shared helpers for unit tests.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::lindblad::DensityMatrix;
use crate::operators::{ComplexMatrix, HermitianOperator, StateVector, C64};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut StdRng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| random_complex(rng))
}

pub fn random_hermitian(rng: &mut StdRng, dim: usize) -> HermitianOperator {
    let g = random_matrix(rng, dim);
    HermitianOperator::new(g.hermitian_part()).expect("hermitian by construction")
}

pub fn random_state(rng: &mut StdRng, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| random_complex(rng)).collect())
        .expect("nonzero with probability 1")
}

/// Random full-rank density matrix G G^dagger / Tr.
pub fn random_density(rng: &mut StdRng, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim);
    let gg = &g * &g.dagger();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scaled(C64::new(1.0 / tr, 0.0))).expect("valid by construction")
}

pub fn assert_mat_close(got: &ComplexMatrix, want: &ComplexMatrix, tol: f64) {
    let diff = (got - want).frobenius_norm();
    assert!(
        diff <= tol,
        "matrices differ: Frobenius distance {diff:.3e} > {tol:.1e}"
    );
}
