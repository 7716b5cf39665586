// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Test-only oracles and random generators.
//!
//! The superoperator path here is deliberately independent of the crate's
//! integrator: the generator action is rebuilt from raw matrix products,
//! vectorized column by column, and exponentiated by scaling-and-squaring,
//! so agreement with the RK4 path checks the whole propagation chain.

use dfs_control::{ComplexMatrix, DensityMatrix, HermitianOperator, LindbladModel, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

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
    HermitianOperator::new(random_matrix(rng, dim).hermitian_part()).unwrap()
}

/// Random full-rank state G G^dagger / Tr.
pub fn random_density(rng: &mut StdRng, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim);
    let gg = &g * &g.dagger();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scaled(C64::new(1.0 / tr, 0.0))).unwrap()
}

/// Fixed-field generator applied to an arbitrary matrix:
/// G(X) = -i(H X - X H) + sum_m lambda_m (L X L^+ - (L^+ L X + X L^+ L)/2).
fn generator_action(model: &LindbladModel, h: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    let comm = &(h * x) - &(x * h);
    let mut out = comm.scaled(C64::new(0.0, -1.0));
    for ch in model.channels() {
        let l = ch.jump();
        let ld = l.dagger();
        let ldl = &ld * l;
        let sandwich = &(l * x) * &ld;
        let anti = &(&ldl * x) + &(x * &ldl);
        let term = &sandwich - &anti.scaled(C64::new(0.5, 0.0));
        out = &out + &term.scaled(C64::new(ch.rate(), 0.0));
    }
    out
}

/// Row-major vectorization: column a*N+b of the output is G(E_ab) flattened.
pub fn liouvillian_matrix(model: &LindbladModel, fields: &[f64]) -> ComplexMatrix {
    let n = model.dim();
    assert_eq!(fields.len(), model.controls().len());
    let mut h = model.h0().matrix().clone();
    for (f, hn) in fields.iter().zip(model.controls()) {
        h = &h + &hn.matrix().scaled(C64::new(*f, 0.0));
    }
    let mut sup = ComplexMatrix::zeros(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut unit = ComplexMatrix::zeros(n);
            unit.set(a, b, C64::ONE);
            let image = generator_action(model, &h, &unit);
            for i in 0..n {
                for j in 0..n {
                    sup.set(i * n + j, a * n + b, image.entry(i, j));
                }
            }
        }
    }
    sup
}

/// exp(M t) by scaling-and-squaring with a Taylor series on the scaled block.
pub fn expm(m: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = m.dim();
    let a = m.scaled(C64::new(t, 0.0));
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = a.scaled(C64::new(0.5f64.powi(squarings), 0.0));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &b).scaled(C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.frobenius_norm() <= 1e-20 * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Exact fixed-field evolution of `rho0` to time `t` through the vectorized
/// superoperator exponential.
pub fn evolve_exact(
    model: &LindbladModel,
    fields: &[f64],
    rho0: &ComplexMatrix,
    t: f64,
) -> ComplexMatrix {
    let n = rho0.dim();
    let sup = liouvillian_matrix(model, fields);
    let u = expm(&sup, t);
    let mut vec = vec![C64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            vec[i * n + j] = rho0.entry(i, j);
        }
    }
    let mut out = vec![C64::ZERO; n * n];
    for (r, o) in out.iter_mut().enumerate() {
        let mut acc = C64::ZERO;
        for (c, v) in vec.iter().enumerate() {
            acc += u.entry(r, c) * v;
        }
        *o = acc;
    }
    ComplexMatrix::from_fn(n, |i, j| out[i * n + j])
}
