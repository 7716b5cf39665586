// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra on operators and state vectors.
//!
//! Everything here is small (the built-in scenario is 4x4, the vectorized
//! superoperator 16x16), so matrices are plain row-major `Vec<C64>` buffers
//! and the eigensolver is a cyclic complex Jacobi iteration. All values are
//! immutable after construction and safe to share across threads.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

/// Square complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadShape {
                len: data.len(),
                dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// |u><v| outer product.
    pub fn outer(u: &StateVector, v: &StateVector) -> Self {
        let dim = u.dim();
        Self::from_fn(dim, |i, j| u.amplitudes()[i] * v.amplitudes()[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.entry(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise modulus of M - M^dagger.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                defect = defect.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        defect
    }

    /// (M + M^dagger) / 2.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            0.5 * (self.entry(i, j) + self.entry(j, i).conj())
        })
    }

    /// Matrix-vector product on a raw amplitude slice.
    pub(crate) fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::ZERO; n];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * n..(i + 1) * n];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Tr(self * other) without forming the product.
    pub(crate) fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim;
        let mut acc = C64::ZERO;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            for (k, a) in row.iter().enumerate() {
                acc += a * other.data[k * n + i];
            }
        }
        acc
    }

    fn mul_matrix(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = vec![C64::ZERO; n * n];
        for i in 0..n {
            let arow = &self.data[i * n..(i + 1) * n];
            let orow = &mut out[i * n..(i + 1) * n];
            for (k, aik) in arow.iter().enumerate() {
                let brow = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += aik * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mul_matrix(rhs)
    }
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized {
                norm,
                tol: tol::STATE_NORM,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm, tol: 0.0 });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis ket |k>.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![C64::ZERO; dim];
        amplitudes[k] = C64::ONE;
        Self { amplitudes }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self><self|.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(self, self)
    }
}

/// Hermitian matrix, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > tol::HERMITIAN_DEFECT {
            return Err(Error::NotHermitian {
                defect,
                tol: tol::HERMITIAN_DEFECT,
            });
        }
        Ok(Self { matrix })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(ComplexMatrix::from_fn(dim, f))
    }

    /// Real diagonal matrix in the computational basis.
    pub fn diagonal(entries: &[f64]) -> Self {
        let dim = entries.len();
        Self {
            matrix: ComplexMatrix::from_fn(dim, |i, j| {
                if i == j {
                    C64::new(entries[i], 0.0)
                } else {
                    C64::ZERO
                }
            }),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl SpectralDecomposition {
    /// Sum of eigenvalue-weighted projectors; equals the input within
    /// rounding and is used as the solver's self-check in tests.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.eigenvectors[0].dim();
        let mut out = ComplexMatrix::zeros(dim);
        for (value, vec) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out = &out + &vec.projector().scaled(C64::new(*value, 0.0));
        }
        out
    }
}

/// XY - YX.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(&(x * y) - &(y * x))
}

/// XY + YX.
pub(crate) fn anticommutator(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    &(x * y) + &(y * x)
}

/// sqrt(Tr(X^dagger X)).
pub fn frobenius_norm(x: &ComplexMatrix) -> f64 {
    x.frobenius_norm()
}

/// Re Tr(rho A) for Hermitian A and a state matrix rho.
///
/// The trace is real for valid inputs; an imaginary residue above
/// [`tol::IMAG_RESIDUE`] signals corrupted inputs and is reported as an error.
pub fn expectation(a: &HermitianOperator, rho: &ComplexMatrix) -> Result<f64> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: rho.dim(),
        });
    }
    let tr = rho.trace_product(a.matrix());
    if tr.im.abs() > tol::IMAG_RESIDUE {
        return Err(Error::ImaginaryResidue {
            residue: tr.im.abs(),
            tol: tol::IMAG_RESIDUE,
            context: "Tr(rho A)",
        });
    }
    Ok(tr.re)
}

/// Eigenvalues and orthonormal eigenvectors, eigenvalues ascending.
///
/// Within a degenerate cluster the eigenvector basis is arbitrary; consumers
/// must not rely on any particular choice there.
pub fn spectral_decomposition(h: &HermitianOperator) -> SpectralDecomposition {
    let (values, vectors) = jacobi(h.matrix(), true);
    let vectors = vectors.expect("vectors requested");
    let eigenvectors = vectors
        .into_iter()
        .map(|v| StateVector::new(v).expect("Jacobi columns are unit vectors"))
        .collect();
    SpectralDecomposition {
        eigenvalues: values,
        eigenvectors,
    }
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    jacobi(m, false).0
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation zeroes one off-diagonal pair of the working copy; the
/// accumulated off-diagonal mass decreases quadratically, and a handful of
/// sweeps reaches machine precision at the dimensions used here.
fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<Vec<Vec<C64>>>) {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = a.frobenius_norm().max(1.0);
    let stop = tol::JACOBI_OFF * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a.entry(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.entry(p, q);
                let r = apq.norm();
                if r <= tol::JACOBI_OFF * scale / (n * n) as f64 {
                    continue;
                }
                let phase = apq / r;
                let alpha = a.entry(p, p).re;
                let beta = a.entry(q, q).re;
                let theta = (beta - alpha) / (2.0 * r);
                // Smaller-magnitude root of t^2 - 2*theta*t - 1 = 0.
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- A J, then A <- J^dagger A.
                for k in 0..n {
                    let akp = a.entry(k, p);
                    let akq = a.entry(k, q);
                    a.set(k, p, c * akp + s * phase.conj() * akq);
                    a.set(k, q, -s * phase * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.entry(p, k);
                    let aqk = a.entry(q, k);
                    a.set(p, k, c * apk + s * phase * aqk);
                    a.set(q, k, -s * phase.conj() * apk + c * aqk);
                }
                // Analytic corner values kill accumulated asymmetry.
                a.set(p, p, C64::new(alpha + t * r, 0.0));
                a.set(q, q, C64::new(beta - t * r, 0.0));
                a.set(p, q, C64::ZERO);
                a.set(q, p, C64::ZERO);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v.entry(k, p);
                        let vkq = v.entry(k, q);
                        v.set(k, p, c * vkp + s * phase.conj() * vkq);
                        v.set(k, q, -s * phase * vkp + c * vkq);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.entry(i, i)
            .re
            .partial_cmp(&a.entry(j, j).re)
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| a.entry(i, i).re).collect();
    let vectors = v.map(|v| {
        order
            .iter()
            .map(|&col| (0..n).map(|row| v.entry(row, col)).collect())
            .collect()
    });
    (values, vectors)
}
