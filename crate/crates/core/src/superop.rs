// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Vectorization conventions shared by the generator, the drift matrix and
//! the diffusion matrix.
//!
//! * density matrices are stacked column-major: `vec(ρ)[i + n j] = ρ[i, j]`;
//! * operator expectations are indexed `s[α + n β] = <σ_{αβ}> = ρ[β, α]`,
//!   where `σ_{αβ} = |α><β|`.
//!
//! With these choices `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;

/// Position of `ρ[row, col]` in `vec(ρ)`.
pub const fn vec_index(row: usize, col: usize, n: usize) -> usize {
    row + n * col
}

/// Position of `<σ_{αβ}>` in the operator-expectation vector.
pub const fn op_index(alpha: usize, beta: usize, n: usize) -> usize {
    alpha + n * beta
}

pub fn vectorize(m: &DMatrix<C64>) -> DVector<C64> {
    // nalgebra storage is already column-major.
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &DVector<C64>, n: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// Superoperator for `X -> A X`.
pub fn left(a: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::<C64>::identity(a.nrows(), a.nrows()).kronecker(a)
}

/// Superoperator for `X -> X B`.
pub fn right(b: &DMatrix<C64>) -> DMatrix<C64> {
    b.transpose().kronecker(&DMatrix::<C64>::identity(b.nrows(), b.nrows()))
}

/// Superoperator for `X -> L X L†`.
pub fn sandwich(l: &DMatrix<C64>) -> DMatrix<C64> {
    l.map(|z| z.conj()).kronecker(l)
}

/// Coefficients of an operator `X = Σ X[α,β] σ_{αβ}` in the operator basis,
/// so that `<X> = cᵀ s`.
pub fn operator_coefficients(x: &DMatrix<C64>) -> DVector<C64> {
    vectorize(x)
}

/// Expectation-vector `s` of a density matrix: `s = vec(ρᵀ)`.
pub fn expectation_vector(rho: &DMatrix<C64>) -> DVector<C64> {
    vectorize(&rho.transpose())
}

/// Re-index a Schrödinger-picture superoperator into the operator-expectation
/// basis. For the generator `G` this yields the drift `M` with
/// `d s/dt = M s`.
pub fn to_operator_basis(g: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let n2 = n * n;
    DMatrix::from_fn(n2, n2, |mu, nu| {
        let (a, b) = (mu % n, mu / n);
        let (c, d) = (nu % n, nu / n);
        g[(vec_index(b, a, n), vec_index(d, c, n))]
    })
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(C64::from)
}

pub fn dagger(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.adjoint()
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
