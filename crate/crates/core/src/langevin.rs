// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Langevin diffusion coefficients from the generalized Einstein relation.
//!
//! For basis operators `σ_μ = σ_{ab}`, `σ_ν = σ_{cd}`,
//!
//! ```text
//! 2 D_{μν} = <d/dt (σ_μ σ_ν)> - <(M σ)_μ σ_ν> - <σ_μ (M σ)_ν>
//! ```
//!
//! with `σ_{ab} σ_{cd} = δ_{bc} σ_{ad}`.

use nalgebra::{DMatrix, DVector};

use crate::atomic::{Liouvillian, SteadyState};
use crate::error::{invalid, Error, Result};
use crate::superop::{op_index, C64};

/// Largest tolerated `max |G ρ|` for a state handed to [`diffusion_matrix`].
pub const STATIONARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DiffusionMatrix {
    d: DMatrix<C64>,
    covariance: DMatrix<C64>,
    mean: DVector<C64>,
}

impl DiffusionMatrix {
    /// `D_{μν}` in the operator-expectation basis.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.d
    }

    /// Equal-time covariance `<σ_μ σ_ν> - <σ_μ><σ_ν>`.
    pub fn covariance(&self) -> &DMatrix<C64> {
        &self.covariance
    }

    /// Steady-state expectation vector the coefficients were evaluated at.
    pub fn mean(&self) -> &DVector<C64> {
        &self.mean
    }

    pub fn dim(&self) -> usize {
        self.d.nrows()
    }

    /// Largest violation of `D_{αβ,γδ} = conj(D_{δγ,βα})`.
    pub fn pairing_defect(&self) -> f64 {
        let n2 = self.d.nrows();
        let n = (n2 as f64).sqrt().round() as usize;
        let mut worst = 0.0f64;
        for (a, b, c, d) in quadruples(n) {
            let lhs = self.d[(op_index(a, b, n), op_index(c, d, n))];
            let rhs = self.d[(op_index(d, c, n), op_index(b, a, n))].conj();
            worst = worst.max((lhs - rhs).norm());
        }
        worst
    }
}

fn quadruples(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |a| {
        (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d))))
    })
}

/// Matrix of equal-time products `<σ_μ σ_ν> = δ_{bc} v[(a, d)]` for a vector `v`.
fn product_matrix(v: &DVector<C64>, n: usize) -> DMatrix<C64> {
    let n2 = n * n;
    let mut out = DMatrix::<C64>::zeros(n2, n2);
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                out[(op_index(a, b, n), op_index(b, d, n))] = v[op_index(a, d, n)];
            }
        }
    }
    out
}

/// Diffusion coefficients at a steady state of `liouvillian`.
pub fn diffusion_matrix(liouvillian: &Liouvillian, steady: &SteadyState) -> Result<DiffusionMatrix> {
    let n = liouvillian.dim();
    if steady.dim() != n {
        return invalid("steady state dimension does not match the Liouvillian");
    }
    let residual = steady.residual(liouvillian);
    if residual > STATIONARITY_TOLERANCE {
        return Err(Error::Precondition(format!(
            "state is not stationary: |G rho| = {residual:e}"
        )));
    }
    let m = liouvillian.drift();
    let s = steady.expectation_vector();
    let pairs = product_matrix(&s, n);
    let drift_of_products = product_matrix(&(m * &s), n);
    let two_d = drift_of_products - m * &pairs - &pairs * m.transpose();
    let covariance = &pairs - &s * s.transpose();
    Ok(DiffusionMatrix { d: two_d * C64::from(0.5), covariance, mean: s })
}
