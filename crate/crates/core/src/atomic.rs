// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Optical Bloch generator for a driven degenerate transition.
//!
//! The rotating frame is taken at the laser frequency and the rotating-wave
//! approximation is applied. In units of ħ,
//!
//! ```text
//! H = -Δ P_e - (Ω₁/2) (d + d†)
//! dρ/dt = -i[H, ρ] + Γ Σ_q ( d_q ρ d_q† - ½ {d_q† d_q, ρ} )
//! ```
//!
//! where `d` is the lowering component selected by the polarization basis and
//! `P_e` projects on the excited manifold. Zeeman sublevels are degenerate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::angular::{dipole_component, LevelScheme};
use crate::error::{invalid, Error, Result};
use crate::field::{Polarization, PolarizationBasis, PolarizationMode};
use crate::superop::{self, max_abs, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct DriveConfig {
    /// Rabi frequency of the driven component, units of Γ.
    pub rabi: f64,
    /// Detuning `ω_L - ω₀`, units of Γ.
    pub detuning: f64,
    pub basis: PolarizationBasis,
}

impl DriveConfig {
    pub fn new(mode: PolarizationMode, rabi: f64, detuning: f64) -> Result<Self> {
        if !(rabi.is_finite() && rabi >= 0.0) {
            return invalid(format!("Rabi frequency must be finite and non-negative, got {rabi}"));
        }
        if !detuning.is_finite() {
            return invalid(format!("detuning must be finite, got {detuning}"));
        }
        Ok(DriveConfig { rabi, detuning, basis: PolarizationBasis::new(mode) })
    }

    pub fn mode(&self) -> PolarizationMode {
        self.basis.mode
    }
}

/// Generator of the density-matrix evolution together with the drift matrix
/// of the operator expectations.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    scheme: LevelScheme,
    drive: DriveConfig,
    hamiltonian: DMatrix<C64>,
    generator: DMatrix<C64>,
    drift: DMatrix<C64>,
    lowering: [DMatrix<C64>; 2],
    decay: bool,
}

impl Liouvillian {
    pub fn new(scheme: &LevelScheme, drive: &DriveConfig) -> Result<Self> {
        Self::assemble(scheme, drive, true)
    }

    /// Hamiltonian part only, with every spontaneous-emission channel removed.
    pub fn coherent_only(scheme: &LevelScheme, drive: &DriveConfig) -> Result<Self> {
        Self::assemble(scheme, drive, false)
    }

    fn assemble(scheme: &LevelScheme, drive: &DriveConfig, decay: bool) -> Result<Self> {
        let n = scheme.dim();
        let ng = scheme.ground_count();
        let d: Vec<DMatrix<C64>> = (-1..=1)
            .map(|q| dipole_component(scheme, q).map(|m| superop::to_complex(&m)))
            .collect::<Result<_>>()?;
        let component = |q: i32| &d[(q + 1) as usize];

        let drive_op = component(drive.basis.drive_component());
        if max_abs(drive_op) == 0.0 {
            return invalid(format!(
                "{} drive has no coupling on transition {} -> {}",
                drive.mode().name(),
                scheme.fg(),
                scheme.fe()
            ));
        }

        let mut hamiltonian = DMatrix::<C64>::zeros(n, n);
        for e in ng..n {
            hamiltonian[(e, e)] = C64::from(-drive.detuning);
        }
        hamiltonian -= (drive_op + drive_op.adjoint()) * C64::from(0.5 * drive.rabi);

        let i = C64::new(0.0, 1.0);
        let mut generator = (superop::left(&hamiltonian) - superop::right(&hamiltonian)) * (-i);
        if decay {
            let gamma = C64::from(scheme.gamma());
            for l in &d {
                let ldl = l.adjoint() * l;
                generator += (superop::sandwich(l)
                    - superop::left(&ldl) * C64::from(0.5)
                    - superop::right(&ldl) * C64::from(0.5))
                    * gamma;
            }
        }
        let drift = superop::to_operator_basis(&generator, n);

        let radiating = |pol: Polarization| {
            drive.basis.components(pol).into_iter().fold(DMatrix::<C64>::zeros(n, n), |acc, (q, w)| {
                acc + component(q) * C64::from(w)
            })
        };
        let lowering = [radiating(Polarization::Driven), radiating(Polarization::Orthogonal)];

        Ok(Liouvillian {
            scheme: *scheme,
            drive: drive.clone(),
            hamiltonian,
            generator,
            drift,
            lowering,
            decay,
        })
    }

    pub fn scheme(&self) -> &LevelScheme {
        &self.scheme
    }

    pub fn drive(&self) -> &DriveConfig {
        &self.drive
    }

    pub fn dim(&self) -> usize {
        self.scheme.dim()
    }

    pub fn has_decay(&self) -> bool {
        self.decay
    }

    pub fn hamiltonian(&self) -> &DMatrix<C64> {
        &self.hamiltonian
    }

    /// `G` acting on `vec(ρ)`.
    pub fn generator(&self) -> &DMatrix<C64> {
        &self.generator
    }

    /// `M` with `d<σ>/dt = M <σ>`.
    pub fn drift(&self) -> &DMatrix<C64> {
        &self.drift
    }

    /// Atomic lowering operator radiating into the given field component.
    pub fn lowering(&self, polarization: Polarization) -> &DMatrix<C64> {
        match polarization {
            Polarization::Driven => &self.lowering[0],
            Polarization::Orthogonal => &self.lowering[1],
        }
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.dim();
        superop::unvectorize(&(&self.generator * superop::vectorize(rho)), n)
    }
}

/// Build the generator for a scheme and drive.
pub fn build_generator(scheme: &LevelScheme, drive: &DriveConfig) -> Result<Liouvillian> {
    Liouvillian::new(scheme, drive)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    rho: DMatrix<C64>,
}

impl SteadyState {
    /// Wrap a density matrix known to be stationary for some generator.
    pub fn from_density_matrix(rho: DMatrix<C64>) -> Result<Self> {
        check_density_matrix(&rho, 1e-10)?;
        Ok(SteadyState { rho })
    }

    pub fn rho(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn population(&self, index: usize) -> f64 {
        self.rho[(index, index)].re
    }

    /// `Tr(X ρ)`.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        (op * &self.rho).trace()
    }

    /// Operator-expectation vector `s[α + nβ] = <σ_{αβ}>`.
    pub fn expectation_vector(&self) -> DVector<C64> {
        superop::expectation_vector(&self.rho)
    }

    /// `max |G ρ|`.
    pub fn residual(&self, liouvillian: &Liouvillian) -> f64 {
        max_abs(&liouvillian.apply(&self.rho))
    }
}

fn check_density_matrix(rho: &DMatrix<C64>, tol: f64) -> Result<()> {
    if !rho.is_square() {
        return invalid("density matrix must be square");
    }
    if max_abs(&(rho - rho.adjoint())) > tol {
        return invalid("density matrix is not Hermitian");
    }
    if (rho.trace() - C64::from(1.0)).norm() > tol {
        return invalid(format!("density matrix trace is {}, expected 1", rho.trace()));
    }
    Ok(())
}

/// Relative singular-value threshold used to count null directions of `G`.
const NULL_SPACE_TOLERANCE: f64 = 1e-11;

const REFINEMENT_STEPS: usize = 2;

/// Unique trace-one stationary state of the generator.
///
/// The trace condition is appended to `G vec(ρ) = 0` as an extra row and the
/// stacked system is solved in the least-squares sense.
pub fn steady_state(liouvillian: &Liouvillian) -> Result<SteadyState> {
    let n = liouvillian.dim();
    let n2 = n * n;
    let g = liouvillian.generator();

    let singular = g
        .clone()
        .try_svd(false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("SVD of the generator did not converge".into()))?
        .singular_values;
    let scale = singular.max().max(1.0);
    let dimension = singular.iter().filter(|s| **s <= NULL_SPACE_TOLERANCE * scale).count();
    if dimension != 1 {
        return Err(Error::DegenerateSteadyState { dimension });
    }

    let mut stacked = DMatrix::<C64>::zeros(n2 + 1, n2);
    stacked.view_mut((0, 0), (n2, n2)).copy_from(g);
    for i in 0..n {
        stacked[(n2, superop::vec_index(i, i, n))] = C64::from(1.0);
    }
    let mut rhs = DVector::<C64>::zeros(n2 + 1);
    rhs[n2] = C64::from(1.0);

    let svd = stacked
        .clone()
        .try_svd(true, true, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("SVD of the stacked steady-state system did not converge".into()))?;
    let solve = |b: &DVector<C64>| svd.solve(b, 1e-14 * scale).map_err(|e| Error::Numerical(e.to_string()));
    let mut x = solve(&rhs)?;
    // Weak optical pumping leaves small singular values; refinement recovers
    // the digits lost to them.
    for _ in 0..REFINEMENT_STEPS {
        let r = &rhs - &stacked * &x;
        x += solve(&r)?;
    }

    let raw = superop::unvectorize(&x, n);
    let mut rho = (&raw + raw.adjoint()) * C64::from(0.5);
    let tr = rho.trace();
    rho /= tr;
    let steady = SteadyState { rho };
    let residual = steady.residual(liouvillian);
    if residual > 1e-9 * scale {
        return Err(Error::Numerical(format!("steady-state residual {residual:e} too large")));
    }
    Ok(steady)
}

/// `exp(G t)` applied to `ρ₀`.
pub fn evolve(liouvillian: &Liouvillian, rho0: &DMatrix<C64>, t: f64) -> Result<DMatrix<C64>> {
    if !(t.is_finite() && t >= 0.0) {
        return invalid(format!("evolution time must be finite and non-negative, got {t}"));
    }
    if rho0.nrows() != liouvillian.dim() {
        return invalid("initial state dimension does not match the level scheme");
    }
    check_density_matrix(rho0, 1e-10)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let propagator = (liouvillian.generator() * C64::from(t)).exp();
    Ok(superop::unvectorize(&(propagator * superop::vectorize(rho0)), liouvillian.dim()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(rho: &DMatrix<C64>) -> Vec<f64> {
    let herm = (rho + rho.adjoint()) * C64::from(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
