// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Fourier-domain atomic fluctuations and single-pass propagation through a
//! thin medium.
//!
//! The field radiated into polarization `λ` is driven by the atomic operator
//! `i P_λ`, where `P_λ` is the lowering combination selected by the
//! polarization basis. The output spectral matrix is the input one plus an
//! atomic term built from normally and time-ordered dipole correlations,
//! scaled by `g = b₀ Γ / 4`. The carrier is multiplied by `exp(i χ)` with
//! `χ = (b₀ Γ / 2) <P₁> / Ω₁`, which gives an intensity transmission of
//! `exp(-b₀)` for a weak resonant probe on a closed two-level transition.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::angular::LevelScheme;
use crate::atomic::{build_generator, steady_state, DriveConfig, Liouvillian, SteadyState};
use crate::error::{invalid, Error, Result};
use crate::field::{coherent_input_matrix, InputNoise, Polarization, SpectralMatrix, SpectralTrace};
use crate::langevin::{diffusion_matrix, DiffusionMatrix};
use crate::superop::{operator_coefficients, vec_index, C64};

/// Optical densities above this leave the single-scattering regime.
pub const VALIDITY_LIMIT_B0: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Reduced on-resonance optical density.
    pub b0: f64,
}

impl MediumParams {
    pub fn new(b0: f64) -> Result<Self> {
        if !(b0.is_finite() && b0 >= 0.0) {
            return invalid(format!("optical density b0 must be finite and non-negative, got {b0}"));
        }
        Ok(MediumParams { b0 })
    }

    /// Coupling of the atomic dipole correlations into the shot-noise
    /// normalized output spectrum.
    pub fn noise_coupling(&self, gamma: f64) -> f64 {
        0.25 * self.b0 * gamma
    }

    /// Prefactor of `<P> / Ω₁` in the carrier exponent.
    pub fn carrier_coupling(&self, gamma: f64) -> f64 {
        0.5 * self.b0 * gamma
    }

    pub fn within_validity(&self) -> bool {
        self.b0 <= VALIDITY_LIMIT_B0
    }
}

/// Drift with the stationary mode moved to rate `-1`: `M' = M - s vec(I)ᵀ`.
///
/// On equal-time fluctuations, which have no trace component, `M'` acts as `M`,
/// and `-iΩ - M'` stays invertible at `Ω = 0`.
pub fn deflated_drift(liouvillian: &Liouvillian, steady: &SteadyState) -> DMatrix<C64> {
    deflate(liouvillian, &steady.expectation_vector())
}

fn deflate(liouvillian: &Liouvillian, mean: &DVector<C64>) -> DMatrix<C64> {
    let n = liouvillian.dim();
    let mut ones = DVector::<C64>::zeros(n * n);
    for i in 0..n {
        ones[vec_index(i, i, n)] = C64::from(1.0);
    }
    liouvillian.drift() - mean * ones.transpose()
}

fn shifted(drift: &DMatrix<C64>, omega: f64) -> DMatrix<C64> {
    let n2 = drift.nrows();
    DMatrix::<C64>::identity(n2, n2) * C64::new(0.0, -omega) - drift
}

fn invert(m: DMatrix<C64>, omega: f64) -> Result<DMatrix<C64>> {
    m.try_inverse()
        .ok_or_else(|| Error::Numerical(format!("resolvent is singular at omega = {omega}")))
}

/// Resolvent `R(Ω) = (-iΩ - M')⁻¹` and fluctuation kernel
/// `C(Ω) = R(Ω) 2D R(-Ω)ᵀ`.
///
/// `C_{μν}(Ω)` is the Fourier transform of `<δσ_μ(τ) δσ_ν(0)>` with kernel
/// `e^{iΩτ}`. The deflated drift of [`deflated_drift`] is used.
pub fn atomic_response(
    liouvillian: &Liouvillian,
    diffusion: &DiffusionMatrix,
    omega: f64,
) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    if !omega.is_finite() {
        return invalid("noise frequency must be finite");
    }
    if diffusion.dim() != liouvillian.dim().pow(2) {
        return invalid("diffusion matrix dimension does not match the Liouvillian");
    }
    let drift = deflate(liouvillian, diffusion.mean());
    let r_plus = invert(shifted(&drift, omega), omega)?;
    let r_minus = invert(shifted(&drift, -omega), omega)?;
    let c = &r_plus * (diffusion.matrix() * C64::from(2.0)) * r_minus.transpose();
    Ok((r_plus, c))
}

/// Dipole-projected fluctuation spectra for fast evaluation on a grid.
///
/// Only the four operators `P₁, P₂, P₁†, P₂†` are ever contracted, so each
/// frequency costs two LU factorizations and eight back-substitutions.
#[derive(Debug, Clone)]
pub struct FluctuationKernel {
    drift_t: DMatrix<C64>,
    coeffs: [DVector<C64>; 4],
    sigma_c: [DVector<C64>; 4],
    c_sigma: [DVector<C64>; 4],
}

const P1: usize = 0;
const P2: usize = 1;
const P1_DAG: usize = 2;
const P2_DAG: usize = 3;

fn lowering_slot(p: Polarization) -> usize {
    match p {
        Polarization::Driven => P1,
        Polarization::Orthogonal => P2,
    }
}

fn raising_slot(p: Polarization) -> usize {
    match p {
        Polarization::Driven => P1_DAG,
        Polarization::Orthogonal => P2_DAG,
    }
}

/// One- and two-sided dipole transforms at a single frequency.
#[derive(Debug, Clone, Copy)]
struct Projections {
    /// `H[x][y] = ∫₀^∞ e^{iΩτ} <δX(τ) δY(0)> dτ` at `+Ω` and `-Ω`.
    one_sided: [[[C64; 4]; 4]; 2],
    /// Full transforms at `+Ω` and `-Ω`.
    full: [[[C64; 4]; 4]; 2],
}

impl FluctuationKernel {
    pub fn new(liouvillian: &Liouvillian, diffusion: &DiffusionMatrix) -> Result<Self> {
        if diffusion.dim() != liouvillian.dim().pow(2) {
            return invalid("diffusion matrix dimension does not match the Liouvillian");
        }
        let drift = deflate(liouvillian, diffusion.mean());
        let ops = [
            liouvillian.lowering(Polarization::Driven).clone(),
            liouvillian.lowering(Polarization::Orthogonal).clone(),
            liouvillian.lowering(Polarization::Driven).adjoint(),
            liouvillian.lowering(Polarization::Orthogonal).adjoint(),
        ];
        let coeffs = ops.map(|x| operator_coefficients(&x));
        let sigma = diffusion.covariance();
        let sigma_c = coeffs.clone().map(|c| sigma * c);
        let c_sigma = coeffs.clone().map(|c| sigma.transpose() * c);
        Ok(FluctuationKernel { drift_t: drift.transpose(), coeffs, sigma_c, c_sigma })
    }

    fn solve_all(&self, omega: f64) -> Result<[DVector<C64>; 4]> {
        let lu = shifted(&self.drift_t, omega).lu();
        let mut out: [DVector<C64>; 4] = Default::default();
        for (slot, c) in out.iter_mut().zip(&self.coeffs) {
            *slot = lu
                .solve(c)
                .ok_or_else(|| Error::Numerical(format!("resolvent is singular at omega = {omega}")))?;
        }
        Ok(out)
    }

    fn projections(&self, omega: f64) -> Result<Projections> {
        let u = [self.solve_all(omega)?, self.solve_all(-omega)?];
        let mut one_sided = [[[C64::from(0.0); 4]; 4]; 2];
        let mut full = [[[C64::from(0.0); 4]; 4]; 2];
        for sign in 0..2 {
            for x in 0..4 {
                for y in 0..4 {
                    let h = u[sign][x].dot(&self.sigma_c[y]);
                    one_sided[sign][x][y] = h;
                    full[sign][x][y] = h + self.c_sigma[x].dot(&u[1 - sign][y]);
                }
            }
        }
        Ok(Projections { one_sided, full })
    }

    /// Full transform of `<δP_λ†(τ) δP_μ(0)>`, the unscaled inelastic spectrum.
    pub fn dipole_spectrum(&self, lambda: Polarization, mu: Polarization, omega: f64) -> Result<C64> {
        let p = self.projections(omega)?;
        Ok(p.full[0][raising_slot(lambda)][lowering_slot(mu)])
    }

    /// Atomic contribution to the output spectral matrix of the pair `(λ, μ)`
    /// at unit coupling.
    pub fn atomic_matrix(&self, lambda: Polarization, mu: Polarization, omega: f64) -> Result<SpectralMatrix> {
        Ok(assemble(&self.projections(omega)?, lambda, mu))
    }
}

fn assemble(p: &Projections, lambda: Polarization, mu: Polarization) -> SpectralMatrix {
    let (l, m) = (lowering_slot(lambda), lowering_slot(mu));
    let (ld, md) = (raising_slot(lambda), raising_slot(mu));
    let (plus, minus) = (0, 1);
    let s22 = p.full[plus][ld][m];
    let s11 = p.full[minus][md][l];
    let s12 = -(p.one_sided[plus][l][m] + p.one_sided[minus][m][l]);
    let s21 = -(p.one_sided[minus][l][m] + p.one_sided[plus][m][l]).conj();
    SpectralMatrix::new(s11, s12, s21, s22)
}

/// Incident field on the driven component. The orthogonal component is
/// always in the vacuum state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputField {
    pub noise: InputNoise,
    /// Mean field, normalized so that `|carrier| = 1` corresponds to Ω₁.
    pub carrier: C64,
}

impl InputField {
    pub fn new(noise: InputNoise) -> Self {
        InputField { noise, carrier: C64::from(1.0) }
    }

    pub fn coherent() -> Self {
        InputField::new(InputNoise::COHERENT)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationOutput {
    /// Mean field after the medium.
    pub carrier: C64,
    /// Complex carrier exponent.
    pub chi: C64,
    /// Output spectral matrices.
    pub total: SpectralTrace,
    /// Atomic term `total - input`.
    pub atomic: SpectralTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputField {
    pub grid: Vec<f64>,
    pub driven: PolarizationOutput,
    pub orthogonal: PolarizationOutput,
    /// Atomic `(e1, e2)` cross block.
    pub cross: SpectralTrace,
    /// Carrier phase shift of the driven component, radians.
    pub dephasing: f64,
    pub medium: MediumParams,
}

impl OutputField {
    pub fn polarization(&self, p: Polarization) -> &PolarizationOutput {
        match p {
            Polarization::Driven => &self.driven,
            Polarization::Orthogonal => &self.orthogonal,
        }
    }
}

/// Complex carrier exponent of each polarization.
pub fn carrier_exponents(
    liouvillian: &Liouvillian,
    steady: &SteadyState,
    medium: &MediumParams,
) -> Result<[C64; 2]> {
    let rabi = liouvillian.drive().rabi;
    if rabi == 0.0 {
        return invalid("carrier response is undefined for a zero Rabi frequency");
    }
    let k = medium.carrier_coupling(liouvillian.scheme().gamma()) / rabi;
    Ok(Polarization::BOTH.map(|p| steady.expectation(liouvillian.lowering(p)) * k))
}

/// Carrier phase shift `Φ = Re χ₁` of the driven component.
pub fn dephasing(liouvillian: &Liouvillian, steady: &SteadyState, medium: &MediumParams) -> Result<f64> {
    Ok(carrier_exponents(liouvillian, steady, medium)?[0].re)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return invalid("frequency grid is empty");
    }
    if let Some(bad) = grid.iter().find(|w| !w.is_finite()) {
        return invalid(format!("frequency grid contains non-finite value {bad}"));
    }
    Ok(())
}

/// Per-frequency atomic matrices of the requested `(λ, μ)` pairs, evaluated
/// in parallel.
fn atomic_traces(
    kernel: &FluctuationKernel,
    grid: &[f64],
    coupling: f64,
    pairs: &[(Polarization, Polarization)],
) -> Result<Vec<Vec<SpectralMatrix>>> {
    let rows: Vec<Vec<SpectralMatrix>> = grid
        .par_iter()
        .map(|&w| {
            let p = kernel.projections(w)?;
            Ok(pairs.iter().map(|&(l, m)| assemble(&p, l, m).scale(coupling)).collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..pairs.len()).map(|k| rows.iter().map(|r| r[k]).collect()).collect())
}

/// Propagate the input field through the medium on an explicit grid of
/// noise frequencies (units of Γ).
pub fn propagate(
    input: &InputField,
    medium: &MediumParams,
    liouvillian: &Liouvillian,
    diffusion: &DiffusionMatrix,
    steady: &SteadyState,
    grid: &[f64],
) -> Result<OutputField> {
    check_grid(grid)?;
    let chi = carrier_exponents(liouvillian, steady, medium)?;
    let kernel = FluctuationKernel::new(liouvillian, diffusion)?;
    let coupling = medium.noise_coupling(liouvillian.scheme().gamma());
    use Polarization::{Driven, Orthogonal};
    let mut traces = atomic_traces(
        &kernel,
        grid,
        coupling,
        &[(Driven, Driven), (Orthogonal, Orthogonal), (Driven, Orthogonal)],
    )?
    .into_iter();
    let mut next = || traces.next().expect("three traces requested");
    let (atomic_1, atomic_2, cross) = (next(), next(), next());

    let package = |atomic: Vec<SpectralMatrix>, input_matrix: SpectralMatrix, carrier: C64, chi: C64| {
        let total = atomic.iter().map(|a| input_matrix + *a).collect();
        PolarizationOutput {
            carrier,
            chi,
            total: SpectralTrace { grid: grid.to_vec(), matrices: total },
            atomic: SpectralTrace { grid: grid.to_vec(), matrices: atomic },
        }
    };
    let driven = package(atomic_1, input.noise.spectral_matrix(), input.carrier * (C64::new(0.0, 1.0) * chi[0]).exp(), chi[0]);
    let orthogonal = package(atomic_2, coherent_input_matrix(), input.carrier * C64::new(0.0, 1.0) * chi[1], chi[1]);
    Ok(OutputField {
        grid: grid.to_vec(),
        driven,
        orthogonal,
        cross: SpectralTrace { grid: grid.to_vec(), matrices: cross },
        dephasing: chi[0].re,
        medium: *medium,
    })
}

/// Everything computed for one drive and medium.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub liouvillian: Liouvillian,
    pub steady: SteadyState,
    pub diffusion: DiffusionMatrix,
    pub output: OutputField,
}

/// Generator, steady state, diffusion and propagated field in one call.
pub fn simulate(
    scheme: &LevelScheme,
    drive: &DriveConfig,
    medium: &MediumParams,
    input: &InputField,
    grid: &[f64],
) -> Result<Simulation> {
    check_grid(grid)?;
    let liouvillian = build_generator(scheme, drive)?;
    let steady = steady_state(&liouvillian)?;
    let diffusion = diffusion_matrix(&liouvillian, &steady)?;
    let output = propagate(input, medium, &liouvillian, &diffusion, &steady, grid)?;
    Ok(Simulation { liouvillian, steady, diffusion, output })
}
