// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference calculations that share no code with the Langevin route.
//!
//! * [`mollow_spectrum`]: closed-form inelastic fluorescence of a two-level atom;
//! * [`qrt_spectrum`]: two-time correlations from the quantum regression theorem
//!   in the Schrödinger picture;
//! * [`two_level_reference`]: closed-form two-level steady state.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::atomic::{Liouvillian, SteadyState};
use crate::error::{invalid, Error, Result};
use crate::superop::{unvectorize, vec_index, vectorize, C64};

/// Closed-form two-level steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelReference {
    pub rho_ee: f64,
    /// `<σ₋> = ρ_eg`.
    pub coherence: Complex64,
    /// Weak-field limit of `<σ₋> / Ω₁`; the imaginary part is absorptive.
    pub susceptibility: Complex64,
}

pub fn two_level_reference(rabi: f64, detuning: f64, gamma: f64) -> Result<TwoLevelReference> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return invalid(format!("decay rate must be positive, got {gamma}"));
    }
    if !(rabi.is_finite() && detuning.is_finite()) {
        return invalid("Rabi frequency and detuning must be finite");
    }
    let i = Complex64::new(0.0, 1.0);
    let denom = Complex64::new(0.5 * gamma, -detuning);
    let rho_ee = rabi * rabi / (gamma * gamma + 4.0 * detuning * detuning + 2.0 * rabi * rabi);
    let coherence = i * (0.5 * rabi * (1.0 - 2.0 * rho_ee)) / denom;
    let susceptibility = i * 0.5 / denom;
    Ok(TwoLevelReference { rho_ee, coherence, susceptibility })
}

/// Inelastic fluorescence spectrum of a driven two-level atom,
/// `∫ e^{iΩτ} <δσ₊(τ) δσ₋(0)> dτ`.
///
/// The normalization is fixed by `∫ S dΩ / 2π = ρ_ee - |<σ₋>|²`, the
/// inelastically scattered fraction.
pub fn mollow_spectrum(rabi: f64, detuning: f64, gamma: f64, omega: f64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let half = 0.5 * gamma;
    let rho_ee = rabi * rabi / (gamma * gamma + 4.0 * detuning * detuning + 2.0 * rabi * rabi);
    let x1 = i * (0.5 * rabi * (1.0 - 2.0 * rho_ee)) / Complex64::new(half, -detuning);

    // Bloch matrix on (σ₋, σ₊, σ_ee) and the initial correlation vector
    // (<δσ₋ δσ₋>, <δσ₊ δσ₋>, <δσ_ee δσ₋>).
    let a11 = i * detuning - half;
    let a22 = -i * detuning - half;
    let a13 = -i * rabi;
    let a23 = i * rabi;
    let a31 = -i * 0.5 * rabi;
    let a32 = i * 0.5 * rabi;
    let a33 = Complex64::from(-gamma);
    let y = [-x1 * x1, Complex64::from(rho_ee - x1.norm_sqr()), -x1 * rho_ee];

    let s = -i * omega;
    let (b11, b22, b33) = (s - a11, s - a22, s - a33);
    let (b13, b23, b31, b32) = (-a13, -a23, -a31, -a32);
    let det = b11 * (b22 * b33 - b23 * b32) - b13 * b22 * b31;
    let second = (b23 * b31 * y[0] + (b11 * b33 - b13 * b31) * y[1] - b11 * b23 * y[2]) / det;
    2.0 * second.re
}

/// Frequency of the upper Mollow sideband maximum for `Δ = 0`, found on a fine scan.
pub fn mollow_sideband(rabi: f64, gamma: f64) -> f64 {
    let (lo, hi) = (0.5 * rabi, 1.5 * rabi + 2.0 * gamma);
    let steps = 20_000;
    let mut best = (lo, f64::NEG_INFINITY);
    for k in 0..=steps {
        let w = lo + (hi - lo) * k as f64 / steps as f64;
        let v = mollow_spectrum(rabi, 0.0, gamma, w);
        if v > best.1 {
            best = (w, v);
        }
    }
    best.0
}

/// Fourier transform of `<δA(τ) δB(0)>` by the quantum regression theorem,
///
/// ```text
/// Tr[A (-iΩ - G)⁻¹ (Bρ - <B>ρ)] + Tr[B (iΩ - G)⁻¹ (ρA - <A>ρ)]
/// ```
///
/// evaluated with the stationary mode of `G` deflated so that `Ω = 0` is allowed.
pub fn qrt_spectrum(
    liouvillian: &Liouvillian,
    steady: &SteadyState,
    pair: (&DMatrix<C64>, &DMatrix<C64>),
    grid: &[f64],
) -> Result<Vec<Complex64>> {
    let n = liouvillian.dim();
    let (a, b) = pair;
    if a.shape() != (n, n) || b.shape() != (n, n) {
        return invalid("operator dimensions do not match the level scheme");
    }
    let rho = steady.rho();
    let g = liouvillian.generator();
    let residual = (g * vectorize(rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual > 1e-9 {
        return Err(Error::Precondition(format!("state is not stationary: |G rho| = {residual:e}")));
    }
    let mut trace_row = DVector::<C64>::zeros(n * n);
    for k in 0..n {
        trace_row[vec_index(k, k, n)] = C64::from(1.0);
    }
    let deflated = g - vectorize(rho) * trace_row.transpose();

    let mean_a = (a * rho).trace();
    let mean_b = (b * rho).trace();
    let forward = vectorize(&(b * rho - rho * mean_b));
    let backward = vectorize(&(rho * a - rho * mean_a));
    let n2 = n * n;

    grid.par_iter()
        .map(|&w| {
            let solve = |shift: C64, rhs: &DVector<C64>| {
                (DMatrix::<C64>::identity(n2, n2) * shift - &deflated)
                    .lu()
                    .solve(rhs)
                    .ok_or_else(|| Error::Numerical(format!("regression resolvent singular at omega = {w}")))
            };
            let x = unvectorize(&solve(C64::new(0.0, -w), &forward)?, n);
            let y = unvectorize(&solve(C64::new(0.0, w), &backward)?, n);
            Ok((a * x).trace() + (b * y).trace())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::LevelScheme;
    use crate::atomic::{build_generator, steady_state, DriveConfig};
    use crate::field::{Polarization, PolarizationMode};
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_level_limits() {
        assert!(two_level_reference(1e-6, 0.0, 1.0).unwrap().rho_ee < 1e-11);
        assert_abs_diff_eq!(two_level_reference(1e4, 0.0, 1.0).unwrap().rho_ee, 0.5, epsilon = 1e-7);
        let chi = two_level_reference(1e-6, 1.0, 1.0).unwrap().susceptibility;
        assert_abs_diff_eq!(chi.re / chi.im, -2.0, epsilon = 1e-12);
        assert!(two_level_reference(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn mollow_shape() {
        for w in [0.0, 0.5, 3.0, 7.0] {
            assert_abs_diff_eq!(mollow_spectrum(5.0, 0.0, 1.0, w), mollow_spectrum(5.0, 0.0, 1.0, -w), epsilon = 1e-14);
        }
        assert!(mollow_spectrum(5.0, 0.0, 1.0, 1e4) < 1e-7);
        // Strong drive: sidebands at ±Ω₁, centre three times their height.
        let rabi = 40.0;
        let side = mollow_sideband(rabi, 1.0);
        assert!((side - rabi).abs() < 0.05);
        let ratio = mollow_spectrum(rabi, 0.0, 1.0, 0.0) / mollow_spectrum(rabi, 0.0, 1.0, side);
        assert!((ratio - 3.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn mollow_total_inelastic_power() {
        let (rabi, det) = (1.3, 0.4);
        let reference = two_level_reference(rabi, det, 1.0).unwrap();
        let expect = reference.rho_ee - reference.coherence.norm_sqr();
        // Trapezoid on a wide grid; tails fall as 1/Ω².
        let (lo, hi, steps) = (-400.0, 400.0, 400_000);
        let h = (hi - lo) / steps as f64;
        let mut sum = 0.0;
        for k in 0..=steps {
            let w = lo + h * k as f64;
            let weight = if k == 0 || k == steps { 0.5 } else { 1.0 };
            sum += weight * mollow_spectrum(rabi, det, 1.0, w);
        }
        let total = sum * h / (2.0 * std::f64::consts::PI);
        assert!((total - expect).abs() < 2e-3 * expect, "{total} vs {expect}");
    }

    #[test]
    fn identity_has_no_fluctuations() {
        let s = LevelScheme::new(1.0, 2.0).unwrap();
        let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Linear, 1.0, 0.0).unwrap()).unwrap();
        let ss = steady_state(&l).unwrap();
        let id = DMatrix::<C64>::identity(s.dim(), s.dim());
        for v in qrt_spectrum(&l, &ss, (&id, &id), &[0.0, 1.0]).unwrap() {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn stretched_transition_matches_mollow() {
        let s = LevelScheme::new(1.0, 2.0).unwrap();
        let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Circular, 2.0, 0.5).unwrap()).unwrap();
        let ss = steady_state(&l).unwrap();
        let p = l.lowering(Polarization::Driven);
        let grid = [-3.0, -0.2, 0.0, 0.7, 2.5];
        let qrt = qrt_spectrum(&l, &ss, (&p.adjoint(), p), &grid).unwrap();
        for (w, v) in grid.iter().zip(qrt) {
            let m = mollow_spectrum(2.0, 0.5, 1.0, *w);
            assert!((v.re - m).abs() < 1e-10 * m.abs().max(1e-3), "{w}: {v} vs {m}");
            assert!(v.im.abs() < 1e-10);
        }
    }
}
