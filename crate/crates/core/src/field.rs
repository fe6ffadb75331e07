// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-polarization field fluctuation model.
//!
//! Spectra are normalized to the shot-noise level: a coherent state (or the
//! vacuum) has `S11 = 1` and all other entries zero.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Geometry of the drive relative to the quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarizationMode {
    /// Drive on the `q = +1` component, quantization axis along the wavevector.
    Circular,
    /// Drive on the `q = 0` component, quantization axis along the drive polarization.
    Linear,
}

impl PolarizationMode {
    pub fn name(self) -> &'static str {
        match self {
            PolarizationMode::Circular => "circular",
            PolarizationMode::Linear => "linear",
        }
    }
}

/// Which of the two transverse field components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// `e1`, the driven component.
    Driven,
    /// `e2`, orthogonal to the drive.
    Orthogonal,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Driven, Polarization::Orthogonal];
}

/// Spherical-component decomposition of the two field polarizations.
///
/// Each entry lists `(q, weight)` pairs: the atomic lowering operator radiating
/// into the component is `sum weight * d_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationBasis {
    pub mode: PolarizationMode,
}

impl PolarizationBasis {
    pub fn new(mode: PolarizationMode) -> Self {
        PolarizationBasis { mode }
    }

    pub fn components(&self, polarization: Polarization) -> Vec<(i32, f64)> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match (self.mode, polarization) {
            (PolarizationMode::Circular, Polarization::Driven) => vec![(1, 1.0)],
            (PolarizationMode::Circular, Polarization::Orthogonal) => vec![(-1, 1.0)],
            (PolarizationMode::Linear, Polarization::Driven) => vec![(0, 1.0)],
            // Plain sum of the two spherical components; see docs/CONVENTIONS.md
            // for the phase reference this fixes.
            (PolarizationMode::Linear, Polarization::Orthogonal) => vec![(-1, h), (1, h)],
        }
    }

    pub fn drive_component(&self) -> i32 {
        match self.mode {
            PolarizationMode::Circular => 1,
            PolarizationMode::Linear => 0,
        }
    }
}

/// 2x2 spectral correlation matrix at one noise frequency, rows and columns
/// ordered `(a, a†)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl SpectralMatrix {
    pub const ZERO: SpectralMatrix = SpectralMatrix {
        s11: Complex64::new(0.0, 0.0),
        s12: Complex64::new(0.0, 0.0),
        s21: Complex64::new(0.0, 0.0),
        s22: Complex64::new(0.0, 0.0),
    };

    pub fn new(s11: Complex64, s12: Complex64, s21: Complex64, s22: Complex64) -> Self {
        SpectralMatrix { s11, s12, s21, s22 }
    }

    /// `S11 + S12 e^{-2iθ} + S21 e^{2iθ} + S22`, complex before the realness check.
    pub fn quadrature(&self, theta: f64) -> Complex64 {
        let rot = Complex64::from_polar(1.0, -2.0 * theta);
        self.s11 + self.s12 * rot + self.s21 * rot.conj() + self.s22
    }

    pub fn scale(&self, factor: f64) -> Self {
        SpectralMatrix {
            s11: self.s11 * factor,
            s12: self.s12 * factor,
            s21: self.s21 * factor,
            s22: self.s22 * factor,
        }
    }

    pub fn max_abs(&self) -> f64 {
        [self.s11, self.s12, self.s21, self.s22]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add for SpectralMatrix {
    type Output = SpectralMatrix;

    fn add(self, rhs: SpectralMatrix) -> SpectralMatrix {
        SpectralMatrix {
            s11: self.s11 + rhs.s11,
            s12: self.s12 + rhs.s12,
            s21: self.s21 + rhs.s21,
            s22: self.s22 + rhs.s22,
        }
    }
}

impl std::ops::Sub for SpectralMatrix {
    type Output = SpectralMatrix;

    fn sub(self, rhs: SpectralMatrix) -> SpectralMatrix {
        SpectralMatrix {
            s11: self.s11 - rhs.s11,
            s12: self.s12 - rhs.s12,
            s21: self.s21 - rhs.s21,
            s22: self.s22 - rhs.s22,
        }
    }
}

/// Spectral matrices sampled on an explicit frequency grid (units of Γ).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTrace {
    pub grid: Vec<f64>,
    pub matrices: Vec<SpectralMatrix>,
}

impl SpectralTrace {
    pub fn constant(grid: &[f64], matrix: SpectralMatrix) -> Self {
        SpectralTrace { grid: grid.to_vec(), matrices: vec![matrix; grid.len()] }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// White excess noise on the driven component's amplitude and phase quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputNoise {
    pub eps_a: f64,
    pub eps_p: f64,
}

impl InputNoise {
    pub const COHERENT: InputNoise = InputNoise { eps_a: 0.0, eps_p: 0.0 };

    pub fn new(eps_a: f64, eps_p: f64) -> Result<Self> {
        for (name, v) in [("eps_a", eps_a), ("eps_p", eps_p)] {
            if !(v.is_finite() && v >= 0.0) {
                return invalid(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        Ok(InputNoise { eps_a, eps_p })
    }

    pub fn spectral_matrix(&self) -> SpectralMatrix {
        let sum = Complex64::from(0.25 * (self.eps_a + self.eps_p));
        let diff = Complex64::from(0.25 * (self.eps_a - self.eps_p));
        coherent_input_matrix() + SpectralMatrix::new(sum, diff, diff, sum)
    }
}

/// Shot-noise-normalized spectral matrix of a coherent state.
pub fn coherent_input_matrix() -> SpectralMatrix {
    SpectralMatrix { s11: Complex64::new(1.0, 0.0), ..SpectralMatrix::ZERO }
}

/// Coherent matrix plus white, uncorrelated amplitude (`eps_a`) and phase
/// (`eps_p`) excess noise.
pub fn excess_noise_input(eps_a: f64, eps_p: f64) -> Result<SpectralMatrix> {
    Ok(InputNoise::new(eps_a, eps_p)?.spectral_matrix())
}
