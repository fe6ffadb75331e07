// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum noise and optical spectra of laser light transmitted through a
//! thin cloud of atoms with a Zeeman-degenerate transition.
//!
//! All rates and frequencies are in units of the excited-state decay rate Γ
//! unless a [`LevelScheme`] with a different `gamma` is used. Spectra are
//! normalized to the shot-noise level.

pub mod angular;
pub mod atomic;
pub mod error;
pub mod field;
pub mod langevin;
pub mod observables;
pub mod oracles;
pub mod propagation;
pub mod superop;

pub use angular::{clebsch_gordan, dipole_component, HalfInt, LevelScheme, Manifold, Sublevel};
pub use atomic::{build_generator, evolve, steady_state, DriveConfig, Liouvillian, SteadyState};
pub use error::{Error, Result};
pub use field::{
    coherent_input_matrix, excess_noise_input, InputNoise, Polarization, PolarizationBasis, PolarizationMode,
    SpectralMatrix, SpectralTrace,
};
pub use langevin::{diffusion_matrix, DiffusionMatrix};
pub use observables::{
    amplitude_quadrature_angle, optical_spectrum, peak_census, quadrature_noise, Peak, SpectrumTrace,
};
pub use oracles::{mollow_spectrum, qrt_spectrum, two_level_reference, TwoLevelReference};
pub use propagation::{
    atomic_response, dephasing, propagate, simulate, InputField, MediumParams, OutputField, PolarizationOutput, Simulation,
};
