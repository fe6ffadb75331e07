// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! The stretched cycling transition against hand-built two-level models.

use atomnoise::superop::{op_index, vec_index, C64};
use atomnoise::*;
use nalgebra::{DMatrix, DVector, Matrix2};

const G: usize = 0;
const E: usize = 1;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn tls_ops(rabi: f64, detuning: f64) -> (Matrix2<C64>, Matrix2<C64>) {
    let lower = Matrix2::new(c(0.0), c(1.0), c(0.0), c(0.0));
    let h = Matrix2::new(c(0.0), c(-0.5 * rabi), c(-0.5 * rabi), c(-detuning));
    (h, lower)
}

/// Schrödinger-picture action written out by hand.
fn tls_lindblad(rho: &Matrix2<C64>, h: &Matrix2<C64>, l: &Matrix2<C64>) -> Matrix2<C64> {
    let i = C64::new(0.0, 1.0);
    let ldl = l.adjoint() * l;
    -(h * rho - rho * h) * i + l * rho * l.adjoint() - (ldl * rho + rho * ldl) * c(0.5)
}

/// Heisenberg-picture action.
fn tls_adjoint(x: &Matrix2<C64>, h: &Matrix2<C64>, l: &Matrix2<C64>) -> Matrix2<C64> {
    let i = C64::new(0.0, 1.0);
    let ldl = l.adjoint() * l;
    (h * x - x * h) * i + l.adjoint() * x * l - (ldl * x + x * ldl) * c(0.5)
}

fn unit(a: usize, b: usize) -> Matrix2<C64> {
    let mut m = Matrix2::zeros();
    m[(a, b)] = c(1.0);
    m
}

fn scheme() -> LevelScheme {
    LevelScheme::new(1.0, 2.0).unwrap()
}

#[test]
fn generator_restricted_to_cycling_pair() {
    let s = scheme();
    let idx = [s.ground(1.0).unwrap(), s.excited(2.0).unwrap()];
    let n = s.dim();
    for (rabi, det) in [(1.0, 0.0), (0.3, -1.2), (4.0, 0.7)] {
        let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Circular, rabi, det).unwrap()).unwrap();
        let (h, low) = tls_ops(rabi, det);
        for (k, l2) in [(G, G), (G, E), (E, G), (E, E)] {
            let image = tls_lindblad(&unit(k, l2), &h, &low);
            for (i, j) in [(G, G), (G, E), (E, G), (E, E)] {
                let full = l.generator()[(vec_index(idx[i], idx[j], n), vec_index(idx[k], idx[l2], n))];
                assert!((full - image[(i, j)]).norm() < 1e-14, "({i}{j},{k}{l2}) {full} vs {}", image[(i, j)]);
            }
        }
    }
}

#[test]
fn excited_population_matches_brute_force_two_level_solve() {
    let s = scheme();
    let e2 = s.excited(2.0).unwrap();
    for (rabi, det) in [(1.0, 0.0), (0.2, 1.0), (3.0, -0.5)] {
        // Null vector of the 4x4 two-level generator with the trace appended.
        let (h, low) = tls_ops(rabi, det);
        let mut lhs = DMatrix::<C64>::zeros(5, 4);
        for (col, (k, l2)) in [(G, G), (E, G), (G, E), (E, E)].into_iter().enumerate() {
            let image = tls_lindblad(&unit(k, l2), &h, &low);
            for (row, (i, j)) in [(G, G), (E, G), (G, E), (E, E)].into_iter().enumerate() {
                lhs[(row, col)] = image[(i, j)];
            }
        }
        lhs[(4, 0)] = c(1.0);
        lhs[(4, 3)] = c(1.0);
        let mut rhs = DVector::<C64>::zeros(5);
        rhs[4] = c(1.0);
        let normal = lhs.adjoint() * &lhs;
        let x = normal.lu().solve(&(lhs.adjoint() * rhs)).unwrap();
        let brute = x[3].re;

        let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Circular, rabi, det).unwrap()).unwrap();
        let ss = steady_state(&l).unwrap();
        assert!((ss.population(e2) - brute).abs() < 1e-12, "{} vs {brute}", ss.population(e2));
        let closed = two_level_reference(rabi, det, 1.0).unwrap().rho_ee;
        assert!((closed - brute).abs() < 1e-12);
    }
}

#[test]
fn diffusion_restricted_to_cycling_pair() {
    let s = scheme();
    let n = s.dim();
    let idx = [s.ground(1.0).unwrap(), s.excited(2.0).unwrap()];
    let rabi = 1.0;
    let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Circular, rabi, 0.0).unwrap()).unwrap();
    let ss = steady_state(&l).unwrap();
    let d = diffusion_matrix(&l, &ss).unwrap();

    let (h, low) = tls_ops(rabi, 0.0);
    let r = two_level_reference(rabi, 0.0, 1.0).unwrap();
    let rho = Matrix2::new(c(1.0 - r.rho_ee), r.coherence.conj(), r.coherence, c(r.rho_ee));
    let mean = |x: &Matrix2<C64>| (x * rho).trace();
    let pairs = [(G, G), (G, E), (E, G), (E, E)];
    for (a, b) in pairs {
        for (cc, dd) in pairs {
            let (x, y) = (unit(a, b), unit(cc, dd));
            let two_d = mean(&tls_adjoint(&(x * y), &h, &low))
                - mean(&(tls_adjoint(&x, &h, &low) * y))
                - mean(&(x * tls_adjoint(&y, &h, &low)));
            let lib = d.matrix()[(op_index(idx[a], idx[b], n), op_index(idx[cc], idx[dd], n))];
            assert!((lib * 2.0 - two_d).norm() < 1e-12, "{a}{b},{cc}{dd}: {lib} vs {two_d}");
        }
    }
}

#[test]
fn dephasing_is_dispersive() {
    let s = scheme();
    let medium = MediumParams::new(0.1).unwrap();
    let phi = |det: f64| {
        let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Circular, 1e-3, det).unwrap()).unwrap();
        let ss = steady_state(&l).unwrap();
        dephasing(&l, &ss, &medium).unwrap()
    };
    assert!(phi(0.0).abs() < 1e-14);
    let (plus, minus) = (phi(1.0), phi(-1.0));
    assert!(plus != 0.0 && (plus + minus).abs() < 1e-12);
    // Weak-field limit equals the closed-form susceptibility with the carrier coupling.
    let chi = two_level_reference(1e-3, 1.0, 1.0).unwrap().susceptibility;
    assert!((plus - 0.5 * 0.1 * chi.re).abs() < 1e-7, "{plus} vs {}", 0.05 * chi.re);

    let l = build_generator(&s, &DriveConfig::new(PolarizationMode::Circular, 0.2, 1.0).unwrap()).unwrap();
    let ss = steady_state(&l).unwrap();
    let p1 = dephasing(&l, &ss, &MediumParams::new(0.1).unwrap()).unwrap();
    let p2 = dephasing(&l, &ss, &MediumParams::new(0.2).unwrap()).unwrap();
    assert!((p2 - 2.0 * p1).abs() < 1e-15);
}

#[test]
fn carrier_angle_equals_dephasing() {
    let s = scheme();
    let sim = simulate(
        &s,
        &DriveConfig::new(PolarizationMode::Circular, 0.2, 1.0).unwrap(),
        &MediumParams::new(0.3).unwrap(),
        &InputField::coherent(),
        &[0.001],
    )
    .unwrap();
    let theta = amplitude_quadrature_angle(sim.output.driven.carrier).unwrap();
    assert!((theta - sim.output.dephasing).abs() < 1e-10);
}

#[test]
fn weak_probe_beer_lambert() {
    let s = scheme();
    for b0 in [0.01, 0.1, 0.4] {
        let sim = simulate(
            &s,
            &DriveConfig::new(PolarizationMode::Circular, 1e-4, 0.0).unwrap(),
            &MediumParams::new(b0).unwrap(),
            &InputField::coherent(),
            &[1.0],
        )
        .unwrap();
        let transmission = sim.output.driven.carrier.norm_sqr();
        assert!((transmission - (-b0).exp()).abs() < 1e-7, "b0 {b0}: {transmission}");
    }
}
