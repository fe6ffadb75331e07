// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Evaluation of a [`Plan`] and the files it produces.

use std::fs;
use std::path::{Path, PathBuf};

use atomnoise::{
    amplitude_quadrature_angle, mollow_spectrum, optical_spectrum, propagation::propagate, qrt_spectrum,
    quadrature_noise, simulate, DriveConfig, InputField, InputNoise, MediumParams, Polarization,
    PolarizationMode, SpectralTrace,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::scenario::{GridSpec, Outputs, Plan, Point, PointParams, Probe, QuadratureSpec};
use crate::{CliError, CONVENTIONS_VERSION};

pub const COLUMNS: [&str; 8] = [
    "omega_over_gamma",
    "s_opt_e1",
    "s_opt_e2",
    "s_x_e1",
    "s_x_e2",
    "qrt_s22_e1",
    "qrt_s22_e2",
    "mollow_e1",
];

const NORMALIZATION: [&str; 5] = [
    "frequencies and rates in units of the excited-state decay rate Gamma",
    "noise spectra normalized to shot noise: a coherent state gives 1 in every quadrature",
    "s_opt is Re S22, the normally ordered inelastic spectrum of the output field; elastic carrier excluded",
    "qrt_s22 and mollow are reference traces scaled by the noise coupling b0 Gamma / 4, comparable to s_opt minus the input S22",
    "s_x uses the quadrature angle of the table for both polarizations, measured from the input carrier phase",
];

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker cap; `None` uses every available core.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// Written files, sidecar last.
    pub files: Vec<PathBuf>,
}

struct PointResult {
    file: String,
    columns: [Option<Vec<f64>>; 7],
    record: TableRecord,
    probe: Option<ProbeRow>,
}

struct ProbeRow {
    phi: f64,
    driven: Vec<f64>,
    orthogonal: Vec<f64>,
}

#[derive(Serialize)]
struct TableRecord {
    file: String,
    mode: &'static str,
    sweep_value: Option<f64>,
    params: PointParams,
    /// Quadrature angle of the `s_x` columns, radians.
    quadrature_angle: Option<f64>,
    dephasing: f64,
    carrier_e1: [f64; 2],
    carrier_e2: [f64; 2],
    chi_e1: [f64; 2],
    chi_e2: [f64; 2],
    noise_coupling: f64,
    steady_state_residual: f64,
}

#[derive(Serialize)]
struct ProbeRecord {
    file: String,
    mode: &'static str,
    frequency: f64,
    eps_p: Vec<f64>,
}

#[derive(Serialize)]
struct Transition {
    fg: f64,
    fe: f64,
    gamma: f64,
}

#[derive(Serialize)]
struct SweepRecord<'a> {
    axis: &'static str,
    values: &'a [f64],
}

#[derive(Serialize)]
struct Metadata<'a> {
    name: &'a str,
    description: Option<&'a str>,
    generator: String,
    conventions_version: &'static str,
    normalization: [&'static str; 5],
    quadrature_convention: Option<QuadratureSpec>,
    quadrature_reference: &'static str,
    transition: Transition,
    grid: &'a GridSpec,
    grid_len: usize,
    outputs: &'a Outputs,
    sweep: Option<SweepRecord<'a>>,
    probe: Option<&'a Probe>,
    columns: [&'static str; 8],
    tables: Vec<TableRecord>,
    probe_tables: Vec<ProbeRecord>,
}

fn pair(z: atomnoise::superop::C64) -> [f64; 2] {
    [z.re, z.im]
}

fn compute(plan: &Plan, point: &Point, grid: &[f64]) -> Result<PointResult, CliError> {
    let label = plan.label(point);
    let fail = |source| CliError::Compute { point: label.clone(), source };
    let p = point.params;
    let scheme = plan.scheme();
    let gamma = scheme.gamma();
    let drive = DriveConfig::new(point.mode, p.rabi, p.detuning).map_err(fail)?;
    let medium = MediumParams::new(p.b0).map_err(fail)?;
    let noise = InputNoise::new(p.eps_a, p.eps_p).map_err(fail)?;
    let sim = simulate(&scheme, &drive, &medium, &InputField::new(noise), grid).map_err(fail)?;
    let out = &sim.output;
    let coupling = medium.noise_coupling(gamma);

    let theta = match plan.outputs.quadrature {
        Some(q) => Some(amplitude_quadrature_angle(out.driven.carrier).map_err(fail)? + q.offset()),
        None => None,
    };
    let optical = |t: &SpectralTrace| optical_spectrum(t).map(|s| s.values);
    let quadrature = |t: &SpectralTrace, theta: f64| quadrature_noise(t, theta).map(|s| s.values);
    let mut columns: [Option<Vec<f64>>; 7] = Default::default();
    if plan.outputs.optical {
        columns[0] = Some(optical(&out.driven.total).map_err(fail)?);
        columns[1] = Some(optical(&out.orthogonal.total).map_err(fail)?);
    }
    if let Some(theta) = theta {
        columns[2] = Some(quadrature(&out.driven.total, theta).map_err(fail)?);
        columns[3] = Some(quadrature(&out.orthogonal.total, theta).map_err(fail)?);
    }
    if plan.outputs.oracles {
        for (k, pol) in Polarization::BOTH.into_iter().enumerate() {
            let op = sim.liouvillian.lowering(pol);
            let qrt = qrt_spectrum(&sim.liouvillian, &sim.steady, (&op.adjoint(), op), grid).map_err(fail)?;
            columns[4 + k] = Some(qrt.iter().map(|z| coupling * z.re).collect());
        }
        if point.mode == PolarizationMode::Circular && plan.fe == plan.fg + 1.0 {
            columns[6] = Some(grid.iter().map(|&w| coupling * mollow_spectrum(p.rabi, p.detuning, gamma, w)).collect());
        }
    }

    let probe = match (&plan.probe, theta) {
        (Some(probe), Some(theta)) => {
            let mut row = ProbeRow { phi: out.dephasing, driven: Vec::new(), orthogonal: Vec::new() };
            for &eps in &probe.eps_p {
                let input = InputField::new(InputNoise::new(p.eps_a, eps).map_err(fail)?);
                let at = propagate(&input, &medium, &sim.liouvillian, &sim.diffusion, &sim.steady, &[probe.frequency])
                    .map_err(fail)?;
                row.driven.push(quadrature(&at.driven.total, theta).map_err(fail)?[0]);
                row.orthogonal.push(quadrature(&at.orthogonal.total, theta).map_err(fail)?[0]);
            }
            Some(row)
        }
        _ => None,
    };

    let file = format!("{label}.csv");
    let record = TableRecord {
        file: file.clone(),
        mode: point.mode.name(),
        sweep_value: point.sweep_value,
        params: p,
        quadrature_angle: theta,
        dephasing: out.dephasing,
        carrier_e1: pair(out.driven.carrier),
        carrier_e2: pair(out.orthogonal.carrier),
        chi_e1: pair(out.driven.chi),
        chi_e2: pair(out.orthogonal.chi),
        noise_coupling: coupling,
        steady_state_residual: sim.steady.residual(&sim.liouvillian),
    };
    Ok(PointResult { file, columns, record, probe })
}

/// Shortest round-trip representation, in exponent form outside
/// `1e-5 <= |v| < 1e16`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn table_csv(grid: &[f64], columns: &[Option<Vec<f64>>; 7]) -> String {
    let mut s = COLUMNS.join(",");
    s.push('\n');
    for (i, w) in grid.iter().enumerate() {
        s.push_str(&format_number(*w));
        for c in columns {
            s.push(',');
            if let Some(v) = c {
                s.push_str(&format_number(v[i]));
            }
        }
        s.push('\n');
    }
    s
}

fn probe_csv(plan: &Plan, probe: &Probe, rows: &[(&Point, &ProbeRow)]) -> String {
    let mut header: Vec<String> = Vec::new();
    if let Some((axis, _)) = &plan.sweep {
        header.push(axis.name().into());
    }
    header.push("phi".into());
    for pol in ["e1", "e2"] {
        for eps in &probe.eps_p {
            header.push(format!("s_x_{pol}_eps_p_{}", format_number(*eps)));
        }
    }
    let mut s = header.join(",");
    s.push('\n');
    for (point, row) in rows {
        let mut fields: Vec<String> = Vec::new();
        if let Some(v) = point.sweep_value {
            fields.push(format_number(v));
        }
        fields.push(format_number(row.phi));
        fields.extend(row.driven.iter().chain(&row.orthogonal).map(|v| format_number(*v)));
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

fn write(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    files.push(path);
    Ok(())
}

/// Evaluate every point of `plan` and write its tables and metadata.
///
/// Nothing is written unless every point succeeds.
pub fn run(plan: &Plan, options: &RunOptions) -> Result<RunReport, CliError> {
    let grid = plan.grid.points();
    let points = plan.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config("threads", e.to_string()))?;
    let results: Vec<PointResult> =
        pool.install(|| points.par_iter().map(|p| compute(plan, p, &grid)).collect::<Result<_, _>>())?;

    let dir = &options.out_dir;
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    let mut files = Vec::new();
    for r in &results {
        write(dir, &r.file, &table_csv(&grid, &r.columns), &mut files)?;
    }

    let mut probe_tables = Vec::new();
    if let Some(probe) = &plan.probe {
        for &mode in &plan.modes {
            let rows: Vec<(&Point, &ProbeRow)> = points
                .iter()
                .zip(&results)
                .filter(|(p, _)| p.mode == mode)
                .filter_map(|(p, r)| r.probe.as_ref().map(|row| (p, row)))
                .collect();
            let file = format!("{}_{}_probe.csv", plan.name, mode.name());
            write(dir, &file, &probe_csv(plan, probe, &rows), &mut files)?;
            probe_tables.push(ProbeRecord { file, mode: mode.name(), frequency: probe.frequency, eps_p: probe.eps_p.clone() });
        }
    }

    let meta = Metadata {
        name: &plan.name,
        description: plan.description.as_deref(),
        generator: format!("atomnoise-cli {}", env!("CARGO_PKG_VERSION")),
        conventions_version: CONVENTIONS_VERSION,
        normalization: NORMALIZATION,
        quadrature_convention: plan.outputs.quadrature,
        quadrature_reference: "angle of the driven-polarization output carrier, plus offset",
        transition: Transition { fg: plan.fg, fe: plan.fe, gamma: plan.scheme().gamma() },
        grid: &plan.grid,
        grid_len: grid.len(),
        outputs: &plan.outputs,
        sweep: plan.sweep.as_ref().map(|(axis, values)| SweepRecord { axis: axis.name(), values }),
        probe: plan.probe.as_ref(),
        columns: COLUMNS,
        tables: results.into_iter().map(|r| r.record).collect(),
        probe_tables,
    };
    let mut json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    json.push('\n');
    write(dir, &format!("{}.json", plan.name), &json, &mut files)?;
    Ok(RunReport { files })
}
