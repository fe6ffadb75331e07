// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario files: TOML parsing, static validation and resolution into a
//! list of computation points.

use std::fmt;

use atomnoise::propagation::VALIDITY_LIMIT_B0;
use atomnoise::{LevelScheme, PolarizationMode};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub description: Option<String>,
    pub transition: Option<TransitionSection>,
    pub drive: Option<DriveSection>,
    pub medium: Option<MediumSection>,
    pub input: Option<InputSection>,
    pub grid: Option<GridSection>,
    pub output: Option<OutputSection>,
    pub sweep: Option<SweepSection>,
    pub probe: Option<ProbeSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSection {
    #[serde(default = "default_fg")]
    pub fg: f64,
    #[serde(default = "default_fe")]
    pub fe: f64,
}

fn default_fg() -> f64 {
    1.0
}

fn default_fe() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub polarization: OneOrMany,
    pub rabi: Option<f64>,
    #[serde(default)]
    pub detuning: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    pub b0: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    #[serde(default)]
    pub eps_a: f64,
    #[serde(default)]
    pub eps_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<i64>,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
    #[serde(default)]
    pub symmetrize: bool,
}

fn default_spacing() -> Spacing {
    Spacing::Lin
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum QuadratureField {
    Named(String),
    Angle(f64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_true")]
    pub optical: bool,
    pub quadrature: Option<QuadratureField>,
    #[serde(default)]
    pub oracles: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub frequency: f64,
    pub eps_p: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Rabi,
    Detuning,
    B0,
    EpsP,
}

impl SweepAxis {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "rabi" => Some(SweepAxis::Rabi),
            "detuning" => Some(SweepAxis::Detuning),
            "b0" => Some(SweepAxis::B0),
            "eps_p" => Some(SweepAxis::EpsP),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Rabi => "rabi",
            SweepAxis::Detuning => "detuning",
            SweepAxis::B0 => "b0",
            SweepAxis::EpsP => "eps_p",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub symmetrize: bool,
}

impl GridSpec {
    /// Sample points, ascending. A symmetrized grid mirrors the positive
    /// points; a zero endpoint appears once.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let base: Vec<f64> = match self.spacing {
            Spacing::Lin => (0..n).map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64).collect(),
            Spacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
            }
        };
        if !self.symmetrize {
            return base;
        }
        let mut out: Vec<f64> = base.iter().rev().filter(|w| **w > 0.0).map(|w| -w).collect();
        out.extend(base);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reference", rename_all = "snake_case")]
pub enum QuadratureSpec {
    /// Angle of the driven output carrier.
    Amplitude,
    /// Offset in radians from the driven output carrier angle.
    Relative { offset: f64 },
}

impl QuadratureSpec {
    pub fn offset(self) -> f64 {
        match self {
            QuadratureSpec::Amplitude => 0.0,
            QuadratureSpec::Relative { offset } => offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outputs {
    pub optical: bool,
    pub quadrature: Option<QuadratureSpec>,
    pub oracles: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub frequency: f64,
    pub eps_p: Vec<f64>,
}

/// Physical parameters of one computation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointParams {
    pub rabi: f64,
    pub detuning: f64,
    pub b0: f64,
    pub eps_a: f64,
    pub eps_p: f64,
}

impl PointParams {
    pub fn with(mut self, axis: SweepAxis, value: f64) -> Self {
        match axis {
            SweepAxis::Rabi => self.rabi = value,
            SweepAxis::Detuning => self.detuning = value,
            SweepAxis::B0 => self.b0 = value,
            SweepAxis::EpsP => self.eps_p = value,
        }
        self
    }
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub name: String,
    pub description: Option<String>,
    pub fg: f64,
    pub fe: f64,
    pub modes: Vec<PolarizationMode>,
    pub base: PointParams,
    pub grid: GridSpec,
    pub outputs: Outputs,
    pub sweep: Option<(SweepAxis, Vec<f64>)>,
    pub probe: Option<Probe>,
}

/// One entry of the sweep for one polarization mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub mode: PolarizationMode,
    /// Sweep value, if the scenario has a sweep axis.
    pub sweep_value: Option<f64>,
    pub params: PointParams,
}

impl Plan {
    pub fn scheme(&self) -> LevelScheme {
        LevelScheme::new(self.fg, self.fe).expect("validated transition")
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for &mode in &self.modes {
            match &self.sweep {
                None => out.push(Point { mode, sweep_value: None, params: self.base }),
                Some((axis, values)) => {
                    for &v in values {
                        out.push(Point { mode, sweep_value: Some(v), params: self.base.with(*axis, v) });
                    }
                }
            }
        }
        out
    }

    /// Label identifying a point in diagnostics and file names.
    pub fn label(&self, point: &Point) -> String {
        match (&self.sweep, point.sweep_value) {
            (Some((axis, _)), Some(v)) => format!("{}_{}_{}_{}", self.name, point.mode.name(), axis.name(), crate::runner::format_number(v)),
            _ => format!("{}_{}", self.name, point.mode.name()),
        }
    }
}

pub fn parse(text: &str) -> Result<ScenarioFile, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

struct Collector(Vec<Diagnostic>);

impl Collector {
    fn error(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(Diagnostic { severity: Severity::Error, field: field.into(), message: message.into() });
    }

    fn warning(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(Diagnostic { severity: Severity::Warning, field: field.into(), message: message.into() });
    }

    fn non_negative(&mut self, field: &str, v: f64) {
        if !v.is_finite() || v < 0.0 {
            self.error(field, format!("must be finite and non-negative, got {v}"));
        }
    }

    fn finite(&mut self, field: &str, v: f64) {
        if !v.is_finite() {
            self.error(field, format!("must be finite, got {v}"));
        }
    }

    fn has_errors(&self) -> bool {
        self.0.iter().any(|d| d.severity == Severity::Error)
    }
}

fn b0_warning(c: &mut Collector, field: &str, b0: f64) {
    if b0.is_finite() && b0 > VALIDITY_LIMIT_B0 {
        c.warning(field, format!("b0 = {b0} is outside single-scattering validity (b0 <= {VALIDITY_LIMIT_B0})"));
    }
}

/// Static checks only; no physics is evaluated.
pub fn validate(file: &ScenarioFile) -> Vec<Diagnostic> {
    match resolve(file) {
        Ok((_, diags)) => diags,
        Err(diags) => diags,
    }
}

/// Validate and resolve into a [`Plan`]. Warnings are returned alongside a
/// successful plan.
pub fn resolve(file: &ScenarioFile) -> Result<(Plan, Vec<Diagnostic>), Vec<Diagnostic>> {
    let mut c = Collector(Vec::new());

    let name = file.name.clone().unwrap_or_else(|| "scenario".into());
    if name.is_empty() || !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-') {
        c.error("name", format!("must be non-empty and use only [A-Za-z0-9_-], got {name:?}"));
    }

    let (fg, fe) = file.transition.as_ref().map_or((1.0, 2.0), |t| (t.fg, t.fe));
    if let Err(e) = LevelScheme::new(fg, fe) {
        c.error("transition", e.to_string());
    }

    let mut modes = Vec::new();
    let mut rabi = f64::NAN;
    let mut detuning = 0.0;
    match &file.drive {
        None => c.error("drive", "missing [drive] section"),
        Some(d) => {
            let names = match &d.polarization {
                OneOrMany::One(s) => vec![s.clone()],
                OneOrMany::Many(v) => v.clone(),
            };
            if names.is_empty() {
                c.error("drive.polarization", "at least one polarization mode is required");
            }
            for n in names {
                let mode = match n.as_str() {
                    "circular" => PolarizationMode::Circular,
                    "linear" => PolarizationMode::Linear,
                    other => {
                        c.error("drive.polarization", format!("unknown mode {other:?}, expected \"circular\" or \"linear\""));
                        continue;
                    }
                };
                if modes.contains(&mode) {
                    c.error("drive.polarization", format!("mode {n:?} listed twice"));
                } else {
                    modes.push(mode);
                }
            }
            match d.rabi {
                Some(r) => {
                    c.non_negative("drive.rabi", r);
                    rabi = r;
                }
                None => {
                    if !matches!(&file.sweep, Some(s) if s.axis == "rabi") {
                        c.error("drive.rabi", "missing Rabi frequency");
                    }
                }
            }
            c.finite("drive.detuning", d.detuning);
            detuning = d.detuning;
        }
    }

    let mut b0 = f64::NAN;
    match file.medium.as_ref().and_then(|m| m.b0) {
        Some(v) => {
            c.non_negative("medium.b0", v);
            b0_warning(&mut c, "medium.b0", v);
            b0 = v;
        }
        None => {
            if !matches!(&file.sweep, Some(s) if s.axis == "b0") {
                c.error("medium.b0", "missing optical density");
            }
        }
    }

    let input = file.input.clone().unwrap_or_default();
    c.non_negative("input.eps_a", input.eps_a);
    c.non_negative("input.eps_p", input.eps_p);

    let grid = match &file.grid {
        None => {
            c.error("grid", "missing [grid] section");
            None
        }
        Some(g) => resolve_grid(&mut c, g),
    };

    let outputs = match &file.output {
        None => Outputs { optical: true, quadrature: Some(QuadratureSpec::Amplitude), oracles: false },
        Some(o) => {
            let quadrature = match &o.quadrature {
                None => None,
                Some(QuadratureField::Named(s)) if s == "amplitude" => Some(QuadratureSpec::Amplitude),
                Some(QuadratureField::Named(s)) => {
                    c.error("output.quadrature", format!("expected \"amplitude\" or an angle in radians, got {s:?}"));
                    None
                }
                Some(QuadratureField::Angle(a)) => {
                    c.finite("output.quadrature", *a);
                    Some(QuadratureSpec::Relative { offset: *a })
                }
            };
            if !o.optical && quadrature.is_none() && !o.oracles {
                c.error("output", "no observable requested");
            }
            Outputs { optical: o.optical, quadrature, oracles: o.oracles }
        }
    };

    let sweep = file.sweep.as_ref().and_then(|s| {
        let axis = match SweepAxis::parse(&s.axis) {
            Some(a) => a,
            None => {
                c.error("sweep.axis", format!("unknown axis {:?}, expected rabi, detuning, b0 or eps_p", s.axis));
                return None;
            }
        };
        if s.values.is_empty() {
            c.error("sweep.values", "at least one value is required");
        }
        let field = "sweep.values";
        for &v in &s.values {
            match axis {
                SweepAxis::Detuning => c.finite(field, v),
                _ => c.non_negative(field, v),
            }
            if axis == SweepAxis::B0 {
                b0_warning(&mut c, field, v);
            }
        }
        let mut sorted = s.values.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            c.error(field, "values must be distinct");
        }
        Some((axis, s.values.clone()))
    });

    let probe = file.probe.as_ref().map(|p| {
        c.finite("probe.frequency", p.frequency);
        if p.eps_p.is_empty() {
            c.error("probe.eps_p", "at least one value is required");
        }
        for &v in &p.eps_p {
            c.non_negative("probe.eps_p", v);
        }
        if matches!(sweep, Some((SweepAxis::EpsP, _))) {
            c.error("probe.eps_p", "cannot be combined with an eps_p sweep");
        }
        Probe { frequency: p.frequency, eps_p: p.eps_p.clone() }
    });
    if probe.is_some() && outputs.quadrature.is_none() {
        c.error("probe", "probe table needs output.quadrature");
    }

    if c.has_errors() {
        return Err(c.0);
    }
    let plan = Plan {
        name,
        description: file.description.clone(),
        fg,
        fe,
        modes,
        base: PointParams { rabi, detuning, b0, eps_a: input.eps_a, eps_p: input.eps_p },
        grid: grid.expect("grid validated"),
        outputs,
        sweep,
        probe,
    };
    Ok((plan, c.0))
}

fn resolve_grid(c: &mut Collector, g: &GridSection) -> Option<GridSpec> {
    let before = c.0.len();
    let (min, max, count) = match (g.min, g.max, g.count) {
        (Some(a), Some(b), Some(n)) => (a, b, n),
        _ => {
            c.error("grid", "min, max and count are all required");
            return None;
        }
    };
    c.finite("grid.min", min);
    c.finite("grid.max", max);
    if count < 2 {
        c.error("grid.count", format!("must be at least 2, got {count}"));
    }
    if min.is_finite() && max.is_finite() && max <= min {
        c.error("grid", format!("max ({max}) must exceed min ({min})"));
    }
    if g.spacing == Spacing::Log && min <= 0.0 {
        c.error("grid.min", "log spacing needs min > 0");
    }
    if g.symmetrize && min < 0.0 {
        c.error("grid.min", "symmetrize needs min >= 0");
    }
    if c.0[before..].iter().any(|d| d.severity == Severity::Error) {
        return None;
    }
    Some(GridSpec { min, max, count: count as usize, spacing: g.spacing, symmetrize: g.symmetrize })
}
