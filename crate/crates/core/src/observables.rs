// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Optical and quadrature-noise spectra, plus peak analysis of sampled traces.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::field::SpectralTrace;

/// Largest imaginary part tolerated in a quadrature spectrum.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;

/// A real spectrum sampled on an explicit grid (units of Γ).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SpectrumTrace {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return invalid(format!("grid has {} points but {} values were given", grid.len(), values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("spectrum contains non-finite values".into()));
        }
        Ok(SpectrumTrace { grid, values })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Smallest sampled value and where it occurs.
    pub fn min(&self) -> Option<(f64, f64)> {
        self.extremum(|a, b| a < b)
    }

    /// Largest sampled value and where it occurs.
    pub fn max(&self) -> Option<(f64, f64)> {
        self.extremum(|a, b| a > b)
    }

    fn extremum(&self, better: impl Fn(f64, f64) -> bool) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for (&w, &v) in self.grid.iter().zip(&self.values) {
            if best.is_none_or(|(_, b)| better(v, b)) {
                best = Some((w, v));
            }
        }
        best
    }
}

/// Inelastic optical spectrum `S₂₂(Ω)`.
///
/// No negative values are clipped; small negative values can only come from
/// round-off in the far wings.
pub fn optical_spectrum(trace: &SpectralTrace) -> Result<SpectrumTrace> {
    SpectrumTrace::new(trace.grid.clone(), trace.matrices.iter().map(|m| m.s22.re).collect())
}

/// Quadrature noise spectrum at angle `theta` (radians), shot-noise normalized.
pub fn quadrature_noise(trace: &SpectralTrace, theta: f64) -> Result<SpectrumTrace> {
    let mut values = Vec::with_capacity(trace.len());
    for m in &trace.matrices {
        let q = m.quadrature(theta);
        let scale = 1.0f64.max(q.re.abs());
        if q.im.abs() > IMAGINARY_TOLERANCE * scale {
            return Err(Error::ImaginaryResidual { residual: q.im.abs() });
        }
        values.push(q.re);
    }
    SpectrumTrace::new(trace.grid.clone(), values)
}

/// Quadrature angle of the amplitude quadrature, the phase of the mean field.
pub fn amplitude_quadrature_angle(carrier: Complex64) -> Result<f64> {
    if carrier.norm() == 0.0 || !carrier.is_finite() {
        return Err(Error::UndefinedAngle);
    }
    Ok(carrier.arg())
}

/// A local maximum found by [`peak_census`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
    /// Half width at half of the peak height, absent when neither side of the
    /// peak falls below half height on the grid.
    pub hwhm: Option<f64>,
    pub prominence: f64,
}

/// Local maxima whose topographic prominence is at least `prominence` times
/// the global maximum of the trace.
///
/// Plateaus of equal samples count as one maximum located at their center.
pub fn peak_census(trace: &SpectrumTrace, prominence: f64) -> Result<Vec<Peak>> {
    if !(prominence.is_finite() && prominence >= 0.0) {
        return invalid(format!("relative prominence must be non-negative, got {prominence}"));
    }
    if trace.grid.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("peak census needs a strictly increasing grid");
    }
    let y = &trace.values;
    let n = y.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    let top = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = prominence * top.abs();

    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if y[i] > y[i - 1] {
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                let center = (i + j) / 2;
                let prom = topographic_prominence(y, i, j);
                if prom >= threshold {
                    peaks.push(Peak {
                        omega: trace.grid[center],
                        height: y[center],
                        hwhm: half_width(&trace.grid, y, i, j),
                        prominence: prom,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(peaks)
}

/// Height of a maximum occupying `lo..=hi` above the higher of the two
/// lowest points reached before climbing to a higher sample on each side.
fn topographic_prominence(y: &[f64], lo: usize, hi: usize) -> f64 {
    let h = y[lo];
    let mut left_min = h;
    let mut k = lo;
    while k > 0 {
        k -= 1;
        if y[k] > h {
            break;
        }
        left_min = left_min.min(y[k]);
    }
    let mut right_min = h;
    let mut k = hi;
    while k + 1 < y.len() {
        k += 1;
        if y[k] > h {
            break;
        }
        right_min = right_min.min(y[k]);
    }
    h - left_min.max(right_min)
}

/// Linear-interpolated crossing of half height on each side; the mean of
/// the available sides.
fn half_width(grid: &[f64], y: &[f64], lo: usize, hi: usize) -> Option<f64> {
    let center_idx = (lo + hi) / 2;
    let half = 0.5 * y[center_idx];
    let center = grid[center_idx];
    let mut widths = Vec::with_capacity(2);

    let mut k = lo;
    while k > 0 {
        if y[k - 1] <= half {
            let t = (y[k] - half) / (y[k] - y[k - 1]);
            widths.push(center - (grid[k] - t * (grid[k] - grid[k - 1])));
            break;
        }
        if y[k - 1] > y[k] {
            break;
        }
        k -= 1;
    }
    let mut k = hi;
    while k + 1 < y.len() {
        if y[k + 1] <= half {
            let t = (y[k] - half) / (y[k] - y[k + 1]);
            widths.push(grid[k] + t * (grid[k + 1] - grid[k]) - center);
            break;
        }
        if y[k + 1] > y[k] {
            break;
        }
        k += 1;
    }
    if widths.is_empty() {
        None
    } else {
        Some(widths.iter().sum::<f64>() / widths.len() as f64)
    }
}

/// Mirror a trace given on `Ω ≥ 0` onto negative frequencies, assuming an even
/// spectrum. A sample at `Ω = 0` is kept once.
pub fn symmetrize(trace: &SpectrumTrace) -> Result<SpectrumTrace> {
    if trace.grid.iter().any(|w| *w < 0.0) {
        return invalid("symmetrize expects a grid on non-negative frequencies");
    }
    let mut pairs: Vec<(f64, f64)> = trace.grid.iter().copied().zip(trace.values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mirrored = pairs.iter().rev().filter(|(w, _)| *w > 0.0).map(|&(w, v)| (-w, v));
    let all: Vec<(f64, f64)> = mirrored.chain(pairs.iter().copied()).collect();
    SpectrumTrace::new(all.iter().map(|p| p.0).collect(), all.iter().map(|p| p.1).collect())
}
