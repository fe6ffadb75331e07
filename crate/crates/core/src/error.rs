// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate steady state: generator null space has dimension {dimension}")]
    DegenerateSteadyState { dimension: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature spectrum has imaginary residual {residual:e}")]
    ImaginaryResidual { residual: f64 },

    #[error("carrier amplitude is zero, quadrature angle is undefined")]
    UndefinedAngle,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
