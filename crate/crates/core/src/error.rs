// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("numerical rank failure: expected kernel dimension {expected}, found {found}")]
    NumericalRank { expected: usize, found: usize },

    #[error("degenerate kernel: biorthogonality matrix is singular")]
    DegenerateKernel,

    #[error("problem too large for dense representation: {0}")]
    TooLarge(String),

    #[error("trace drift {drift:.3e} exceeds tolerance")]
    TraceDrift { drift: f64 },

    #[error("density matrix lost positivity (min eigenvalue {min_eigenvalue:.3e})")]
    Positivity { min_eigenvalue: f64 },

    #[error("non-finite entries produced during {0}")]
    NonFinite(&'static str),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("optimizer minimum at search boundary (coupling {coupling:.4e})")]
    OptimizerAtBoundary { coupling: f64 },

    #[error("linear algebra failure: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::IndexOutOfRange { .. }
            | Error::Unsupported(_)
            | Error::TooLarge(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            Error::OptimizerAtBoundary { .. } => 4,
            _ => 3,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
