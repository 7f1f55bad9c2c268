use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by field evaluation, boundary search and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("observation point lies within {guard:e} wavelengths of a source at distance {distance:e}")]
    Singularity { distance: f64, guard: f64 },

    #[error("far-field sample is inconsistent: E- and H-based estimates differ by {discrepancy:e} (allowed {tolerance:e})")]
    InconsistentFarField { discrepancy: f64, tolerance: f64 },

    #[error("projection onto the array normal changes sign across elements at r = {r}")]
    UndefinedProjection { r: f64 },

    #[error("worst-case mismatch tail is not decreasing over the last decade below r = {r_max}")]
    TailNotMonotone { r_max: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}:{line}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("trace {path}: {message}")]
    Trace { path: PathBuf, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that come from reading or writing files rather than
    /// from invalid content.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
