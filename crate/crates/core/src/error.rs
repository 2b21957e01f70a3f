use thiserror::Error;

/// Errors raised by the sampling and reconstruction routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects disagree on dimension or extents.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A value lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// A comb was requested for a lattice not covered by the sample set.
    #[error("missing samples: {0}")]
    MissingSamples(String),

    /// A result that should be real carries a non-negligible imaginary part.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The least-squares oracle could not fit the samples with a bandlimited image.
    #[error("inconsistent samples: residual {residual:.3e} exceeds {limit:.3e}")]
    InconsistentSamples { residual: f64, limit: f64 },

    /// The brute-force oracle refuses grids above its size guard.
    #[error("grid of {points} points exceeds the oracle guard of {limit}")]
    SizeGuard { points: usize, limit: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Malformed text input (collection strings, parameter lists, sample files).
    #[error("parse error: {0}")]
    Parse(String),

    /// Wrong magic number or corrupt binary layout.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
