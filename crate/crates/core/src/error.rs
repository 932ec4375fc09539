use thiserror::Error;

/// Errors produced by the test pipeline, the samplers and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix that must be positive definite failed its Cholesky
    /// factorization. `pivot` is the smallest diagonal pivot encountered.
    #[error("singular pencil: matrix is not positive definite (smallest pivot {pivot:.3e})")]
    SingularPencil { pivot: f64 },

    /// The sample moment matrices are rank deficient. The condition T/N > 2
    /// is important: for T/N < 2 the two residual subspaces necessarily
    /// intersect and the largest canonical correlation is identically 1.
    #[error("degenerate sample: {0} (requires T/N > 2)")]
    DegenerateSample(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported table schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
