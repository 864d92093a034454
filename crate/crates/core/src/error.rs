use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid physical or numerical parameter.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Kernel evaluated on its diagonal.
    #[error("singular kernel: source and target coincide")]
    Singularity,

    /// The single-layer system is numerically singular, typically because
    /// omega^2 is close to an interior Dirichlet eigenvalue.
    #[error("interior eigenvalue suspected: condition estimate {condition:.3e} exceeds {threshold:.1e}")]
    InteriorEigenvalue { condition: f64, threshold: f64 },

    /// Dense linear algebra broke down.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Malformed or inconsistent input data.
    #[error("data error: {0}")]
    Data(String),

    /// Malformed config or data file.
    #[error("format error (line {line}): {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
