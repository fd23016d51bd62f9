use thiserror::Error;

/// Errors raised by the numerical routines and state validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^H| entry is {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite: most negative eigenvalue is {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("Bloch vector norm {norm} exceeds 1")]
    NormExceeded { norm: f64 },

    #[error("invalid dimension {0}")]
    InvalidDim(usize),

    #[error("rapidity diverges for Bloch norm {norm} (pure or near-pure state)")]
    PureStateSingularity { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("invalid sampler spec: {0}")]
    InvalidSpec(String),

    #[error("invalid state file: {0}")]
    Parse(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_trial(self, trial: usize) -> Self {
        Error::Trial { trial, source: Box::new(self) }
    }
}
