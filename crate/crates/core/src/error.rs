use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported reduction: {0}")]
    UnsupportedReduction(String),

    /// A non-reference mode with zero detuning and zero bandwidth mismatch makes the
    /// quasi-static denominators vanish.
    #[error("mode q={q} is degenerate with the reference mode")]
    SingularMode { q: i32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("lambda = {lambda} coincides with a pole of the secular function")]
    Pole { lambda: Complex64 },

    #[error("linearized correction is near-singular (|P| = {magnitude:e})")]
    NearSingular { magnitude: f64 },

    #[error("eigensolver did not converge after {iterations} iterations: {detail}")]
    Solver { iterations: usize, detail: String },

    #[error("time step {dt} exceeds the stability limit; use dt <= {suggested}")]
    StepSize { dt: f64, suggested: f64 },

    #[error("matrix is not in arrowhead form: {0}")]
    NotArrowhead(String),

    #[error("harmonic fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
