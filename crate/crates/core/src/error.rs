use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid potential parameters: {0}")]
    InvalidParams(ValidationReport),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no real termination root for n = {n}, m = {m}")]
    NoTerminationRoot { n: u32, m: u32 },

    /// The integrand behaves like r^exponent at the origin with exponent <= -1.
    #[error("divergent moment: integrand ~ r^{exponent} at the origin ({context})")]
    DivergentMoment { exponent: f64, context: String },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {value:e} +/- {error:e})")]
    QuadratureNonConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("eigensolver: {0}")]
    Eigensolver(String),
}
