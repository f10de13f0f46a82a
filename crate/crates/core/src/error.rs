use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrand is not finite at node {node}: {value}")]
    NonFinite { node: f64, value: Complex64 },

    #[error("gamma({0}) overflows double precision (argument limit is 170)")]
    Overflow(f64),

    #[error("Newton iteration did not converge after {iterations} iterations at p = {p} ({context})")]
    NewtonFailed {
        p: f64,
        iterations: usize,
        context: String,
    },

    #[error("degenerate path at p = {p}: |dg/dz| = {derivative:e} ({context})")]
    DegeneratePath {
        p: f64,
        derivative: f64,
        context: String,
    },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("unknown closed-form path {0:?}")]
    UnknownPath(String),

    #[error("branch failure in corner {corner}: {detail}")]
    Branch { corner: String, detail: String },

    #[error("adaptive quadrature did not converge: value {value}, error estimate {est_error:e}, {subdivisions} subintervals")]
    NotConverged {
        value: Complex64,
        est_error: f64,
        subdivisions: usize,
    },

    #[error("slope fit needs at least 3 rows above the error floor, got {0}")]
    TooFewPoints(usize),
}
