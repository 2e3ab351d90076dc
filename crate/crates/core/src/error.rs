use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("couplings must satisfy a1 >= 0 and a2 <= 0 (got a1 = {a1}, a2 = {a2})")]
    InvalidCouplings { a1: f64, a2: f64 },
    #[error("degenerate couplings: a1 = a2 = 0 defines no state")]
    DegenerateCouplings,
    #[error("a1 = |a2| has no pure component; use the superposition weights directly")]
    SpinGlassPoint,
    #[error("value {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid lattice extent: {0}")]
    InvalidExtent(String),
    #[error("coordination number is not uniform (min {min}, max {max})")]
    NonUniformCoordination { min: usize, max: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("quadrature for {quantity} diverged: error estimate {estimate:e} exceeds {limit:e}")]
    QuadratureDivergence {
        quantity: &'static str,
        estimate: f64,
        limit: f64,
    },
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
}
