use thiserror::Error;

use crate::symexpr::{ParseError, Verdict};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("duplicate coordinate name `{0}`")]
    DuplicateName(String),

    #[error("fiber coordinate `{fiber}` for `{base}` collides with an existing name")]
    NameCollision { base: String, fiber: String },

    #[error("`{0}` is not a valid coordinate identifier")]
    InvalidName(String),

    #[error("empty chart")]
    EmptyChart,

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("operands live on different charts")]
    ChartMismatch,

    #[error("expected a {expected} chart")]
    ChartKind { expected: &'static str },

    #[error("expected degree {expected}, found {found}")]
    Degree { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("expression contains sqrt; exact canonical form is only defined on the rational fragment")]
    Fragment,

    #[error("division by zero")]
    DivisionByZero,

    #[error("variable `{0}` has no assigned value")]
    MissingAssignment(String),

    #[error("sqrt of negative value {0}")]
    NegativeSqrt(f64),

    #[error("zero test indeterminate: evaluation failed at {attempts} sample points")]
    Indeterminate { attempts: usize },

    #[error("tensor fails the Jacobi identity: {0}")]
    NotPoisson(Verdict),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("constructed tensor fails the Jacobi identity: {0}")]
    JacobiFailed(Verdict),

    #[error("component {component} is not a homogeneous linear form: {expr}")]
    NotLinear { component: String, expr: String },

    #[error("structure constants violate {0}")]
    NotLieAlgebra(String),

    #[error("linear map is singular")]
    SingularMap,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("line {line}: {message}")]
    Document { line: usize, message: String },

    #[error("unresolved name `{0}`")]
    Unresolved(String),
}
