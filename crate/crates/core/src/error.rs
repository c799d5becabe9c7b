use thiserror::Error;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },

    #[error("evaluation domain error: {0}")]
    EvalDomain(String),

    #[error("point ({}, {}, {}) is outside the manifold domain: {reason}", .point[0], .point[1], .point[2])]
    DomainViolation { point: [f64; 3], reason: String },

    #[error("zero tangent vector")]
    ZeroVector,

    #[error("orthonormal q-base solve did not converge after {starts} starts (best residual {residual:e})")]
    SolveFailure { starts: usize, residual: f64 },

    #[error("degenerate section: vectors are (numerically) linearly dependent")]
    DegenerateSection,

    #[error("point is not in class V2 (residual {residual:e} > tolerance {tol:e})")]
    NotInV2 { residual: f64, tol: f64 },

    #[error("vectors u, qu, q^2 u are linearly dependent")]
    DependentVector,

    #[error("angle between u and qu is at the 2pi/3 boundary (1 + cos = {0:e})")]
    DegenerateAngle(f64),

    #[error("no sampled point satisfies the domain constraints ({attempts} attempts)")]
    EmptySample { attempts: usize },

    #[error("unknown built-in manifold `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid manifold spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io(e.to_string())
    }
}
