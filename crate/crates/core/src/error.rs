use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("unknown space tag `{0}`")]
    UnknownSpace(String),

    #[error("singular DOF matrix for {what} (condition number {cond:.3e})")]
    SingularDofMatrix { what: String, cond: f64 },

    #[error("field does not provide the derivatives needed by {0}")]
    MissingDerivative(&'static str),

    #[error("least-squares residual {residual:.3e} exceeds {tol:.1e}: {context}")]
    Residual {
        context: String,
        residual: f64,
        tol: f64,
    },

    #[error("linear solver failed: {0}")]
    Solver(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
