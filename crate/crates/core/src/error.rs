use thiserror::Error;

/// Errors raised by the numerical core, the fixture registry and the property harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have dimension at least 1")]
    EmptyMatrix,

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("input is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("input is not positive semidefinite (relative minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("{routine} failed to converge")]
    ConvergenceFailure { routine: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not binormal (relative commutator {commutator:.3e})")]
    NotBinormal { commutator: f64 },

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheoremId(String),

    #[error("unknown class id `{0}`")]
    UnknownClassId(String),

    #[error("fixture `{fixture}` does not reproduce expected verdict for `{class}` (expected {expected})")]
    FixtureMismatch {
        fixture: String,
        class: String,
        expected: bool,
    },

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
