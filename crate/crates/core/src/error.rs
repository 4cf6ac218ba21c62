use thiserror::Error;

/// Errors raised by state construction, protocol evaluation and the optimizer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("eigenvalue {value:.3e} is below the PSD clamp threshold")]
    NegativeEigenvalue { value: f64 },

    #[error("partial trace needs at least one subsystem to keep")]
    EmptyKeep,

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("state is not normalized (norm {norm:.17})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Bloch vector lies outside the unit ball (length {length:.17})")]
    OutsideBlochBall { length: f64 },

    #[error("states commute (commutator norm {norm:.3e}); no unique extreme decomposition")]
    CommutingInputs { norm: f64 },

    #[error("states coincide (Bloch distance {distance:.3e})")]
    DegenerateInputs { distance: f64 },

    #[error("protocol is incomplete (completeness residual {residual:.3e})")]
    IncompleteProtocol { residual: f64 },

    #[error("protocol has no Kraus pairs")]
    EmptyProtocol,

    #[error("basis is not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("input states are orthogonal (overlap {overlap:.3e})")]
    OrthogonalInputs { overlap: f64 },

    #[error("non-finite parameter at index {0}")]
    NonFiniteParameter(usize),

    #[error("channel angle {0} is outside (0, pi/4]")]
    InvalidTheta(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
