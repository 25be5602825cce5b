use thiserror::Error;

/// Errors raised while constructing or transforming qubit states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("trace is not one (|tr - 1| = {residual:e})")]
    TraceNotOne { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("Bloch vector lies outside the unit ball (|A| = {norm})")]
    BlochOutOfBall { norm: f64 },

    #[error("state vector is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state vector has zero norm")]
    ZeroVector,

    #[error("invalid orthogonal mixture: {0}")]
    InvalidMixture(&'static str),

    #[error("projector is orthogonal to a mixture component (|mu| = {mu:e}, |nu| = {nu:e})")]
    DegenerateProjector { mu: f64, nu: f64 },

    #[error("measurement count must be 1, 2 or 3 (got {0})")]
    InvalidMeasurementCount(usize),

    #[error("probability #{index} = {value} lies outside [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("maximum-entropy state is not positive: measured |A| = {norm} > 1")]
    MaxEntNotPositive { norm: f64 },

    #[error("no pure state reproduces the record: {0}")]
    InconsistentRecord(String),

    #[error("basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("phase grid needs at least {min} points (got {got})")]
    PhaseGridTooSmall { min: usize, got: usize },

    #[error("a sweep needs at least one sample")]
    EmptySweep,

    #[error("determinant {0} lies outside [0, 1/4]")]
    DeterminantOutOfRange(f64),

    #[error("operators are not trace non-increasing (excess {excess:e})")]
    NotTraceNonIncreasing { excess: f64 },

    #[error("channel has no operators")]
    EmptyChannel,
}

pub type Result<T> = std::result::Result<T, Error>;
