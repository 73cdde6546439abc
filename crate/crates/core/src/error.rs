use alloc::string::String;

/// Errors raised by the geometric and algebraic kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable lists of the operands differ")]
    VariableMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate frame: all 2x2 minors vanish")]
    DegenerateFrame,
    #[error("singular coefficient matrix (ad - bc = 0)")]
    SingularAction,
    #[error("invalid chart index pair ({0}, {1})")]
    InvalidChart(usize, usize),
    #[error("point is not in chart U{0}{1}")]
    NotInChart(u8, u8),
    #[error("not a Pluecker point: {0}")]
    NotPluecker(&'static str),
    #[error("invalid coefficient vector: {0}")]
    InvalidCoefficients(&'static str),
    #[error("point is off the hypersurface (residual {residual:e} > {bound:e})")]
    OffHypersurface { residual: f64, bound: f64 },
    #[error("tangent vector {index} is not tangent (relative |df(t)| = {value:e})")]
    NotTangent { index: usize, value: f64 },
    #[error("all partial derivatives vanish (max |df| = {0:e})")]
    SingularPoint(f64),
    #[error("point is off the normalized real locus (|P-1| = {p:e}, |N-1| = {n:e})")]
    OffLocus { p: f64, n: f64 },
    #[error("sampler did not converge after {0} redraws")]
    NoConvergence(usize),
    #[error("rank deficiency: expected {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("vanishing vector")]
    ZeroVector,
    #[error("vectors are not orthogonal (dot = {0:e})")]
    NotOrthogonal(f64),
    #[error("matrix is not a rotation")]
    NotRotation,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
