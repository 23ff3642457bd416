use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole hit at {re}{im:+}i")]
    PoleHit { re: f64, im: f64 },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("decay estimate failure: {0}")]
    DecayEstimateFailure(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("bad gluing: {0}")]
    BadGluing(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("bad loop: {0}")]
    BadLoop(String),
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("boundary degeneration: {0}")]
    BoundaryDegeneration(String),
    #[error("not critical: {0}")]
    NotCritical(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pole(z: num_complex::Complex64) -> Self {
        Error::PoleHit { re: z.re, im: z.im }
    }
}
