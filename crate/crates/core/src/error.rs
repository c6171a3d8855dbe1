use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial has a complex root (|imaginary part| = {imag:e})")]
    ComplexRoots { imag: f64 },

    #[error("recovered roots collide (gap {gap:e} below tolerance {tol:e})")]
    RootCollision { gap: f64, tol: f64 },

    #[error("velocity component {index} is not positive ({value})")]
    NonPositiveVelocity { index: usize, value: f64 },

    #[error("momentum component {index} is negative ({value})")]
    NegativeMomentum { index: usize, value: f64 },

    #[error("momentum component {index} is not positive ({value})")]
    NonPositiveMomentum { index: usize, value: f64 },

    #[error("degenerate ray: Q_{i}P_{j} - Q_{j}P_{i} vanishes")]
    DegenerateRay { i: usize, j: usize },

    #[error("particle collision at t = {t} (gap {gap:e})")]
    CollisionDetected { t: f64, gap: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("eigenvalue collision at t = {t} (gap {gap:e})")]
    EigenvalueCollision { t: f64, gap: f64 },

    #[error("matrix spectrum is not real (|imaginary part| = {imag:e})")]
    NonRealSpectrum { imag: f64 },

    #[error("matrix eigenvalue {value} is not positive")]
    NonPositiveEigenvalue { value: f64 },

    #[error("polynomial root {value} is not positive")]
    NonPositiveRoot { value: f64 },

    #[error("evaluation point too close to the pole at a_{index}")]
    PoleProximity { index: usize },

    #[error("gradient unavailable: {0}")]
    GradientUnavailable(String),

    #[error("total velocity P vanishes")]
    ZeroTotalVelocity,
}
