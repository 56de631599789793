use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {t} is outside the domain of {what}")]
    Domain { what: String, t: f64 },

    #[error("iterate {index} left the domain of {what} (value {t})")]
    OrbitExit { what: String, index: usize, t: f64 },

    #[error("non-finite value produced by {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no attracting fixed point found for {0}")]
    NoFixedPoint(String),

    #[error("operation not supported for {0}")]
    Unsupported(String),

    #[error("multiplier {0} is not in (0, 1)")]
    ZeroMultiplier(f64),

    #[error("limit estimate did not converge: {0}")]
    NotConverged(String),

    #[error("candidate sequence is identically zero (start at the fixed point)")]
    Degenerate,

    #[error("comparison hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("Möbius map has no distinct real eigenvalues (discriminant {0})")]
    DegenerateEigen(f64),

    #[error("fixed point {0} coincides with the pole")]
    PoleAtFixedPoint(f64),

    #[error("closed-form iterate hits a pole (denominator {den:e} at t = {t})")]
    PoleHit { t: f64, den: f64 },

    #[error("start {0} is the repelling fixed point")]
    RepellingStart(f64),

    #[error("start {0} makes b + L t0 vanish")]
    PoleStart(f64),

    #[error("fixed point is not attracting (|m| = {0})")]
    NotAttracting(f64),

    #[error("closed-form limit formulas disagree: {0} vs {1}")]
    FormulaMismatch(f64, f64),

    #[error("wrong derivative order for this eigen-function: {0}")]
    WrongOrder(String),

    #[error("series denominator (2L)^n - 2L vanished at n = {0}")]
    NonIntegerGrowth(usize),

    #[error("radicand C + p(θ) is negative at θ = {0}")]
    RadicandNegative(f64),

    #[error("no sign change found while scanning for a root: {0}")]
    NoBracket(String),

    #[error("Koenigs iterate left the principal-branch domain at step {0}")]
    DomainExit(usize),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Parse(_) | Error::Unsupported(_) => 2,
            Error::NotConverged(_) | Error::NoFixedPoint(_) | Error::NoBracket(_) => 4,
            _ => 3,
        }
    }
}
