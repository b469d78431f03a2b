use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("parameter map is not invertible: {0}")]
    NonInvertible(&'static str),
    #[error("gamma parameter {0} is zero or a negative integer; the exponent-0 Frobenius solution does not exist")]
    DegenerateGamma(String),
    #[error("epsilon = alpha + beta - gamma - delta + 1 violated by {0:e}")]
    EpsilonRelation(f64),
    #[error("singularity location must differ from 0 and 1")]
    CoincidentSingularity,
    #[error("point |z| = {0} lies outside the series disk")]
    OutsideSeriesDisk(f64),
    #[error("continuation path passes within {distance:e} of a singular point (minimum {min_clearance})")]
    PathTooClose { distance: f64, min_clearance: f64 },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("extremal rotation a >= M is not supported")]
    ExtremalNotSupported,
    #[error("invalid physical configuration: {0}")]
    InvalidConfig(String),
    #[error("assembled local solution fails residual check: {residual:e}")]
    DerivationFailure { residual: f64 },
    #[error("Heun evaluation failed: {0}")]
    EvaluationFailure(String),
    #[error("Heun factor vanishes at the matching point; residual has a pole")]
    PoleAtMatchPoint,
    #[error("alpha = 0, jet condition undefined")]
    AlphaZero,
    #[error("radial branch is not valid for this frequency")]
    BranchInvalid,
    #[error("Jacobian is singular")]
    JacobianSingular,
    #[error("continuation track lost at a = {0}")]
    TrackLost(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Wraps an inner failure as an evaluation failure, keeping the message.
    pub fn evaluation(inner: Error) -> Error {
        match inner {
            e @ Error::EvaluationFailure(_) => e,
            e @ Error::PoleAtMatchPoint => e,
            e => Error::EvaluationFailure(e.to_string()),
        }
    }
}
