use thiserror::Error;

/// Errors reported by the simulator core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: max |a - a†| = {max_dev:e} exceeds {tol:e}")]
    NotHermitian { max_dev: f64, tol: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("partial trace requires a nonempty set of labels to keep")]
    EmptyKeep,

    #[error("expected a layout with {expected} factors, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("state vector is not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),

    #[error("density operator trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("density operator has eigenvalue {0} below the positivity floor")]
    NegativeEigenvalue(f64),

    #[error("measurement strength {0} is outside [0, 1]")]
    EpsilonOutOfRange(f64),

    #[error("measurement angle {0} is not finite")]
    NonFiniteAngle(f64),

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("distribution sums to {0}, expected 1")]
    NotADistribution(f64),

    #[error("distribution has negative entry {0}")]
    NegativeProbability(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
