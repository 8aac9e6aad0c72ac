use thiserror::Error;

/// Errors produced by the fair-measure toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter a = {0} lies outside [sqrt(2), 2]")]
    ParameterOutOfRange(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("symbol at orbit index {index} is within the guard of a discontinuity")]
    AmbiguousSymbols { index: usize },

    #[error("orbit of x = {x} reaches the symbol guard at step {step} before certification")]
    AmbiguousOrbit { x: f64, step: usize },

    #[error("failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("periodic orbit itinerary mismatch: {0}")]
    ItineraryMismatch(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("root isolation failed: {0}")]
    RootIsolationFailure(String),

    #[error("map is not injective on [{lo}, {hi}]")]
    NotInjective { lo: f64, hi: f64 },

    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),

    #[error("no witness found: {0}")]
    WitnessNotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
