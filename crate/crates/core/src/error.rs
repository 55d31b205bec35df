use thiserror::Error;

/// Errors produced by the simulation and metrology pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("atoms {first} and {second} coincide (zero separation)")]
    CoincidentAtoms { first: usize, second: usize },

    #[error("kernel argument out of domain: x = {0}")]
    KernelDomain(f64),

    #[error("eigensolver did not converge: {0}")]
    EigenSolver(String),

    #[error("eigenpair {index} failed the residual gate: residual {residual:e} > {bound:e}")]
    Residual {
        index: usize,
        residual: f64,
        bound: f64,
    },

    #[error("coupling matrix numerically singular at detuning {detuning} (condition estimate {condition:e})")]
    SingularCoupling { detuning: f64, condition: f64 },

    #[error("no spectral feature within 3 linewidths of the hint at {hint}")]
    FeatureNotFound { hint: f64 },

    #[error("grid too narrow to bracket the feature around {center}")]
    GridTooNarrow { center: f64 },

    #[error("finite-difference derivative unconverged: relative disagreement {rel_diff:e}")]
    DerivativeUnconverged { rel_diff: f64 },

    #[error("guided-photon probability underflow: p_g = {0:e}")]
    GuidedProbabilityUnderflow(f64),

    #[error("nonpositive value {value} where a positive one is required ({what})")]
    NonPositive { what: &'static str, value: f64 },

    #[error("formula outside its regime: {0}")]
    OutOfRegime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
