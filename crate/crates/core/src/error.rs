use thiserror::Error;

/// Errors surfaced by the lattice engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wave vector dimensionality {got} does not match geometry ({expected} expected)")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid model parameters: {0}")]
    ModelInvalid(String),

    #[error(
        "superradiant frame invalid: mu = {mu} > 1, the system is in the normal phase \
         and the macroscopic displacement is not physical"
    )]
    SuperradiantFrameInvalid { mu: f64 },

    #[error("analytic spectrum requires the resonant case omega_a = omega_b = omega_spin")]
    NotApplicable,

    #[error("input matrix is not Hermitian (max deviation {defect:e})")]
    NonHermitian { defect: f64 },

    #[error("operation requires a stable band solution")]
    UnstableSolution,

    #[error("no stability change found in bracket [{lo}, {hi}] at k = {k:?}")]
    BoundaryNotFound { lo: f64, hi: f64, k: String },

    #[error("all sampled wave vectors were unstable; no density of states accumulated")]
    NoStableSamples,

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
