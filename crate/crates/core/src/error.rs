use thiserror::Error;

/// Failures reported by the gas-dynamics routines.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in, so the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gas model: gamma = {gamma} (must exceed 1)")]
    InvalidGamma { gamma: f64 },

    #[error("non-physical state: rho = {rho}, p = {p}")]
    NonPhysical { rho: f64, p: f64 },

    #[error("solver blow-up at step {step}, cell {cell}: rho = {rho}, p = {p}")]
    BlowUp { step: usize, cell: usize, rho: f64, p: f64 },

    #[error("solver blow-up at step {step}, cell ({i}, {j}): rho = {rho}, p = {p}")]
    BlowUp2D { step: usize, i: usize, j: usize, rho: f64, p: f64 },

    #[error("vacuum generated: pressure positivity condition {condition} <= 0")]
    Vacuum { condition: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations: p = {last}, residual = {residual}")]
    NoConvergence { iterations: usize, last: f64, residual: f64 },

    #[error("matrix is singular to working precision (pivot {pivot})")]
    SingularMatrix { pivot: f64 },

    #[error("rank test inconclusive: singular value {sigma} lies in the gap above threshold {threshold}")]
    RankInconclusive { sigma: f64, threshold: f64 },

    #[error("degenerate face: endpoints coincide")]
    DegenerateFace,

    #[error("non-positive cell area {area} at cell ({i}, {j})")]
    InvalidCell { i: usize, j: usize, area: f64 },

    #[error("ill-conditioned 2D wave-strength denominator {denominator} (threshold {threshold})")]
    IllConditionedStrengths { denominator: f64, threshold: f64 },

    #[error("error norm undefined: {0}")]
    NoReference(String),

    #[error("EOC undefined: errors must be positive and spacings distinct")]
    InvalidEoc,

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
