//! Error type shared across the crate.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("N = {num_verts} and n+1 = {dim_plus_one} must be coprime")]
    NotCoprime { num_verts: usize, dim_plus_one: usize },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("the sign system over {{-1,+1}} has no solution for the fixed monodromy lift")]
    SignUnsolvable,

    #[error("lift normalization violated: {0}")]
    NormalizationBroken(String),

    #[error("no real normalization scalars exist for this field (odd-dimension sign obstruction)")]
    NoRealSolution,

    #[error("Cramer denominator D_{0} vanishes")]
    ZeroDenominator(usize),

    #[error("scaling parameter must be nonzero")]
    ZeroParameter,

    #[error("subspace intersection is not transverse: {0}")]
    NotTransverse(String),

    #[error("failed to generate a nondegenerate field after {0} attempts")]
    GenerationFailed(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
