use thiserror::Error;

/// Errors produced by the decomposition library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u32),

    #[error("p = {0} exceeds the supported maximum {max}", max = crate::fp::MAX_PRIME)]
    PrimeTooLarge(u32),

    #[error("n must be at least {min} (got {n})")]
    RankTooSmall { n: usize, min: usize },

    #[error("n = {0} exceeds the supported maximum {max}", max = crate::group::MAX_RANK)]
    RankTooLarge(usize),

    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: u32, got: u32 },

    #[error("residue {value} out of range for modulus {modulus}")]
    ResidueOutOfRange { value: u32, modulus: u32 },

    #[error("vectors must have length at least 1")]
    EmptyVector,

    #[error("functional must be nonzero")]
    ZeroFunctional,

    #[error("index set {0:?} is not a subset of the generator indices 0..={1}")]
    IndexOutOfRange(Vec<usize>, usize),

    #[error("quotient by {size} generators is not a curve quotient (need at most n - 1 = {max})")]
    QuotientTooLarge { size: usize, max: usize },

    #[error(
        "functional does not define an admissible subgroup: it vanishes on generator image {0}"
    )]
    NotAdmissible(usize),

    #[error("subgroup acts with fixed points (contains generator {0}); pullback kernel undefined")]
    NotEtale(usize),

    #[error("no factor of positive dimension for n = {n}, |T| = {t}, p = {p}")]
    NoFactor { n: usize, t: usize, p: u32 },

    #[error(
        "enumeration of {required} items exceeds the budget of {limit}; pass --force to override"
    )]
    BudgetExceeded { required: u128, limit: u128 },

    #[error("Riemann-Hurwitz balance does not close: {0}")]
    RiemannHurwitz(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
