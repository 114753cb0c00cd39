//! One error type for the whole crate.
//!
//! Variants are grouped by the stage that raises them: lattice and involution
//! validation, subspace searches, move legality, and planning. The CLI maps
//! them onto exit codes; the library never panics on malformed input.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // -- lattice validation --
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse lattice name {0:?}")]
    BadLatticeName(String),

    // -- subspace searches --
    #[error("restricted form on the given span is singular")]
    DegenerateSpan,
    #[error("coefficient box holds {size} vectors, above the cap of {cap}")]
    BoxTooLarge { size: u128, cap: u128 },

    // -- involutions --
    #[error("matrix does not square to the identity")]
    NotInvolutive,
    #[error("matrix does not preserve the bilinear form")]
    NotIsometry,
    #[error("involution search space exceeds the cap of {cap} candidate columns")]
    SearchSpaceTooLarge { cap: u128 },

    // -- period data --
    #[error("triple failed validation: {0}")]
    InvalidTriple(String),
    #[error("{0} must have positive square")]
    NotPositive(&'static str),
    #[error("projecting gamma against omega_minus left no positive square")]
    GammaDegenerate,
    #[error("vector has non-positive square, so it lies outside the positive cone")]
    NotInCone,

    // -- moves --
    #[error("{0}")]
    BadParameter(&'static str),
    #[error("form restricted to the span lacks two positive squares")]
    NotEnoughPositiveSquares,
    #[error("triple is not generic at the requested coefficient bound")]
    NotGeneric,
    #[error("replacement gamma sits in the opposite cone component")]
    WrongComponent,
    #[error("replacement gamma is not orthogonal to omega_minus (residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error("perturbation destroyed positivity; reduce delta")]
    PositivityLost,

    // -- planning --
    #[error("involution is not a real homological type")]
    NotRealType,
    #[error("target class has non-positive square")]
    TargetNotPositive,
    #[error("target class does not lie in the minus eigenlattice")]
    TargetNotInMinus,
    #[error("no generic perturbation found within {attempts} attempts")]
    GenericityUnreachable { attempts: u32 },
    #[error("positive-plane construction failed: {0}")]
    LemmaFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
