use thiserror::Error;

/// Errors surfaced by the certificate library.
///
/// Every rejected input names the violated precondition; nothing is
/// approximated or silently clamped.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("coordinate indices are 1-based; index 0 is invalid")]
    InvalidIndex,

    #[error("generator {a} and generator {b} share support coordinate {index}")]
    OverlappingSupports { a: usize, b: usize, index: u64 },

    #[error("generator {0} is the zero vector")]
    ZeroGenerator(usize),

    #[error("expected a nonzero input")]
    ZeroInput,

    #[error("expected unit l1 norm, got {got}")]
    NotUnitNorm { got: String },

    #[error("functional must be a pure combination (zero correction part)")]
    NotPureCombo,

    #[error("expected functional norm 1, got {got}")]
    FunctionalNotUnit { got: String },

    #[error("epsilon must be nonnegative, got {got}")]
    NegativeEpsilon { got: String },

    #[error("scalar part b0 must be nonzero")]
    ZeroScalarPart,

    #[error("expected ||x0*|| + |b0| = 1, got {got}")]
    NotNormalizedSum { got: String },

    #[error("sign pattern is empty")]
    EmptyPattern,

    #[error(
        "pattern witness exceeds the representable index range \
         (constraint at generator index {index})"
    )]
    WitnessOverflow { index: u64 },

    #[error("double-norming block 2^{k} exceeds the representable index range")]
    BlockIndexOverflow { k: u64 },

    #[error("net must contain at least one point")]
    EmptyNet,

    #[error("net point {0} is not on the unit sphere")]
    NetPointNotUnit(usize),

    #[error("net point {point} uses coordinate {index} outside dimension {dim}")]
    PointOutsideDimension { point: usize, index: u64, dim: u64 },

    #[error("covering-radius oracle is capped at dimension {max}, got {got}")]
    DimensionTooLarge { got: u64, max: u64 },

    #[error("covering-radius oracle is capped at {max} net points, got {got}")]
    NetTooLarge { got: usize, max: usize },

    #[error("block index {n} is not past the stabilization bound {bound}")]
    BelowStabilizationBound { n: u64, bound: u64 },

    #[error("model has no block {0}")]
    UnknownBlock(u64),

    #[error("sample list is empty")]
    EmptySamples,

    #[error("explicit model blocks must be nonempty, disjoint, with 1-based indices")]
    InvalidBlocks,

    #[error("r must be positive, got {got}")]
    NonPositiveR { got: String },

    #[error("seminorm oracle not stabilizing: p(x + r y_n) varies over the check window at n = {n}")]
    NotStabilizing { n: u64 },

    #[error("r grid must be strictly increasing and positive")]
    BadGrid,

    #[error("p_r increased along the r grid between r = {r_lo} and r = {r_hi}")]
    NonMonotoneGrid { r_lo: String, r_hi: String },

    #[error("certificate recomputation mismatch: {0}")]
    CertificationFailed(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("unknown check {0:?}")]
    UnknownCheck(String),

    #[error("invalid suite config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
