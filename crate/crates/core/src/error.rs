//! Error type shared across the crate.

/// Errors produced by the exact-arithmetic pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("2-adic valuation of zero is undefined")]
    ZeroValuation,

    #[error("value {0} is not 2-integral (even denominator)")]
    NotTwoIntegral(String),

    #[error("cannot invert an even residue")]
    NonUnit,

    #[error("x = {x} is outside the Hurwitz domain (needs v2(x) <= -2)")]
    OutsideHurwitzDomain { x: String },

    #[error("expansion point {0} is a pole")]
    PoleAtExpansionPoint(String),

    #[error("pole at evaluation point {0}")]
    PoleAtEvaluationPoint(String),

    #[error("incomplete pole list: {0}")]
    IncompletePoleList(String),

    #[error("partial fraction reassembly mismatch: {0}")]
    Reassembly(String),

    #[error("direct Volkenborn sums did not stabilize: {0}")]
    NonStabilizing(String),

    #[error("insufficient 2-adic precision: {0}")]
    PrecisionShortfall(String),

    #[error("zeta_2({j}) lies on the vanishing branch; only odd j >= 3 is supported")]
    VanishingBranch { j: i64 },

    #[error("denominator polynomial is zero")]
    ZeroDenominator,

    #[error("{path}:{line}: {message}")]
    CacheFormat {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
