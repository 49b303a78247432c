//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("operands use different variable tables")]
    VarTableMismatch,
    #[error("series inverse requires an invertible constant term")]
    ZeroConstantTerm,
    #[error("series inverse requires all non-constant terms to have positive root degree")]
    NonPositiveRootDegree,
    #[error("variable `{0}` is not registered")]
    UnknownVariable(String),
    #[error("channel {0} out of range (series has {1} channels)")]
    ChannelOutOfRange(usize, usize),
    #[error("channel {0} carries no symbol in this monomial")]
    MissingChannelSymbol(usize),
    #[error("channel {0} claimed by both factors of a disjoint product")]
    ChannelOverlap(usize),
    #[error("half-integral operator (2 - bT)^-1 requested in integral mode")]
    HalfIntegralDisallowed,
    #[error("operator factor with negative raising power inside truncated expansion")]
    NegativeShiftInExpansion,
    #[error("segre conversion requires c-kind symbols on channel {0}")]
    SegreOnEulerChannel(usize),
    #[error("invalid triple:\n{}", .0.join("\n"))]
    InvalidTriple(Vec<String>),
    #[error("triple has no gap to inflate")]
    NoGap,
    #[error("localization sum is not a polynomial: remainder after dividing by `{0}`")]
    NonPolynomialSum(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("shape error: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
