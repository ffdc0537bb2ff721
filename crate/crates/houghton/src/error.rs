use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ray count must be at least 2, got {0}")]
    BadRayCount(usize),
    #[error("translation vector has length {got}, expected {expected}")]
    BadTranslation { expected: usize, got: usize },
    #[error("translations sum to {0}, expected 0")]
    ZeroSumViolation(i64),
    #[error("the induced map on the ray system is not a bijection")]
    NotBijective,
    #[error("point ({ray},{pos}) has position below 1")]
    BadPoint { ray: usize, pos: i64 },
    #[error("ray index {ray} out of range for {n} rays")]
    RayOutOfRange { ray: usize, n: usize },
    #[error("generator indices must differ, got i = j = {0}")]
    SameRay(usize),
    #[error("transposition endpoints must differ")]
    EqualPoints,
    #[error("elements live in different ray systems ({0} vs {1} rays)")]
    RayCountMismatch(usize, usize),
    #[error("element is not finitary")]
    NotFinitary,
    #[error("the letter t is only available in H_2, not with {0} rays")]
    TauOutsideH2(usize),
    #[error("parse error at byte {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    #[error("operation requires at least three rays, got {0}")]
    NeedThreeRays(usize),
    #[error("element does not permute initial segments ray by ray")]
    WrongShape,
    #[error("search budget exceeded ({0} elements)")]
    Budget(usize),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("subgroup parameter p must be at least 1, got {0}")]
    BadP(i64),
    #[error("witness depth k must be at least 1, got {0}")]
    BadDepth(i64),
    #[error("cannot include {n} rays into {m}")]
    Shrinking { n: usize, m: usize },
    #[error("ray permutation acts on {got} rays, element has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("element is not a member of U_p for p = {0}")]
    NotInUp(i64),
    #[error("the commensuration datum is trivial")]
    TrivialPhi,
    #[error("invalid commensuration datum: {0}")]
    BadNpElement(String),
    #[error("invalid record: {0}")]
    BadRecord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
