use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series caps differ ({0} vs {1})")]
    CapMismatch(usize, usize),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("residue {i} is outside 1..{p}")]
    BadResidue { p: u64, i: u64 },
    #[error("no image given for generator x{0}")]
    MissingImage(u32),
    #[error("left-normed tail contains the empty word")]
    EmptyWordInTail,
    #[error("constant term is not the one required ({0})")]
    BadConstantTerm(String),
    #[error("degree {requested} exceeds operator cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("group ring degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("vector entry {index} is not an integer")]
    IntegralityLost { index: usize },
    #[error("vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("polynomial has a word outside the coordinate space")]
    OutsideSpace,
    #[error("hypothesis n ≢ 1 mod (p−1) not met (n = {n}, p = {p})")]
    HypothesisNotMet { p: u64, n: usize },
    #[error("hypothesis n ≢ 1 mod (p−1) never holds for p = 2")]
    HypothesisNeverHolds,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("smoothing left a nonzero component of degree {0} below n")]
    NonvanishingLowerTerms(usize),
}
