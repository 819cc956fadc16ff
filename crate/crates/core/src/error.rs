use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rules: {0}")]
    InvalidRules(String),

    #[error("position has {got} coordinates, rules expect {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The pass variant was handed to a plain-position operation, or the reverse.
    #[error("{0}")]
    WrongOperation(String),

    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),

    #[error("no closed form for {0}; use the oracle")]
    NoClosedForm(String),

    #[error("position {position:?} lies outside the region {maxima:?}")]
    OutOfRegion {
        position: Vec<u64>,
        maxima: Vec<u64>,
    },

    #[error("region too large: {0}")]
    RegionTooLarge(String),

    #[error("arithmetic overflow evaluating {0:?}")]
    Overflow(Vec<u64>),

    #[error("terminal position has no moves")]
    Terminal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A theorem predicted a counterexample that the oracle could not find.
    #[error("no witness found: {0}")]
    NoWitness(String),
}
