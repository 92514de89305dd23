use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector has length {found}, expected rank {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("{0} is not a root of type C")]
    NotARoot(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("commutator of opposite roots {0} and its negative lies in the torus")]
    OppositeRoots(String),
    #[error("invalid Weyl element: {0}")]
    InvalidWeylElement(String),
    #[error("expected an even total, got {0}")]
    OddTotal(u64),
    #[error("partition {0} is not symplectic: an odd part has odd multiplicity")]
    NotSymplectic(String),
    #[error("partition totals differ: {0} vs {1}")]
    TotalMismatch(u64, u64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("orbit {0} is outside the supported character families")]
    UnsupportedFamily(String),
    #[error("coefficient {index} is zero where a nonzero value is required")]
    ZeroCoefficient { index: usize },
    #[error("wrong number of coefficients: expected {expected}, got {found}")]
    DataLength { expected: usize, found: usize },
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("character is not supported on V_2 of the orbit: {0}")]
    NotOnV2(String),
    #[error("invalid root set: {0}")]
    InvalidRootSet(String),
    #[error("beta {0} is not in the support of the character")]
    BetaNotInSupport(String),
    #[error("field context: {0}")]
    FieldContext(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("distinguished signs differ")]
    SignMismatch,
    #[error("sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{0}")]
    Parse(#[from] crate::dsl::ParseError),
    #[error("malformed data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
