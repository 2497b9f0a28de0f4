use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("modulus {coeffs:?} is not a monic irreducible polynomial of degree {degree}")]
    ReducibleModulus { coeffs: Vec<u32>, degree: u32 },

    #[error("element {0} is not a primitive element of the field")]
    NotPrimitive(u32),

    #[error("class count {n} does not divide q - 1 = {order}")]
    ClassCountMismatch { n: usize, order: usize },

    #[error("negation class shift is undefined in characteristic 2")]
    EvenCharacteristic,

    #[error("class index {index} out of range for {n} classes")]
    ClassIndexOutOfRange { index: usize, n: usize },

    #[error("no primitive element makes the blocks pass ({tried} candidates tried)")]
    GeneratorSearchExhausted { tried: usize },

    #[error("matrix order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("developed block has a row or column sum of {sum} at index {index}; the bordered array needs +1")]
    RowSumViolation { index: usize, sum: i64 },

    #[error("matrix fails the Gate0 identities")]
    Gate0Failed,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("affine multiplier {0} is not in the class C_0")]
    MultiplierNotInBaseClass(u32),

    #[error("automorphism check failed for {0}")]
    AutomorphismRejected(String),

    #[error("sketch dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sketch input contains a non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid sketch configuration: {0}")]
    InvalidSketchConfig(String),

    #[error("malformed sketch packet: {0}")]
    MalformedPacket(String),

    #[error("invalid manifest: {0}")]
    Manifest(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
