use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("multiplication table is not square or has entries out of range: {0}")]
    MalformedTable(String),
    #[error("associativity fails at ({0},{1},{2})")]
    NonAssociative(usize, usize, usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    MissingInverse(usize),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("{what} is {value}, exceeding the cap of {cap}")]
    CapExceeded { what: String, value: u128, cap: u128 },
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("group of order {0} is not cyclic")]
    NotCyclic(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("resolution window [{have_lo}, {have_hi}] does not cover required degrees [{need_lo}, {need_hi}]")]
    WindowTooSmall { need_lo: i64, need_hi: i64, have_lo: i64, have_hi: i64 },
    #[error("mismatched groups: {0}")]
    GroupMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
