use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("{value} exceeds the configured primality bound of {bits} bits")]
    PrimalityBound { value: String, bits: u32 },

    #[error("{0} is not a p-adic integer for p = {1}")]
    NotInZp(String, u64),

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap { what: &'static str, needed: String, cap: u64 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polynomial {0} is reducible over Q")]
    Reducible(String),

    #[error("could not certify irreducibility of {0}; assert it explicitly")]
    Uncertified(String),

    #[error("sets live over different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, needed: impl ToString, cap: u64) -> Self {
        Error::ResourceCap { what, needed: needed.to_string(), cap }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
