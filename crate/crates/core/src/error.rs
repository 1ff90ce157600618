use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one failure mode of
/// an operation; the CLI turns them into exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("could not factor {value}: composite cofactor {cofactor} survived the effort budget")]
    FactorizationIncomplete { value: BigUint, cofactor: BigUint },

    #[error("{a} is not coprime to {modulus}")]
    NotCoprime { a: String, modulus: String },

    #[error("modulus {0} must be odd")]
    EvenModulus(u64),

    #[error("no exponent vector gives -1 mod {0}; the congruence is unsolvable")]
    Unsolvable(u64),

    #[error("search depth must be at least 1, got {0}")]
    DepthInvalid(u32),

    #[error("{a} + {b} is not divisible by {c}")]
    CongruenceFails { a: BigUint, b: BigUint, c: u64 },

    #[error("key number {l} fails L^2 = -{d} mod {c}")]
    KeyNumberInvalid { l: i64, d: u64, c: u64 },

    #[error("no admissible principal power found for j <= {j_max}")]
    NotFound { j_max: u32 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("premise fails: {0}")]
    PremiseFails(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("value does not fit in a machine word: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn not_coprime(a: impl ToString, modulus: impl ToString) -> Self {
        Error::NotCoprime {
            a: a.to_string(),
            modulus: modulus.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
