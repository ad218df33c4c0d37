use alloc::boxed::Box;
use alloc::string::String;

/// Errors produced by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A lookup table does not reach far enough for the request.
    #[error("{table} table too small: need {needed}, limit is {limit}")]
    TableTooSmall {
        table: &'static str,
        needed: u64,
        limit: u64,
    },

    /// Factorization left a cofactor that the prime table cannot certify.
    #[error("prime table (limit {limit}) cannot factor residual cofactor {cofactor}")]
    UnfactoredCofactor { cofactor: u64, limit: u64 },

    #[error(
        "brute-force enumeration of {requested} pairs exceeds the cap of {cap}; \
         use the Möbius method or raise the cap"
    )]
    BruteForceCap { requested: u128, cap: u64 },

    #[error("enumeration of {requested} cells exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("congruences {r1} mod {m1} and {r2} mod {m2} have no common solution")]
    Unsolvable { r1: u64, m1: u64, r2: u64, m2: u64 },

    #[error(
        "moduli {m1} and {m2} are not coprime; reduce the system to pairwise coprime \
         moduli before solving"
    )]
    NonCoprimeModuli { m1: u64, m2: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expansion over {coordinates} coordinates exceeds the cap of {cap}")]
    ResourceLimit { coordinates: usize, cap: usize },

    /// A computed result failed its own verification. Indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("row n = {n}: {source}")]
    Row { n: u64, source: Box<Error> },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
