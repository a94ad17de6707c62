//! Crate-wide error type.

use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants marked "internal defect" signal a broken invariant of the
/// toolkit itself rather than bad input; they should never be reachable
/// from well-formed data.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,

    #[error("|{0}| exceeds the factorization bound; use factor_unbounded to opt in")]
    FactorBoundExceeded(BigInt),

    #[error("{0} is not an odd prime")]
    NotAnOddPrime(BigInt),

    #[error("D must be positive")]
    NonPositiveDiscriminant,

    #[error("expected an imaginary quadratic order, got radicand {0}")]
    NotImaginary(BigInt),

    #[error("element does not live in the expected field (radicand {expected}, got {found})")]
    FieldMismatch { expected: BigInt, found: BigInt },

    #[error("quaternion algebra parameters must be nonzero")]
    DegenerateAlgebra,

    #[error("elements belong to different quaternion algebras")]
    MixedAlgebras,

    #[error("{0} is not squarefree")]
    NotSquarefree(BigInt),

    #[error("{0} has an odd number of prime factors, so it is not the discriminant of a totally indefinite rational quaternion algebra")]
    OddRamification(BigInt),

    #[error("generators span a sublattice of rank {0} < 4")]
    RankDeficient(usize),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("lattice is not an order")]
    NotAnOrder,

    #[error("order is not maximal (reduced discriminant {disc}, algebra discriminant {target})")]
    NotMaximal { disc: BigInt, target: BigInt },

    #[error("standard order requires integral parameters")]
    NonIntegralParameters,

    // Internal defect: the trace pairing of an order always has square determinant.
    #[error("trace-pairing determinant {0} is not a perfect square")]
    NonSquareGram(BigInt),

    // Internal defect: ascent must reach the algebra discriminant.
    #[error("saturation stalled at reduced discriminant {disc} > {target}")]
    SaturationStalled { disc: BigInt, target: BigInt },

    #[error("the residue criterion and the Hilbert-symbol test disagree at D = {d}, m = {m}")]
    TwistingCriterionMismatch { d: BigInt, m: BigInt },

    #[error("search inputs exceed the fast integer range")]
    SearchOverflow,

    #[error("invalid {what}: {detail}")]
    InvalidInput { what: &'static str, detail: String },

    #[error("cache i/o: {0}")]
    CacheIo(String),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::CacheIo(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
