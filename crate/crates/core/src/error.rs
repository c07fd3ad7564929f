use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unsupported prime {0} (expected 2, 3 or 5)")]
    UnsupportedPrime(u32),
    #[error("generator `{name}`: degree {degree} must be even and positive")]
    BadDegree { name: String, degree: u32 },
    #[error("generator `{name}`: height {height} must be at least 2")]
    BadHeight { name: String, height: u32 },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("presentations differ (mixed-presentation arithmetic)")]
    PresentationMismatch,
    #[error("primes differ: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("image of `{generator}` has degree {found:?}, expected {expected}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: Option<u32>,
    },
    #[error("image of `{0}` does not satisfy the height relation in the target")]
    RelationNotPreserved(String),
    #[error("no image assigned to generator `{0}`")]
    MissingImage(String),
    #[error("homomorphism is not surjective in degree {0}")]
    NotSurjective(u32),
    #[error("power {power} does not divide the height {height} of `{generator}`")]
    PowerDoesNotDivide {
        generator: String,
        power: u32,
        height: u32,
    },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("v-variable index {index} exceeds the v-bound {bound}")]
    VIndexOutOfRange { index: u32, bound: u32 },
    #[error("exponent vector has length {found}, expected {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("generator of negative degree {0}")]
    NegativeDegree(i64),
    #[error("torsion of order {invariant} in degree {degree} is not a power of {prime}")]
    PrimeToPTorsion {
        degree: i64,
        invariant: i128,
        prime: u32,
    },
    #[error("element is not contained in the module")]
    NotContained,
    #[error("refusing to compute from incomplete data ({0})")]
    Incomplete(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("{0}")]
    Invalid(String),
    #[error("no catalog entry `{group}`{}", prime.map(|p| alloc::format!(" at p={p}")).unwrap_or_default())]
    UnknownEntry { group: String, prime: Option<u32> },
    #[error("differential on page {page}: {reason}")]
    Differential { page: u32, reason: String },
    #[error("d∘d is nonzero on page {page} at bidegree ({s}, {t})")]
    SquareNonzero { page: u32, s: u32, t: u32 },
}
