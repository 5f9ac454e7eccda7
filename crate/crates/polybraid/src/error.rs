//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mode mismatch: {0}")]
    ModeMismatch(&'static str),
    #[error("semigroup words have no inverses")]
    SemigroupInverse,
    #[error("negative power {0} of a semigroup word")]
    NegativeSemigroupPower(i64),
    #[error("empty word is not a semigroup element (no identity in the free semigroup)")]
    EmptySemigroupWord,
    #[error("generator index {index} out of range (alphabet size {bound})")]
    IndexOutOfRange { index: u32, bound: u32 },
    #[error("invalid generator token `{0}`")]
    BadGeneratorToken(String),

    #[error("arity must be at least 3, got {0}")]
    ArityTooSmall(u32),
    #[error("expected {expected} entries for arity {arity}, got {got}")]
    EntryCount { arity: u32, expected: usize, got: usize },
    #[error("shift class {shift} out of range for arity {arity}")]
    ShiftOutOfRange { arity: u32, shift: u32 },
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("matrix equation sides have shift classes {lhs} and {rhs}")]
    ShiftClassMismatch { lhs: u32, rhs: u32 },
    #[error("k-ary product takes exactly {expected} matrices, got {got}")]
    ProductArity { expected: u32, got: usize },
    #[error("{0} requires shift class d=1")]
    ShiftNotCanonical(&'static str),
    #[error("arithmetic overflow in {0}")]
    ArithmeticOverflow(&'static str),
    #[error("empty matrix expression")]
    EmptyExpression,

    #[error("regularity schema requires k >= 3 and l >= 1 (got k={k}, l={ell})")]
    BadSchemaParams { k: u32, ell: u32 },
    #[error("Cayley table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("claimed identity {0} is not an identity of the table")]
    BadIdentity(usize),
    #[error("element index {index} out of range for table of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("enumeration guard exceeded: {tuples} tuples > {guard}")]
    EnumerationGuard { tuples: u128, guard: u64 },
    #[error("malformed Cayley table: {0}")]
    BadTable(String),

    #[error("presentation requires {0}")]
    BadPresentationParams(String),
    #[error("relation chain needs at least two words")]
    ChainTooShort,
    #[error("invalid Coxeter matrix: {0}")]
    BadCoxeterMatrix(String),
    #[error("invalid Coxeter exponent for tuple {tuple:?}: {reason}")]
    BadCoxeterExponent { tuple: Vec<u32>, reason: String },
    #[error("unknown export format `{0}`")]
    UnknownFormat(String),
    #[error("malformed presentation: {0}")]
    BadPresentation(String),

    #[error("search bounds misconfigured: {0}")]
    BadBounds(String),
    #[error("permutation images must share one degree")]
    DegreeMismatch,
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
