//! Crate-wide error type.
//!
//! Construction and validation of user-supplied data return [`Error`];
//! composition and tensoring of morphisms whose shapes were already validated
//! panic on mismatch instead (an internal invariant violation, like indexing
//! out of bounds).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A morphism was built or requested with incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A relation mentions an element outside its declared source or target.
    #[error("relation pair ({0}, {1}) out of range for sizes {2} x {3}")]
    PairOutOfRange(usize, usize, usize, usize),

    /// Labels on a finite set must be distinct and match the size.
    #[error("invalid finite set: {0}")]
    InvalidFinSet(String),

    /// A groupoid table fails one of the groupoid laws.
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    /// A candidate partial equivalence relation fails symmetry/transitivity,
    /// or a doubled one fails the splitting compatibility condition.
    #[error("invalid partial equivalence relation: {0}")]
    InvalidPer(String),

    /// An algebra failed validation (shapes or axioms).
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    /// The algebra admits no normaliser of the required form.
    #[error("not normalisable: {0}")]
    NotNormalisable(String),

    /// A map expected to be a dagger idempotent is not one.
    #[error("not a dagger idempotent: {0}")]
    NotIdempotent(String),

    /// A projection expected to be unital is not.
    #[error("not unital: {0}")]
    NotUnital(String),

    /// A projection expected to be completely positive is not.
    #[error("not completely positive: {0}")]
    NotCompletelyPositive(String),

    /// Eigenvalues of a claimed projection do not cluster at 0 and 1.
    #[error("rank ambiguity: eigenvalue {0} is neither near 0 nor near 1")]
    RankAmbiguity(f64),

    /// Two inputs that must share a backend or carrier disagree.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// Malformed JSON input.
    #[error("bad input document: {0}")]
    Json(String),

    /// Request outside the built-in desk-scale scope (e.g. group tables
    /// beyond order nine).
    #[error("unsupported: {0}")]
    Unsupported(String),
}
