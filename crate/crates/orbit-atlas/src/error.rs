//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the arithmetic, enumeration and counting layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The candidate modulus failed trial division.
    NotPrime(u64),
    /// Matrix shapes do not admit the requested operation.
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Two operands live over different prime fields.
    ModulusMismatch { left: u64, right: u64 },
    /// The matrix is not invertible (or a non-unit was inverted).
    Singular,
    /// An upper-triangular solve hit a zero diagonal entry.
    ZeroDiagonal { index: usize },
    /// Two subspaces live in different ambient spaces.
    AmbientMismatch { left: usize, right: usize },
    /// Two partitions (or a skeleton and a composition) have different weights.
    WeightMismatch { left: u64, right: u64 },
    /// A raising operator would create a negative part at this slot.
    NegativePart { slot: usize },
    /// The requested enumeration exceeds the desk-scale guardrail.
    TooLarge { size: String, cap: u64 },
    /// Group closure grew past the cap; carries the partial element count.
    CapExceeded { partial: usize },
    /// Burnside's average did not come out an integer: an implementation bug.
    NonIntegerAverage,
    /// The coarse composition is not a merge of adjacent terms of the fine one.
    NotARefinement,
    /// A documented operation precondition was violated.
    PreconditionViolated(String),
    /// Intersection counts depended on the choice of subspace pair: a bug,
    /// the counts are choice-free.
    ChoiceDependent { i: usize, j: usize },
    /// Function levels are incompatible with the requested transform.
    LevelError { r: usize, k: usize },
    /// A value failed structural validation at construction.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::ModulusMismatch { left, right } => {
                write!(f, "modulus mismatch: {left} vs {right}")
            }
            Error::Singular => write!(f, "matrix is singular"),
            Error::ZeroDiagonal { index } => {
                write!(f, "zero diagonal entry at index {index}")
            }
            Error::AmbientMismatch { left, right } => {
                write!(f, "ambient dimension mismatch: {left} vs {right}")
            }
            Error::WeightMismatch { left, right } => {
                write!(f, "weight mismatch: {left} vs {right}")
            }
            Error::NegativePart { slot } => {
                write!(f, "raising would make part {slot} negative")
            }
            Error::TooLarge { size, cap } => {
                write!(f, "enumeration of size {size} exceeds the cap {cap}")
            }
            Error::CapExceeded { partial } => {
                write!(f, "group closure exceeded the cap ({partial} elements found)")
            }
            Error::NonIntegerAverage => {
                write!(f, "Burnside average is not an integer (implementation bug)")
            }
            Error::NotARefinement => {
                write!(f, "coarse composition is not a merge of the fine one")
            }
            Error::PreconditionViolated(msg) => write!(f, "precondition violated: {msg}"),
            Error::ChoiceDependent { i, j } => write!(
                f,
                "intersection count a[{i}][{j}] depends on the sampled pair (bug)"
            ),
            Error::LevelError { r, k } => {
                write!(f, "invalid level pair: r = {r}, k = {k}")
            }
            Error::Invalid(msg) => write!(f, "invalid value: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
