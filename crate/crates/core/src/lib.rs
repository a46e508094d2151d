//! Exact symbolic-computation engine for local R-matrices and
//! R-correspondences attached to reduced words of the longest permutation:
//! braid and commutation moves, parameter evolutions along the two canonical
//! move chains, matrix evolutions with complementary-diagonal triangularity,
//! and Wronskian evolutions of normalized polynomial collections.
//!
//! All arithmetic is exact (arbitrary-precision rationals); every identity
//! the library checks is decided by cross-multiplication of canonical
//! polynomials, with a seeded numeric certifier as an independent witness.

pub mod exactalg;
pub mod formulas;
pub mod words;
pub mod evolve;
pub mod transforms;
pub mod verify;
pub mod wronskian;

pub use exactalg::{Monomial, Polynomial, RationalFunction, TruncatedSeries, Variable};

/// Arbitrary-precision rational numbers, the coefficient field everywhere.
pub type Rational = num_rational::BigRational;

/// Errors from the exact-arithmetic layer.
#[derive(Debug, thiserror::Error)]
pub enum AlgError {
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("a composed denominator vanishes identically")]
    DenominatorVanishes,
    #[error("denominator evaluates to zero at the given point")]
    PoleAtPoint,
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("series in `{0}` and `{1}` cannot be combined")]
    MixedSeriesVariable(String, String),
    #[error("truncation order {available} is insufficient (need {needed})")]
    InsufficientTruncationOrder { needed: usize, available: usize },
    #[error("denominator involves the series variable `{0}`")]
    SeriesDenominator(String),
}
