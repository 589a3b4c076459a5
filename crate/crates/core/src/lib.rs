//! Exact spectral analysis of finite trees and forests.
//!
//! The library computes rooted spectral measures of finite graphs in exact
//! arithmetic, decomposes the set of vertices carrying a spectral atom at an
//! algebraic location into prime blocks, runs the cavity recursion on trees,
//! enumerates minimal witness trees per eigenvalue, and estimates spectral
//! atoms of unimodular Galton-Watson limits through finite random-graph
//! approximation.
//!
//! Everything on the certified paths is exact: integer polynomials, rational
//! masses, algebraic numbers as (primitive integer polynomial, isolating
//! rational interval) pairs, and number-field elements reduced modulo the
//! defining polynomial. Floating point appears only in the Monte Carlo /
//! Kolmogorov-Smirnov instruments that are explicitly sampled.

pub mod cavity;
pub mod corpus;
pub mod charpoly;
pub mod spectral;
pub mod eigen;
pub mod error;
pub mod exactrank;
pub mod factor;
pub mod field;
pub mod graph;
pub mod isoperimetry;
pub mod poly;
pub mod primes;
pub mod random;
pub mod verify;
pub mod roots;

pub use error::Error;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = num_rational::BigRational;

/// Polynomial with integer coefficients (ascending degree).
pub type IntPoly = poly::Polynomial<Int>;
/// Polynomial with rational coefficients (ascending degree).
pub type RatPoly = poly::Polynomial<Rat>;

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}
