//! Exact arithmetic foundation: arbitrary-precision rationals, sparse
//! polynomials in named variables, piecewise polynomial functions, and
//! exact linear algebra.
//!
//! Nothing in this module (or anywhere else in the crate) uses floating
//! point. Every value is an exact rational or a polynomial over the
//! rationals.

mod matrix;
mod piecewise;
mod poly;
mod roots;

pub use matrix::{solve_linear, PolyFraction, PolyMat, RatMat};
pub use piecewise::PiecewisePoly;
pub use poly::{Poly, PolyRing};
pub use roots::{poly_sqrt, rational_roots, RootReport};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Exact rational number, always stored reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Rational from an integer numerator and denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses a rational written as `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| ExactError::BadRational(t.to_string()))
}

/// Canonical text form of a rational (`p/q`, or `p` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("cannot parse polynomial: {0}")]
    BadPoly(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("substitution map missing variable `{0}`")]
    MissingSubstitution(String),
    #[error("variable rings differ: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("evaluation point missing variable `{0}`")]
    MissingPoint(String),
    #[error("polynomial is not univariate (effective variables: {0})")]
    NotUnivariate(String),
    #[error("zero polynomial has no well-defined root set")]
    ZeroPolynomial,
    #[error("interval [{0}, {1}] outside piecewise domain [{2}, {3}]")]
    OutsideDomain(String, String, String, String),
    #[error("breakpoints must be strictly increasing")]
    BreakpointsNotIncreasing,
    #[error("piece count {0} does not match breakpoint count {1}")]
    PieceCountMismatch(usize, usize),
    #[error("pieces disagree at breakpoint {0} of a continuous function")]
    DiscontinuousAtBreakpoint(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("coefficients too large for rational root search")]
    RootSearchOverflow,
}
