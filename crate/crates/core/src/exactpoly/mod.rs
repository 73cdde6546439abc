//! Exact multivariate polynomials and rational functions over big rationals.
//!
//! Every identity checked by this crate has integer coefficients, so this
//! module never rounds. Monomials are stored in graded-lexicographic order,
//! which also fixes the textual serialization.

mod parse;
mod polynomial;
mod rational;

pub use parse::{parse_expression, parse_with, ParseError};
pub use polynomial::{variables, Monomial, Polynomial, Variables};
pub use rational::{jacobian_determinant, RationalFunction};

use num_rational::BigRational;

/// Shorthand for the integer `n` as a big rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
