//! Exact scalars: rationals, sparse Laurent polynomials in `q, t` with rational
//! exponents, and their fraction field.
//!
//! Everything is stored in the `(q, t)` coordinates; the torus weights are
//! `q1 = q*t` and `q2 = q/t`.

mod gcd;
mod heugcd;
mod laurent;
mod monomial;
mod parse;
mod ratfunc;
mod series;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Num, Signed};
use thiserror::Error;

pub use laurent::{Laurent, Var};
pub use monomial::{Exp, Monomial};
pub use parse::{parse_laurent, parse_ratfunc};
pub use ratfunc::{Coordinates, RatFunc};
pub use series::series_expand;

/// Coefficient field for [`Laurent`] and [`RatFunc`]. Equality must be exact,
/// so floating point types do not qualify. The gcd works over the integers,
/// hence the embedding into `BigRational`.
pub trait Coeff:
    Clone + fmt::Debug + fmt::Display + FromStr + Eq + Hash + Num + Signed + Send + Sync + 'static
{
    fn to_big(&self) -> BigRational;
    fn from_big(r: BigRational) -> Self;
}

impl Coeff for BigRational {
    fn to_big(&self) -> BigRational {
        self.clone()
    }
    fn from_big(r: BigRational) -> Self {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree of the zero polynomial")]
    ZeroPolynomial,
    #[error("denominator cannot be expanded as a power series: lowest q-degree part is {0}")]
    NotExpandable(String),
    #[error("exponent {0} is not an integer")]
    NonIntegralExponent(String),
    #[error("parse error: {0}")]
    Parse(String),
}
