//! Polynomials, exponents, monomial orders and ring contexts.

mod exponent;
mod order;
mod parse;
mod polynomial;
mod ring;

pub use exponent::Exponent;
pub use order::MonomialOrder;
pub use parse::{parse_polynomial, parse_polynomial_list};
pub use polynomial::{Polynomial, TermJson};
pub use ring::{Field, RingContext};
