//! Exact algebra of quadrature-operator polynomials.

mod parse;
mod poly;
mod quad;

pub use parse::{parse_polynomial, ParseError};
pub use poly::{canonicalize, commutator, monomial_product, Letter, Monomial, QuadPolynomial};
pub use quad::Quad;
