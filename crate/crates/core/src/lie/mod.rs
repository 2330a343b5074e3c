//! Truncated free associative algebra, generalized BCH, and the Lyndon basis.

mod element;
mod lyndon;
mod mpoly;
mod scalar;
mod series;

pub use element::{evaluate_bracket, project_to_lie, project_with_rest, LieElement};
pub use lyndon::{is_lyndon, lyndon_basis, lyndon_words, standard_bracketing, Bracket, LyndonElement};
pub use mpoly::{MPoly, MAX_VARS};
pub use scalar::Scalar;
pub use series::{gbch, gbch_generators, Alphabet, LieError, TruncatedSeries};
