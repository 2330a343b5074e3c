//! Decomposition of exponentials of bosonic-mode Hamiltonians into elementary
//! continuous-variable gates.
//!
//! Pipeline: [`rewrite::plan`] turns a Hermitian [`algebra::QuadPolynomial`] into
//! commutator trees, [`solver`] supplies approximation schemes for commutator
//! exponentials, [`compiler::compile`] emits a [`sequence::GateSequence`], and
//! [`fock`] checks the result in a truncated Fock space.
//!
//! Conventions: `[X, P] = i/2`, `X = (a + a†)/2`, `P = i(a† - a)/2`, and the
//! Fourier gate is `F = exp(i π/2 (X² + P²))`, so `F X F† = P` and `F P F† = -X`.

pub mod algebra;
pub mod cli;
pub mod compiler;
pub mod fock;
pub mod lie;
pub mod rational;
pub mod rewrite;
pub mod sequence;
pub mod solver;

pub use algebra::{parse_polynomial, QuadPolynomial};
pub use rational::{GaussQ, Q};
