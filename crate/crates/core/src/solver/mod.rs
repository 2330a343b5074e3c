//! Synthesis of approximation schemes for commutator exponentials.

mod ansatz;
mod compose;
mod homotopy;
mod newton;
mod scheme;
mod system;
mod tables;

use thiserror::Error;

pub use ansatz::{Ansatz, Block};
pub use compose::{
    compose_gates, naive_count, rescale, second_step_compose, second_step_system, solve_second_step, suzuki_symmetric,
    NaiveKind, Pattern,
};
pub use homotopy::{homotopy_solve, HomotopyOptions, HomotopyResult, PathReport, PathStatus};
pub use newton::{newton_solve, newton_solve_with, NewtonOptions, NewtonSolution};
pub use scheme::{
    lie_coordinates, merge_gates, residual_norm_at, verify_gates, verify_scheme, ApproximationScheme, Family,
    ResidualReport, ResidualRow, SchemeGate, Slot,
};
pub use system::{basis_size, build_system, raw_constraints, reduce_dependent, Constraint, ConstraintSystem, Target};
pub use tables::{
    library, refine_first_step, refine_second_step, table, Composition, Library, Refinement, TableFixture, TABLE_NAMES,
};

use crate::lie::LieError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("target is not in the bracket basis: {0}")]
    TargetNotInBasis(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("system is not square: {equations} equations, {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("Newton did not converge (residual {residual:e})")]
    MaxIterations { residual: f64 },
    #[error("singular Jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("Newton iterates diverged at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("format error: {0}")]
    Format(String),
}
