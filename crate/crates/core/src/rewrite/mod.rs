//! Rewriting Hermitian polynomials into realizable commutator trees.

mod exact;
mod identities;
mod plan;
mod tree;

use thiserror::Error;

pub use exact::{
    conjugation_identity_check, exact_pdc_sequence, exact_x2_sequence, pdc_logical, pdc_logical_params,
    x2_angle_logical, x2_logical, ConjugationReport,
};
pub use identities::{
    general_term_trees, is_realizable, power_tree, power_tree_on, symmetric_pair_trees, two_mode_tree, x2_bracket_tree,
    TreeSum,
};
pub use plan::{plan, PlanRecord, PlanRecords, PlanTerm, RewritePlan};
pub use tree::{CommutatorTree, Leaf, WeightedTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("Hamiltonian is not Hermitian")]
    NotHermitian,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal rewrite error: {0}")]
    Internal(String),
}
