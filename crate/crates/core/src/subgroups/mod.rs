//! Finite-index subgroup machinery: coset enumeration, Reidemeister–Schreier
//! presentations and Stallings graphs for subgroups of free groups.

mod action;
mod enumerate;
mod schreier;
mod stallings;

use thiserror::Error;

use crate::presentations::PresentationError;

pub use enumerate::{todd_coxeter, CosetTable, CosetTableJson, CosetTableOracle};
pub use schreier::{
    reidemeister_schreier, schreier_presentation, simplify_presentation, SchreierPresentation, MAX_SIMPLIFY_ROUNDS,
    SCHREIER_FAMILY,
};
pub use stallings::{
    fold, graph_membership, intersect_with_finite_index, product_graph, Intersection, SubgroupGraph,
    SUBGROUP_LETTER_FAMILY,
};

/// Default row budget for coset enumeration.
pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("coset enumeration exceeded {max_cosets} rows ({} cosets defined when stopped)", partial.index())]
    BudgetExceeded { max_cosets: usize, partial: Box<CosetTable> },
    #[error("coset budget must be at least 1")]
    InvalidBudget,
    #[error("inconsistent coset table: {0}")]
    Inconsistent(String),
    #[error("incompatible alphabets: {0}")]
    IncompatibleAlphabets(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}
