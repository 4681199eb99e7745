//! Polynomial-time word problems: `SL_∞(ℤ)` over the generators `c_k`, and
//! the four-generator HNN extension built from any group with a word-problem
//! oracle over `c_0, c_1, …`.

mod hnn;
mod slinf;
mod sparse;

pub use hnn::{
    h0_factors, h_membership_decoded, hnn_generator, hnn_h_membership, hnn_is_trivial, FreeProductOracle, HFactors,
    HLevel, HnnAction, HnnError, HnnStep, HnnTrace, HnnVerdict,
};
pub use slinf::{
    decode_index, elementary_indices, slinf_evaluate, slinf_generator, slinf_is_trivial, SlinfCost, SlinfOracle,
    SlinfRun,
};
pub use sparse::{ColumnOpCost, SparseMatrix};
