//! Computational group theory toolkit: finitely presented groups, coset
//! enumeration, Smith normal form homology, small-cancellation word problems,
//! universal central extensions, the Rips construction, fibre products and
//! polynomial-time word-problem solvers for `SL_∞(ℤ)` and its four-generator
//! HNN embedding.

pub mod construction;
pub mod intlin;
pub mod oracle;
pub mod presentations;
pub mod scalar;
pub mod smallcanc;
pub mod subgroups;
pub mod wordproblem;
pub mod words;

pub use num_bigint::BigInt;

/// Integer matrix with arbitrary-precision entries.
pub type IntegerMatrix = intlin::Matrix<BigInt>;
/// Smith normal form over arbitrary-precision integers.
pub type IntegerSmith = intlin::Smith<BigInt>;
/// `GL_∞(ℤ)` element with arbitrary-precision entries.
pub type SparseIntMatrix = wordproblem::SparseMatrix<BigInt>;
/// Word-length matrices with machine integers, for inputs known to stay small.
pub type SmallIntMatrix = intlin::Matrix<i64>;

pub use construction::{run_pipeline, B2Mode, PipelineConfig};
pub use oracle::WordOracle;
pub use presentations::FinitePresentation;
pub use smallcanc::Lambda;
pub use words::{Generator, Word};
