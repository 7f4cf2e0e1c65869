//! Nonsingular submatrices of block matrices over exact fields.
//!
//! Given a matrix whose rows and columns are partitioned into blocks, and a
//! number of rows and columns to take from each block, this crate decides
//! whether some choice yields a nonsingular square submatrix, produces the
//! choice when it exists, and otherwise returns the block pair whose rank
//! condition fails.
//!
//! * [`field`] and [`matrix`]: exact arithmetic, rank and determinant.
//! * [`matroid`]: rank oracles, axiom verifiers, the row/column matroid of a
//!   matrix and the quota transversal test.
//! * [`theorem`]: the block rank conditions, witness extraction, a brute-force
//!   oracle and a random instance generator.
//! * [`format`] and [`cli`]: the instance file format, certificate documents
//!   and the command-line front end.

pub mod cli;
pub mod field;
pub mod format;
pub mod matrix;
pub mod matroid;
pub mod theorem;

pub use field::{FieldError, FieldSpec, Scalar};
pub use matrix::{ExactMatrix, LinalgError};
pub use theorem::{BlockInstance, Certificate, Selection};
