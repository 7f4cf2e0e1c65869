//! Nonsingular submatrices with prescribed per-block row and column counts.
//!
//! Rows of `G` are partitioned into blocks `S_0..S_{m-1}` and columns into
//! `T_0..T_{n-1}`, with quotas `s_i`, `t_j` summing to a common `R`. A
//! selection of `s_i` rows from each `S_i` and `t_j` columns from each `T_j`
//! with nonsingular `R x R` submatrix exists iff for all block index sets
//! `I`, `K`:
//!
//! ```text
//! rank G(∪_{i∈I} S_i, ∪_{k∈K} T_k) >= Σ_{i∈I} s_i + Σ_{k∈K} t_k - R
//! ```

mod brute;
mod conditions;
mod generate;
mod kung_reduction;
mod witness;

pub use brute::{
    brute_force_solve, brute_force_solve_with_limit, search_space_size, BRUTE_FORCE_LIMIT,
};
pub use conditions::{check_conditions, ConditionCheck, ConditionViolation, MAX_ACTIVE_BLOCKS};
pub use generate::{random_instance, GenParams};
pub use kung_reduction::{rado_hall_on_kung, KungReductionOutcome, KungViolation};
pub use witness::extract_witness;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::{Axis, ExactMatrix, LinalgError};
use crate::matroid::MatroidError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("{axis} partition: {kind}")]
    Partition { axis: Axis, kind: PartitionDefect },
    #[error("{axis} blocks: {blocks} blocks but {quotas} quotas")]
    QuotaCountMismatch {
        axis: Axis,
        blocks: usize,
        quotas: usize,
    },
    #[error("row quotas sum to {row_total} but column quotas sum to {col_total}")]
    QuotaMismatch { row_total: usize, col_total: usize },
    #[error("{active} blocks with positive quota exceed the cap of {cap}")]
    TooManyBlocks { active: usize, cap: usize },
    #[error("search space of {size} selections exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("invalid generator bounds: {0}")]
    InvalidBounds(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionDefect {
    Missing(usize),
    Duplicated(usize),
    OutOfRange(usize),
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::Missing(i) => write!(f, "index {i} is in no block"),
            PartitionDefect::Duplicated(i) => write!(f, "index {i} is in more than one block"),
            PartitionDefect::OutOfRange(i) => write!(f, "index {i} is out of range"),
        }
    }
}

/// A matrix with partitioned rows and columns and per-block quotas.
///
/// Blocks are stored in ascending index order; empty blocks are allowed.
/// Quotas larger than their block are accepted and simply make the instance
/// infeasible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockInstance {
    matrix: ExactMatrix,
    row_blocks: Vec<Vec<usize>>,
    col_blocks: Vec<Vec<usize>>,
    row_quotas: Vec<usize>,
    col_quotas: Vec<usize>,
}

fn validate_partition(
    axis: Axis,
    len: usize,
    blocks: &mut [Vec<usize>],
) -> Result<(), TheoremError> {
    let mut seen = vec![false; len];
    for block in blocks.iter_mut() {
        block.sort_unstable();
        for &i in block.iter() {
            let defect = if i >= len {
                Some(PartitionDefect::OutOfRange(i))
            } else if std::mem::replace(&mut seen[i], true) {
                Some(PartitionDefect::Duplicated(i))
            } else {
                None
            };
            if let Some(kind) = defect {
                return Err(TheoremError::Partition { axis, kind });
            }
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(TheoremError::Partition {
            axis,
            kind: PartitionDefect::Missing(i),
        });
    }
    Ok(())
}

impl BlockInstance {
    pub fn new(
        matrix: ExactMatrix,
        mut row_blocks: Vec<Vec<usize>>,
        mut col_blocks: Vec<Vec<usize>>,
        row_quotas: Vec<usize>,
        col_quotas: Vec<usize>,
    ) -> Result<Self, TheoremError> {
        validate_partition(Axis::Row, matrix.n_rows(), &mut row_blocks)?;
        validate_partition(Axis::Column, matrix.n_cols(), &mut col_blocks)?;
        for (axis, blocks, quotas) in [
            (Axis::Row, &row_blocks, &row_quotas),
            (Axis::Column, &col_blocks, &col_quotas),
        ] {
            if blocks.len() != quotas.len() {
                return Err(TheoremError::QuotaCountMismatch {
                    axis,
                    blocks: blocks.len(),
                    quotas: quotas.len(),
                });
            }
        }
        let row_total: usize = row_quotas.iter().sum();
        let col_total: usize = col_quotas.iter().sum();
        if row_total != col_total {
            return Err(TheoremError::QuotaMismatch {
                row_total,
                col_total,
            });
        }
        Ok(BlockInstance {
            matrix,
            row_blocks,
            col_blocks,
            row_quotas,
            col_quotas,
        })
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn row_blocks(&self) -> &[Vec<usize>] {
        &self.row_blocks
    }

    pub fn col_blocks(&self) -> &[Vec<usize>] {
        &self.col_blocks
    }

    pub fn row_quotas(&self) -> &[usize] {
        &self.row_quotas
    }

    pub fn col_quotas(&self) -> &[usize] {
        &self.col_quotas
    }

    /// The common quota total `R`.
    pub fn total(&self) -> usize {
        self.row_quotas.iter().sum()
    }

    /// `(Gᵀ, column blocks, row blocks, t, s)`.
    pub fn transposed(&self) -> Self {
        BlockInstance {
            matrix: self.matrix.transpose(),
            row_blocks: self.col_blocks.clone(),
            col_blocks: self.row_blocks.clone(),
            row_quotas: self.col_quotas.clone(),
            col_quotas: self.row_quotas.clone(),
        }
    }
}

/// Chosen rows per row block and columns per column block, each ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Selection {
    pub row_picks: Vec<Vec<usize>>,
    pub col_picks: Vec<Vec<usize>>,
}

impl Selection {
    /// All selected rows, ascending.
    pub fn rows(&self) -> Vec<usize> {
        flatten_sorted(&self.row_picks)
    }

    /// All selected columns, ascending.
    pub fn cols(&self) -> Vec<usize> {
        flatten_sorted(&self.col_picks)
    }
}

fn flatten_sorted(picks: &[Vec<usize>]) -> Vec<usize> {
    let mut all: Vec<usize> = picks.iter().flatten().copied().collect();
    all.sort_unstable();
    all
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Feasible {
        selection: Selection,
        determinant: Scalar,
    },
    Infeasible(ConditionViolation),
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionDefect {
    BlockCount,
    OutsideBlock,
    Cardinality,
    Singular,
}

/// Checks block membership and cardinalities of `sel`, then nonsingularity
/// of the selected `R x R` submatrix.
pub fn verify_selection(inst: &BlockInstance, sel: &Selection) -> Result<(), SelectionDefect> {
    let sides = [
        (&inst.row_blocks, &inst.row_quotas, &sel.row_picks),
        (&inst.col_blocks, &inst.col_quotas, &sel.col_picks),
    ];
    for (blocks, quotas, picks) in sides {
        if picks.len() != blocks.len() {
            return Err(SelectionDefect::BlockCount);
        }
        for ((block, &quota), pick) in blocks.iter().zip(quotas).zip(picks) {
            if pick.iter().any(|i| block.binary_search(i).is_err()) {
                return Err(SelectionDefect::OutsideBlock);
            }
            let mut distinct = pick.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != pick.len() || pick.len() != quota {
                return Err(SelectionDefect::Cardinality);
            }
        }
    }
    let sub = inst
        .matrix
        .submatrix(&sel.rows(), &sel.cols())
        .map_err(|_| SelectionDefect::OutsideBlock)?;
    match sub.is_nonsingular() {
        Ok(true) => Ok(()),
        _ => Err(SelectionDefect::Singular),
    }
}
