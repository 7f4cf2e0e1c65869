use serde::{Deserialize, Serialize};

use super::{BlockInstance, TheoremError};
use crate::matrix::ExactMatrix;

/// Cap on the number of positive-quota blocks (rows plus columns); the check
/// enumerates `2^active` block index pairs.
pub const MAX_ACTIVE_BLOCKS: usize = 24;

/// A pair `(I, K)` with `rank G(∪_I S_i, ∪_K T_k) < Σ_I s_i + Σ_K t_k - R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConditionViolation {
    /// `I`, ascending 0-based row block indices.
    pub row_blocks: Vec<usize>,
    /// `K`, ascending 0-based column block indices.
    pub col_blocks: Vec<usize>,
    pub lhs_rank: usize,
    pub rhs_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub feasible: bool,
    pub violation: Option<ConditionViolation>,
}

/// Checks every rank condition and reports the first failure.
///
/// Pairs are visited in ascending `(I, K)` bitmask order. Blocks with zero
/// quota never appear in `I` or `K`: adding one grows the rank side and
/// leaves the bound unchanged, so those conditions are implied.
pub fn check_conditions(inst: &BlockInstance) -> Result<ConditionCheck, TheoremError> {
    let active = inst
        .row_quotas
        .iter()
        .chain(&inst.col_quotas)
        .filter(|&&q| q > 0)
        .count();
    if active > MAX_ACTIVE_BLOCKS {
        return Err(TheoremError::TooManyBlocks {
            active,
            cap: MAX_ACTIVE_BLOCKS,
        });
    }
    let violation = first_violation(
        &inst.matrix,
        &inst.row_blocks,
        &inst.row_quotas,
        &inst.col_blocks,
        &inst.col_quotas,
    );
    Ok(ConditionCheck {
        feasible: violation.is_none(),
        violation,
    })
}

struct Union {
    blocks: Vec<usize>,
    members: Vec<usize>,
    quota: usize,
}

/// Unions of every subset of the positive-quota blocks, in ascending mask order.
fn unions(blocks: &[Vec<usize>], quotas: &[usize]) -> Vec<Union> {
    let active: Vec<usize> = (0..blocks.len()).filter(|&b| quotas[b] > 0).collect();
    (0..1u64 << active.len())
        .map(|mask| {
            let chosen: Vec<usize> = (0..active.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| active[k])
                .collect();
            let mut members: Vec<usize> = chosen
                .iter()
                .flat_map(|&b| blocks[b].iter().copied())
                .collect();
            members.sort_unstable();
            Union {
                quota: chosen.iter().map(|&b| quotas[b]).sum(),
                blocks: chosen,
                members,
            }
        })
        .collect()
}

pub(crate) fn first_violation(
    g: &ExactMatrix,
    row_blocks: &[Vec<usize>],
    row_quotas: &[usize],
    col_blocks: &[Vec<usize>],
    col_quotas: &[usize],
) -> Option<ConditionViolation> {
    let total: usize = row_quotas.iter().sum();
    let col_unions = unions(col_blocks, col_quotas);
    for rows in unions(row_blocks, row_quotas) {
        for cols in &col_unions {
            let demand = rows.quota + cols.quota;
            if demand <= total {
                continue;
            }
            let rhs_bound = demand - total;
            let lhs_rank = g.rank_of(&rows.members, &cols.members);
            if lhs_rank < rhs_bound {
                return Some(ConditionViolation {
                    row_blocks: rows.blocks.clone(),
                    col_blocks: cols.blocks.clone(),
                    lhs_rank,
                    rhs_bound,
                });
            }
        }
    }
    None
}
