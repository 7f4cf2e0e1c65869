use serde::{Deserialize, Serialize};

use super::{BlockInstance, TheoremError, MAX_ACTIVE_BLOCKS};
use crate::matroid::{rado_hall_feasible, KungOracle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KungViolation {
    /// `r(∪_I S_i ∪ ∪_J T_j) < Σ_I s_i + Σ_J (|T_j| - t_j)`.
    UnionTooSmall {
        row_blocks: Vec<usize>,
        col_blocks: Vec<usize>,
        lhs: usize,
        rhs: usize,
    },
    /// `t_j > |T_j|`: the complementary quota would be negative.
    ColumnQuotaExceedsBlock {
        block: usize,
        quota: usize,
        size: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KungReductionOutcome {
    pub feasible: bool,
    pub violation: Option<KungViolation>,
}

/// Decides the same question as [`check_conditions`](super::check_conditions) by another route:
/// the quota transversal test on the row/column matroid of `G`, with row
/// families `S_i` (quota `s_i`) and column families `T_j` (quota
/// `|T_j| - t_j`, the columns left out).
///
/// Families with zero quota are dropped before the generic test.
pub fn rado_hall_on_kung(inst: &BlockInstance) -> Result<KungReductionOutcome, TheoremError> {
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

    for (block, (members, &quota)) in inst.col_blocks.iter().zip(&inst.col_quotas).enumerate() {
        if quota > members.len() {
            return Ok(KungReductionOutcome {
                feasible: false,
                violation: Some(KungViolation::ColumnQuotaExceedsBlock {
                    block,
                    quota,
                    size: members.len(),
                }),
            });
        }
    }

    let oracle = KungOracle::new(&inst.matrix);
    // (is_row, original index, ground elements, quota)
    let mut families = Vec::new();
    for (i, (block, &s)) in inst.row_blocks.iter().zip(&inst.row_quotas).enumerate() {
        if s > 0 {
            families.push((
                true,
                i,
                block
                    .iter()
                    .map(|&r| oracle.row_element(r))
                    .collect::<Vec<_>>(),
                s,
            ));
        }
    }
    for (j, (block, &t)) in inst.col_blocks.iter().zip(&inst.col_quotas).enumerate() {
        let q = block.len() - t;
        if q > 0 {
            families.push((
                false,
                j,
                block.iter().map(|&c| oracle.col_element(c)).collect(),
                q,
            ));
        }
    }

    let sets: Vec<Vec<usize>> = families.iter().map(|f| f.2.clone()).collect();
    let quotas: Vec<usize> = families.iter().map(|f| f.3).collect();
    let outcome = rado_hall_feasible(&oracle, &sets, &quotas)?;
    let violation = outcome.violation.map(|v| {
        let pick = |rows: bool| {
            v.families
                .iter()
                .filter(|&&k| families[k].0 == rows)
                .map(|&k| families[k].1)
                .collect()
        };
        KungViolation::UnionTooSmall {
            row_blocks: pick(true),
            col_blocks: pick(false),
            lhs: v.lhs,
            rhs: v.rhs,
        }
    });
    Ok(KungReductionOutcome {
        feasible: outcome.feasible,
        violation,
    })
}
