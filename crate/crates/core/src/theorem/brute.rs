use itertools::Itertools;

use super::{BlockInstance, Selection, TheoremError};

/// Default guard on the number of candidate selections.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Π_i C(|S_i|, s_i) · Π_j C(|T_j|, t_j)`, saturating.
pub fn search_space_size(inst: &BlockInstance) -> u128 {
    let rows = inst.row_blocks.iter().zip(&inst.row_quotas);
    let cols = inst.col_blocks.iter().zip(&inst.col_quotas);
    rows.chain(cols).fold(1u128, |acc, (block, &q)| {
        acc.saturating_mul(binomial(block.len(), q))
    })
}

pub fn brute_force_solve(inst: &BlockInstance) -> Result<Option<Selection>, TheoremError> {
    brute_force_solve_with_limit(inst, BRUTE_FORCE_LIMIT)
}

/// Tries every block-respecting selection and returns the first with a
/// nonsingular submatrix.
///
/// Candidates are ordered lexicographically by per-block combination, row
/// blocks before column blocks, with the first block varying slowest.
pub fn brute_force_solve_with_limit(
    inst: &BlockInstance,
    limit: u128,
) -> Result<Option<Selection>, TheoremError> {
    let size = search_space_size(inst);
    if size > limit {
        return Err(TheoremError::SearchSpaceTooLarge { size, limit });
    }
    if size == 0 {
        return Ok(None);
    }
    let choices: Vec<Vec<Vec<usize>>> = inst
        .row_blocks
        .iter()
        .zip(&inst.row_quotas)
        .chain(inst.col_blocks.iter().zip(&inst.col_quotas))
        .map(|(block, &q)| block.iter().copied().combinations(q).collect())
        .collect();
    let m = inst.row_blocks.len();
    let total = inst.total();
    let mut digits = vec![0usize; choices.len()];
    loop {
        let mut rows: Vec<usize> = (0..m)
            .flat_map(|b| choices[b][digits[b]].iter().copied())
            .collect();
        let mut cols: Vec<usize> = (m..choices.len())
            .flat_map(|b| choices[b][digits[b]].iter().copied())
            .collect();
        rows.sort_unstable();
        cols.sort_unstable();
        if inst.matrix.rank_of(&rows, &cols) == total {
            let pick = |b: usize| choices[b][digits[b]].clone();
            return Ok(Some(Selection {
                row_picks: (0..m).map(pick).collect(),
                col_picks: (m..choices.len()).map(pick).collect(),
            }));
        }
        // advance the odometer, last block fastest
        let mut k = choices.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < choices[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}
