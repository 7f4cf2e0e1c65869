use super::conditions::{check_conditions, first_violation};
use super::{BlockInstance, Certificate, Selection, TheoremError};

/// One side (rows or columns) of a partially fixed instance: the residual
/// blocks plus a single block of already committed elements whose quota is
/// its own size.
struct Side {
    residual: Vec<Vec<usize>>,
    quotas: Vec<usize>,
    fixed: Vec<usize>,
    picks: Vec<Vec<usize>>,
}

impl Side {
    fn new(blocks: &[Vec<usize>], quotas: &[usize]) -> Self {
        Side {
            residual: blocks.to_vec(),
            quotas: quotas.to_vec(),
            fixed: Vec::new(),
            picks: vec![Vec::new(); blocks.len()],
        }
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = self.residual.clone();
        out.push(self.fixed.clone());
        out
    }

    fn block_quotas(&self) -> Vec<usize> {
        let mut out = self.quotas.clone();
        out.push(self.fixed.len());
        out
    }

    fn move_to_fixed(&mut self, block: usize, pos: usize) {
        let x = self.residual[block].remove(pos);
        self.quotas[block] -= 1;
        self.fixed.push(x);
    }

    fn undo(&mut self, block: usize, pos: usize) {
        let x = self.fixed.pop().expect("undo follows a move");
        self.residual[block].insert(pos, x);
        self.quotas[block] += 1;
    }
}

#[derive(Clone, Copy)]
enum Turn {
    Rows,
    Cols,
}

/// Builds a certificate for `inst`.
///
/// Infeasible instances return the first violated condition. Feasible ones
/// are solved by self-reduction: elements are fixed one at a time (rows
/// before columns, lowest block first, lowest index first), each tentative
/// fix is kept only if the refined instance still satisfies every rank
/// condition. The result is checked for nonsingularity before returning.
pub fn extract_witness(inst: &BlockInstance) -> Result<Certificate, TheoremError> {
    if let Some(v) = check_conditions(inst)?.violation {
        return Ok(Certificate::Infeasible(v));
    }
    let mut rows = Side::new(&inst.row_blocks, &inst.row_quotas);
    let mut cols = Side::new(&inst.col_blocks, &inst.col_quotas);

    for turn in [Turn::Rows, Turn::Cols] {
        loop {
            let side = match turn {
                Turn::Rows => &rows,
                Turn::Cols => &cols,
            };
            let Some(block) = side.quotas.iter().position(|&q| q > 0) else {
                break;
            };
            // Elements below the last pick were already rejected against a
            // smaller fixed set, so they stay rejected.
            let floor = side.picks[block].last().map_or(0, |&x| x + 1);
            let candidates: Vec<usize> = side.residual[block]
                .iter()
                .copied()
                .filter(|&x| x >= floor)
                .collect();
            let mut committed = None;
            for x in candidates {
                let side = match turn {
                    Turn::Rows => &mut rows,
                    Turn::Cols => &mut cols,
                };
                let pos = side.residual[block]
                    .binary_search(&x)
                    .expect("candidate is residual");
                side.move_to_fixed(block, pos);
                let ok = first_violation(
                    &inst.matrix,
                    &rows.blocks(),
                    &rows.block_quotas(),
                    &cols.blocks(),
                    &cols.block_quotas(),
                )
                .is_none();
                let side = match turn {
                    Turn::Rows => &mut rows,
                    Turn::Cols => &mut cols,
                };
                if ok {
                    side.picks[block].push(x);
                    committed = Some(x);
                    break;
                }
                side.undo(block, pos);
            }
            if committed.is_none() {
                return Err(TheoremError::InternalInconsistency(format!(
                    "no element of block {block} keeps the refined instance feasible"
                )));
            }
        }
    }

    let selection = Selection {
        row_picks: rows.picks,
        col_picks: cols.picks,
    };
    let determinant = inst
        .matrix
        .submatrix(&selection.rows(), &selection.cols())?
        .determinant()?;
    if determinant.is_zero() {
        return Err(TheoremError::InternalInconsistency(
            "selected submatrix is singular".to_string(),
        ));
    }
    Ok(Certificate::Feasible {
        selection,
        determinant,
    })
}
