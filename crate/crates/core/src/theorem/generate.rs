use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BlockInstance, TheoremError};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;

/// Bounds for [`random_instance`]; every bound must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub field: FieldSpec,
    pub max_rows: usize,
    pub max_cols: usize,
    pub max_row_blocks: usize,
    pub max_col_blocks: usize,
}

/// Draws a random instance fully determined by `seed`.
///
/// Dimensions and block counts are uniform in `1..=max`, every row and
/// column lands in a uniformly chosen block (blocks may stay empty), entries
/// are uniform over GF(p) or integers in `[-5, 5]` for the rationals, and
/// `R <= min(rows, cols)` units are spread uniformly over the blocks of each
/// side. Quotas may exceed their block size.
pub fn random_instance(seed: u64, params: &GenParams) -> Result<BlockInstance, TheoremError> {
    let GenParams {
        field,
        max_rows,
        max_cols,
        max_row_blocks,
        max_col_blocks,
    } = *params;
    if [max_rows, max_cols, max_row_blocks, max_col_blocks].contains(&0) {
        return Err(TheoremError::InvalidBounds(format!("{params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_rows = rng.gen_range(1..=max_rows);
    let n_cols = rng.gen_range(1..=max_cols);
    let m = rng.gen_range(1..=max_row_blocks);
    let n = rng.gen_range(1..=max_col_blocks);

    let entries = (0..n_rows * n_cols)
        .map(|_| match field {
            FieldSpec::Prime(p) => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
            FieldSpec::Rational => Scalar::from_i64(field, rng.gen_range(-5..=5)),
        })
        .collect();
    let matrix = ExactMatrix::new(field, n_rows, n_cols, entries)?;

    let mut partition = |len: usize, blocks: usize| {
        let mut out = vec![Vec::new(); blocks];
        for i in 0..len {
            out[rng.gen_range(0..blocks)].push(i);
        }
        out
    };
    let row_blocks = partition(n_rows, m);
    let col_blocks = partition(n_cols, n);

    let total = rng.gen_range(0..=n_rows.min(n_cols));
    let mut spread = |blocks: usize| {
        let mut quotas = vec![0; blocks];
        for _ in 0..total {
            quotas[rng.gen_range(0..blocks)] += 1;
        }
        quotas
    };
    let row_quotas = spread(m);
    let col_quotas = spread(n);
    BlockInstance::new(matrix, row_blocks, col_blocks, row_quotas, col_quotas)
}
