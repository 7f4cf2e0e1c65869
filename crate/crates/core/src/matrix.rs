//! Dense matrices over an exact field with exact rank and determinant.
//!
//! Prime fields are eliminated with plain Gauss (first nonzero pivot).
//! Rational matrices are cleared of denominators row by row and reduced with
//! Bareiss fraction-free elimination, so every intermediate quantity is an
//! integer minor of the scaled matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{inv_mod, FieldError, FieldSpec, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Row => "row",
            Axis::Column => "column",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{axis} index {index} out of range (dimension {len})")]
    IndexOutOfRange {
        axis: Axis,
        index: usize,
        len: usize,
    },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Entries {
    Prime(Vec<u32>),
    Rational(Vec<BigRational>),
}

/// Row-major dense matrix. Rows are indexed by `0..n_rows`, columns by `0..n_cols`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    field: FieldSpec,
    n_rows: usize,
    n_cols: usize,
    entries: Entries,
}

impl ExactMatrix {
    pub fn new(
        field: FieldSpec,
        n_rows: usize,
        n_cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != n_rows * n_cols {
            return Err(LinalgError::ShapeMismatch {
                expected: n_rows * n_cols,
                got: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(FieldError::Mismatch(field, bad.field()).into());
        }
        let entries = match field {
            FieldSpec::Prime(_) => {
                Entries::Prime(entries.iter().map(|s| s.as_residue().unwrap()).collect())
            }
            FieldSpec::Rational => Entries::Rational(
                entries
                    .iter()
                    .map(|s| s.as_rational().unwrap().clone())
                    .collect(),
            ),
        };
        Ok(ExactMatrix {
            field,
            n_rows,
            n_cols,
            entries,
        })
    }

    /// Integer entries, reduced into `field`.
    pub fn from_i64(
        field: FieldSpec,
        n_rows: usize,
        n_cols: usize,
        values: &[i64],
    ) -> Result<Self, LinalgError> {
        let scalars = values.iter().map(|&v| Scalar::from_i64(field, v)).collect();
        Self::new(field, n_rows, n_cols, scalars)
    }

    /// Convenience constructor from nested integer rows; all rows must have equal length.
    pub fn from_rows(field: FieldSpec, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let flat: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_i64(field, rows.len(), n_cols, &flat)
    }

    pub fn zeros(field: FieldSpec, n_rows: usize, n_cols: usize) -> Self {
        Self::from_i64(field, n_rows, n_cols, &vec![0; n_rows * n_cols]).unwrap()
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut values = vec![0; n * n];
        for i in 0..n {
            values[i * n + i] = 1;
        }
        Self::from_i64(field, n, n, &values).unwrap()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// # Panics
    ///
    /// Panics if `(row, col)` is out of bounds.
    pub fn get(&self, row: usize, col: usize) -> Scalar {
        assert!(
            row < self.n_rows && col < self.n_cols,
            "entry ({row}, {col}) out of bounds"
        );
        let k = row * self.n_cols + col;
        match (&self.entries, self.field) {
            (Entries::Prime(v), FieldSpec::Prime(p)) => Scalar::residue(p, v[k]),
            (Entries::Rational(v), _) => Scalar::ratio(v[k].clone()),
            _ => unreachable!("storage always matches field"),
        }
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.n_rows, self.n_cols);
        let entries = match &self.entries {
            Entries::Prime(v) => {
                Entries::Prime((0..r * c).map(|k| v[(k % r) * c + k / r]).collect())
            }
            Entries::Rational(v) => {
                Entries::Rational((0..r * c).map(|k| v[(k % r) * c + k / r].clone()).collect())
            }
        };
        ExactMatrix {
            field: self.field,
            n_rows: c,
            n_cols: r,
            entries,
        }
    }

    /// `G(rows, cols)`. Index sets are normalised to ascending order without duplicates.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self, LinalgError> {
        let rows = normalize(rows, self.n_rows, Axis::Row)?;
        let cols = normalize(cols, self.n_cols, Axis::Column)?;
        Ok(self.submatrix_unchecked(&rows, &cols))
    }

    fn submatrix_unchecked(&self, rows: &[usize], cols: &[usize]) -> Self {
        let idx = |i: usize, j: usize| i * self.n_cols + j;
        let entries = match &self.entries {
            Entries::Prime(v) => Entries::Prime(
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[idx(i, j)]))
                    .collect(),
            ),
            Entries::Rational(v) => Entries::Rational(
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[idx(i, j)].clone()))
                    .collect(),
            ),
        };
        ExactMatrix {
            field: self.field,
            n_rows: rows.len(),
            n_cols: cols.len(),
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<usize> = (0..self.n_rows).collect();
        let cols: Vec<usize> = (0..self.n_cols).collect();
        self.rank_of(&rows, &cols)
    }

    /// Rank of `G(rows, cols)` without materialising the submatrix.
    /// Indices must be in range; order does not affect the rank.
    pub(crate) fn rank_of(&self, rows: &[usize], cols: &[usize]) -> usize {
        if rows.is_empty() || cols.is_empty() {
            return 0;
        }
        match (&self.entries, self.field) {
            (Entries::Prime(v), FieldSpec::Prime(p)) => {
                let work: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|&i| {
                        cols.iter()
                            .map(|&j| v[i * self.n_cols + j] as u64)
                            .collect()
                    })
                    .collect();
                gauss_mod_p(work, p as u64).rank
            }
            (Entries::Rational(v), _) => {
                let work = clear_denominators(v, self.n_cols, rows, cols);
                bareiss(work.rows).rank
            }
            _ => unreachable!("storage always matches field"),
        }
    }

    /// Checked variant of rank of `G(rows, cols)`.
    pub fn submatrix_rank(&self, rows: &[usize], cols: &[usize]) -> Result<usize, LinalgError> {
        let rows = normalize(rows, self.n_rows, Axis::Row)?;
        let cols = normalize(cols, self.n_cols, Axis::Column)?;
        Ok(self.rank_of(&rows, &cols))
    }

    /// Exact determinant; the 0x0 matrix has determinant 1.
    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.n_rows,
                cols: self.n_cols,
            });
        }
        let n = self.n_rows;
        if n == 0 {
            return Ok(Scalar::one(self.field));
        }
        let all: Vec<usize> = (0..n).collect();
        Ok(match (&self.entries, self.field) {
            (Entries::Prime(v), FieldSpec::Prime(p)) => {
                let work: Vec<Vec<u64>> = v
                    .chunks(n)
                    .map(|r| r.iter().map(|&x| x as u64).collect())
                    .collect();
                let reduced = gauss_mod_p(work, p as u64);
                let det = if reduced.rank < n { 0 } else { reduced.det };
                Scalar::residue(p, det as u32)
            }
            (Entries::Rational(v), _) => {
                let work = clear_denominators(v, n, &all, &all);
                let reduced = bareiss(work.rows);
                if reduced.rank < n {
                    Scalar::zero(FieldSpec::Rational)
                } else {
                    let mut det = reduced.last_pivot;
                    if reduced.negate {
                        det = -det;
                    }
                    Scalar::ratio(BigRational::new(det, work.scale))
                }
            }
            _ => unreachable!("storage always matches field"),
        })
    }

    /// True iff the determinant is nonzero. The 0x0 matrix is nonsingular.
    pub fn is_nonsingular(&self) -> Result<bool, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.n_rows,
                cols: self.n_cols,
            });
        }
        Ok(self.rank() == self.n_rows)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_rows {
            let row: Vec<String> = (0..self.n_cols)
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Sorts, deduplicates and bounds-checks an index set.
pub(crate) fn normalize(
    indices: &[usize],
    len: usize,
    axis: Axis,
) -> Result<Vec<usize>, LinalgError> {
    if let Some(&index) = indices.iter().find(|&&i| i >= len) {
        return Err(LinalgError::IndexOutOfRange { axis, index, len });
    }
    let mut out = indices.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

struct ModReduction {
    rank: usize,
    /// Determinant of the leading square block, valid when the input is square and of full rank.
    det: u64,
}

fn gauss_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> ModReduction {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut det = 1u64;
    for c in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(pivot) = (rank..n_rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            det = (p - det) % p;
        }
        let lead = a[rank][c];
        det = det * lead % p;
        let lead_inv = inv_mod(lead, p);
        for i in rank + 1..n_rows {
            let factor = a[i][c] * lead_inv % p;
            if factor == 0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(i);
            let pivot_row = &upper[rank];
            for (x, &y) in lower[0][c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - factor * y % p) % p;
            }
        }
        rank += 1;
    }
    ModReduction { rank, det }
}

struct Cleared {
    rows: Vec<Vec<BigInt>>,
    /// Product of the per-row scale factors.
    scale: BigInt,
}

fn clear_denominators(v: &[BigRational], stride: usize, rows: &[usize], cols: &[usize]) -> Cleared {
    let mut scale = BigInt::one();
    let rows = rows
        .iter()
        .map(|&i| {
            let lcm = cols
                .iter()
                .fold(BigInt::one(), |acc, &j| acc.lcm(v[i * stride + j].denom()));
            let row = cols
                .iter()
                .map(|&j| {
                    let q = &v[i * stride + j];
                    q.numer() * (&lcm / q.denom())
                })
                .collect();
            scale *= &lcm;
            row
        })
        .collect();
    Cleared { rows, scale }
}

struct BareissReduction {
    rank: usize,
    negate: bool,
    /// Last pivot, which equals the determinant up to sign for square full-rank input.
    last_pivot: BigInt,
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BareissReduction {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut negate = false;
    let mut prev = BigInt::one();
    for c in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(pivot) = (rank..n_rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            negate = !negate;
        }
        let (upper, lower) = a.split_at_mut(rank + 1);
        let pivot_row = &upper[rank];
        let lead = &pivot_row[c];
        for row in lower.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..n_cols {
                let t = &row[j] * lead - &factor * &pivot_row[j];
                debug_assert!((&t % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = t / &prev;
            }
        }
        prev = pivot_row[c].clone();
        rank += 1;
    }
    BareissReduction {
        rank,
        negate,
        last_pivot: prev,
    }
}
