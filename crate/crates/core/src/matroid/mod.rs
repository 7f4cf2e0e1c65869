//! Matroids given by rank oracles, the linking system of a matrix, the
//! row/column matroid derived from it, and the quota transversal test.

mod axioms;
mod linking;
mod rado;

pub use axioms::{
    recheck_matroid_violation, verify_matroid_axioms, Axiom, AxiomReport, VerifyMode, Violation,
    MATROID_EXHAUSTIVE_CAP, MAX_RECORDED_VIOLATIONS,
};
pub use linking::{
    kung_rank, linking_rank, verify_bimatroid_axioms, verify_linking_function,
    verify_rank_exchange, KungOracle, LINKING_EXHAUSTIVE_CAP,
};
pub use rado::{rado_hall_feasible, RadoHallOutcome, RadoHallViolation, MAX_FAMILIES};

use thiserror::Error;

use crate::matrix::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ground set of size {size} exceeds the exhaustive cap of {cap}")]
    GroundTooLarge { size: usize, cap: usize },
    #[error("element {element} is not in the ground set (size {ground_size})")]
    ElementNotInGround { element: usize, ground_size: usize },
    #[error("duplicate ground label {0:?}")]
    DuplicateLabel(String),
    #[error("families are not disjoint: element {element} appears twice")]
    FamiliesNotDisjoint { element: usize },
    #[error("{count} families exceed the enumeration cap of {cap}")]
    TooManyFamilies { count: usize, cap: usize },
    #[error("{families} families but {quotas} quotas")]
    QuotaCountMismatch { families: usize, quotas: usize },
    #[error("rank oracle returned {first} then {second} for subset {subset:?}")]
    NondeterministicOracle {
        subset: Vec<usize>,
        first: usize,
        second: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Ordered list of distinct element labels. Subsets are given as positions
/// into this list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, MatroidError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(MatroidError::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels })
    }

    /// Ground set labelled `e0, e1, ...`.
    pub fn anonymous(size: usize) -> Self {
        GroundSet {
            labels: (0..size).map(|i| format!("e{i}")).collect(),
        }
    }

    /// `row 0 .. row (r-1)` followed by `col 0 .. col (c-1)`.
    pub fn rows_then_cols(n_rows: usize, n_cols: usize) -> Self {
        let rows = (0..n_rows).map(|i| format!("row {i}"));
        let cols = (0..n_cols).map(|j| format!("col {j}"));
        GroundSet {
            labels: rows.chain(cols).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sorted, deduplicated copy of `subset`, or the first out-of-range element.
    pub fn normalize(&self, subset: &[usize]) -> Result<Vec<usize>, MatroidError> {
        if let Some(&element) = subset.iter().find(|&&e| e >= self.len()) {
            return Err(MatroidError::ElementNotInGround {
                element,
                ground_size: self.len(),
            });
        }
        let mut out = subset.to_vec();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// A set function `r: 2^E -> N` over a [`GroundSet`].
///
/// `rank` receives a sorted, duplicate-free list of positions and must be
/// deterministic.
pub trait RankOracle {
    fn ground(&self) -> &GroundSet;
    fn rank(&self, subset: &[usize]) -> usize;
}

/// Rank oracle backed by a closure.
pub struct FnOracle<F> {
    ground: GroundSet,
    query: F,
}

impl<F: Fn(&[usize]) -> usize> FnOracle<F> {
    pub fn new(ground: GroundSet, query: F) -> Self {
        FnOracle { ground, query }
    }
}

impl<F: Fn(&[usize]) -> usize> RankOracle for FnOracle<F> {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn rank(&self, subset: &[usize]) -> usize {
        (self.query)(subset)
    }
}

/// `r(A) = |A|`.
pub fn free_matroid(size: usize) -> FnOracle<impl Fn(&[usize]) -> usize> {
    FnOracle::new(GroundSet::anonymous(size), |a: &[usize]| a.len())
}

/// True iff `r(A) = |A|`.
pub fn is_independent<O: RankOracle + ?Sized>(
    oracle: &O,
    subset: &[usize],
) -> Result<bool, MatroidError> {
    let subset = oracle.ground().normalize(subset)?;
    Ok(oracle.rank(&subset) == subset.len())
}

pub(crate) fn mask_to_positions(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}
