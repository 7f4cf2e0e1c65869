use std::borrow::Borrow;

use super::axioms::{random_subset, sampler, sorted_intersection, sorted_union, ReportBuilder};
use super::{
    mask_to_positions, Axiom, AxiomReport, GroundSet, MatroidError, RankOracle, VerifyMode,
};
use crate::matrix::{normalize, Axis, ExactMatrix};

/// Largest row or column count checked exhaustively by the linking-system
/// verifiers (all quadruples of subsets are visited).
pub const LINKING_EXHAUSTIVE_CAP: usize = 5;

/// `λ(U, V) = rank G(U, V)`.
pub fn linking_rank(
    g: &ExactMatrix,
    rows: &[usize],
    cols: &[usize],
) -> Result<usize, MatroidError> {
    Ok(g.submatrix_rank(rows, cols)?)
}

/// Rank of `s ∪ t` in the matroid on rows and columns of `g`:
/// `rank G(s, T \ t) + |t|`.
pub fn kung_rank(g: &ExactMatrix, rows: &[usize], cols: &[usize]) -> Result<usize, MatroidError> {
    let rows = normalize(rows, g.n_rows(), Axis::Row)?;
    let cols = normalize(cols, g.n_cols(), Axis::Column)?;
    Ok(kung_rank_unchecked(g, &rows, &cols))
}

fn kung_rank_unchecked(g: &ExactMatrix, rows: &[usize], cols: &[usize]) -> usize {
    let rest: Vec<usize> = (0..g.n_cols())
        .filter(|j| cols.binary_search(j).is_err())
        .collect();
    g.rank_of(rows, &rest) + cols.len()
}

/// The rank oracle `r(s ∪ t) = rank G(s, T \ t) + |t|` over the ground set
/// `row 0, .., row (m-1), col 0, .., col (n-1)`.
#[derive(Debug, Clone)]
pub struct KungOracle<M = ExactMatrix> {
    matrix: M,
    ground: GroundSet,
}

impl<M: Borrow<ExactMatrix>> KungOracle<M> {
    pub fn new(matrix: M) -> Self {
        let g = matrix.borrow();
        let ground = GroundSet::rows_then_cols(g.n_rows(), g.n_cols());
        KungOracle { matrix, ground }
    }

    pub fn matrix(&self) -> &ExactMatrix {
        self.matrix.borrow()
    }

    /// Ground position of row `i`.
    pub fn row_element(&self, i: usize) -> usize {
        i
    }

    /// Ground position of column `j`.
    pub fn col_element(&self, j: usize) -> usize {
        self.matrix().n_rows() + j
    }
}

impl<M: Borrow<ExactMatrix>> RankOracle for KungOracle<M> {
    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn rank(&self, subset: &[usize]) -> usize {
        let g = self.matrix();
        let split = subset.partition_point(|&e| e < g.n_rows());
        let cols: Vec<usize> = subset[split..].iter().map(|&e| e - g.n_rows()).collect();
        kung_rank_unchecked(g, &subset[..split], &cols)
    }
}

fn check_cap(n_rows: usize, n_cols: usize) -> Result<(), MatroidError> {
    let size = n_rows.max(n_cols);
    if size > LINKING_EXHAUSTIVE_CAP {
        return Err(MatroidError::GroundTooLarge {
            size,
            cap: LINKING_EXHAUSTIVE_CAP,
        });
    }
    Ok(())
}

/// Tabulates `f` on every `(U, V)` pair; indexed by `u << n_cols | v`.
fn tabulate(n_rows: usize, n_cols: usize, f: impl Fn(&[usize], &[usize]) -> usize) -> Vec<usize> {
    let mut table = Vec::with_capacity(1 << (n_rows + n_cols));
    for u in 0..1u64 << n_rows {
        let rows = mask_to_positions(u);
        for v in 0..1u64 << n_cols {
            table.push(f(&rows, &mask_to_positions(v)));
        }
    }
    table
}

/// Checks the three linking-system axioms for an arbitrary
/// `λ: 2^X × 2^Y -> N` with `|X| = n_rows`, `|Y| = n_cols`.
pub fn verify_linking_function(
    n_rows: usize,
    n_cols: usize,
    lambda: impl Fn(&[usize], &[usize]) -> usize,
    mode: VerifyMode,
) -> Result<AxiomReport, MatroidError> {
    let mut report = ReportBuilder::new(mode);
    match mode {
        VerifyMode::Exhaustive => {
            check_cap(n_rows, n_cols)?;
            let table = tabulate(n_rows, n_cols, &lambda);
            let at = |u: u64, v: u64| table[(u << n_cols | v) as usize];
            let w = |u: u64, v: u64| vec![mask_to_positions(u), mask_to_positions(v)];
            report.subsets_checked = table.len() as u64;
            let (us, vs) = (1u64 << n_rows, 1u64 << n_cols);
            for u in 0..us {
                for v in 0..vs {
                    let bound = u.count_ones().min(v.count_ones()) as usize;
                    report.check(Axiom::LinkingBounded, at(u, v), bound, || w(u, v));
                }
            }
            for u in 0..us {
                for v in 0..vs {
                    for x in (0..n_rows).map(|i| u | 1 << i).filter(|&x| x != u) {
                        report.check(Axiom::LinkingMonotone, at(u, v), at(x, v), || {
                            [w(u, v), w(x, v)].concat()
                        });
                    }
                    for y in (0..n_cols).map(|j| v | 1 << j).filter(|&y| y != v) {
                        report.check(Axiom::LinkingMonotone, at(u, v), at(u, y), || {
                            [w(u, v), w(u, y)].concat()
                        });
                    }
                }
            }
            let pairs = us * vs;
            for p in 0..pairs {
                let (u1, v1) = (p >> n_cols, p & (vs - 1));
                for q in p + 1..pairs {
                    let (u2, v2) = (q >> n_cols, q & (vs - 1));
                    let lhs = at(u1 & u2, v1 | v2) + at(u1 | u2, v1 & v2);
                    let rhs = at(u1, v1) + at(u2, v2);
                    report.check(Axiom::LinkingExchange, lhs, rhs, || {
                        [w(u1, v1), w(u2, v2)].concat()
                    });
                }
            }
        }
        VerifyMode::Sampled { seed, count } => {
            let mut rng = sampler(seed);
            for _ in 0..count {
                let (u1, v1) = (
                    random_subset(&mut rng, n_rows),
                    random_subset(&mut rng, n_cols),
                );
                let (u2, v2) = (
                    random_subset(&mut rng, n_rows),
                    random_subset(&mut rng, n_cols),
                );
                let (ui, uu) = (sorted_intersection(&u1, &u2), sorted_union(&u1, &u2));
                let (vi, vu) = (sorted_intersection(&v1, &v2), sorted_union(&v1, &v2));
                let l1 = lambda(&u1, &v1);
                let l2 = lambda(&u2, &v2);
                let l_shrunk = lambda(&ui, &vi);
                let l_a = lambda(&ui, &vu);
                let l_b = lambda(&uu, &vi);
                report.subsets_checked += 5;
                report.check(Axiom::LinkingBounded, l1, u1.len().min(v1.len()), || {
                    vec![u1.clone(), v1.clone()]
                });
                report.check(Axiom::LinkingMonotone, l_shrunk, l1, || {
                    vec![ui.clone(), vi.clone(), u1.clone(), v1.clone()]
                });
                report.check(Axiom::LinkingExchange, l_a + l_b, l1 + l2, || {
                    vec![u1.clone(), v1.clone(), u2.clone(), v2.clone()]
                });
            }
        }
    }
    Ok(report.finish())
}

/// The linking-system axioms for `λ(U, V) = rank G(U, V)`.
pub fn verify_bimatroid_axioms(
    g: &ExactMatrix,
    mode: VerifyMode,
) -> Result<AxiomReport, MatroidError> {
    verify_linking_function(g.n_rows(), g.n_cols(), |u, v| g.rank_of(u, v), mode)
}

/// Checks, for `ρ(s, t) = rank G(s, T \ t)`,
///
/// `ρ(s1 ∩ s2, t1 ∩ t2) + ρ(s1 ∪ s2, t1 ∪ t2) <= ρ(s1, t1) + ρ(s2, t2)`
///
/// over all (exhaustive) or sampled quadruples. Adding `|t1| + |t2|` to both
/// sides gives submodularity of [`kung_rank`].
pub fn verify_rank_exchange(
    g: &ExactMatrix,
    mode: VerifyMode,
) -> Result<AxiomReport, MatroidError> {
    let (n_rows, n_cols) = (g.n_rows(), g.n_cols());
    let rho = |s: &[usize], t: &[usize]| {
        let rest: Vec<usize> = (0..n_cols)
            .filter(|j| t.binary_search(j).is_err())
            .collect();
        g.rank_of(s, &rest)
    };
    let mut report = ReportBuilder::new(mode);
    match mode {
        VerifyMode::Exhaustive => {
            check_cap(n_rows, n_cols)?;
            let table = tabulate(n_rows, n_cols, rho);
            report.subsets_checked = table.len() as u64;
            let vs = 1u64 << n_cols;
            let at = |s: u64, t: u64| table[(s << n_cols | t) as usize];
            let pairs = (1u64 << n_rows) * vs;
            for p in 0..pairs {
                let (s1, t1) = (p >> n_cols, p & (vs - 1));
                for q in p..pairs {
                    let (s2, t2) = (q >> n_cols, q & (vs - 1));
                    let lhs = at(s1 & s2, t1 & t2) + at(s1 | s2, t1 | t2);
                    let rhs = at(s1, t1) + at(s2, t2);
                    report.check(Axiom::RankExchange, lhs, rhs, || {
                        [s1, t1, s2, t2]
                            .into_iter()
                            .map(mask_to_positions)
                            .collect()
                    });
                }
            }
        }
        VerifyMode::Sampled { seed, count } => {
            let mut rng = sampler(seed);
            for _ in 0..count {
                let (s1, t1) = (
                    random_subset(&mut rng, n_rows),
                    random_subset(&mut rng, n_cols),
                );
                let (s2, t2) = (
                    random_subset(&mut rng, n_rows),
                    random_subset(&mut rng, n_cols),
                );
                let lhs = rho(
                    &sorted_intersection(&s1, &s2),
                    &sorted_intersection(&t1, &t2),
                ) + rho(&sorted_union(&s1, &s2), &sorted_union(&t1, &t2));
                let rhs = rho(&s1, &t1) + rho(&s2, &t2);
                report.subsets_checked += 4;
                report.check(Axiom::RankExchange, lhs, rhs, || {
                    vec![s1.clone(), t1.clone(), s2.clone(), t2.clone()]
                });
            }
        }
    }
    Ok(report.finish())
}
