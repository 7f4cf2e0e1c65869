use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{mask_to_positions, MatroidError, RankOracle};

/// Largest ground set checked exhaustively by [`verify_matroid_axioms`].
pub const MATROID_EXHAUSTIVE_CAP: usize = 12;

/// Violations beyond this many are counted but not stored.
pub const MAX_RECORDED_VIOLATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

/// Each axiom is an inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `r(A) <= |A|`; witness `[A]`.
    BoundedByCardinality,
    /// `r(A) <= r(B)` for `A ⊆ B`; witness `[A, B]`.
    Monotone,
    /// `r(A ∪ B) + r(A ∩ B) <= r(A) + r(B)`; witness `[A, B]`.
    Submodular,
    /// `λ(U, V) <= min(|U|, |V|)`; witness `[U, V]`.
    LinkingBounded,
    /// `λ(U', V') <= λ(U, V)` for `U' ⊆ U`, `V' ⊆ V`; witness `[U', V', U, V]`.
    LinkingMonotone,
    /// `λ(U1 ∩ U2, V1 ∪ V2) + λ(U1 ∪ U2, V1 ∩ V2) <= λ(U1, V1) + λ(U2, V2)`;
    /// witness `[U1, V1, U2, V2]`.
    LinkingExchange,
    /// `ρ(s1 ∩ s2, t1 ∩ t2) + ρ(s1 ∪ s2, t1 ∪ t2) <= ρ(s1, t1) + ρ(s2, t2)` with
    /// `ρ(s, t) = rank G(s, T \ t)`; witness `[s1, t1, s2, t2]`.
    RankExchange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub subsets: Vec<Vec<usize>>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub passed: bool,
    /// First violations in canonical enumeration order, at most
    /// [`MAX_RECORDED_VIOLATIONS`] of them.
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub subsets_checked: u64,
    pub inequalities_checked: u64,
    pub mode: VerifyMode,
}

pub(crate) struct ReportBuilder {
    violations: Vec<Violation>,
    violation_count: u64,
    pub(crate) subsets_checked: u64,
    inequalities_checked: u64,
    mode: VerifyMode,
}

impl ReportBuilder {
    pub(crate) fn new(mode: VerifyMode) -> Self {
        ReportBuilder {
            violations: Vec::new(),
            violation_count: 0,
            subsets_checked: 0,
            inequalities_checked: 0,
            mode,
        }
    }

    /// Records `lhs <= rhs`; `witness` is only evaluated on failure.
    pub(crate) fn check(
        &mut self,
        axiom: Axiom,
        lhs: usize,
        rhs: usize,
        witness: impl FnOnce() -> Vec<Vec<usize>>,
    ) {
        self.inequalities_checked += 1;
        if lhs <= rhs {
            return;
        }
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED_VIOLATIONS {
            self.violations.push(Violation {
                axiom,
                subsets: witness(),
                lhs,
                rhs,
            });
        }
    }

    pub(crate) fn finish(self) -> AxiomReport {
        AxiomReport {
            passed: self.violation_count == 0,
            violations: self.violations,
            violation_count: self.violation_count,
            subsets_checked: self.subsets_checked,
            inequalities_checked: self.inequalities_checked,
            mode: self.mode,
        }
    }
}

pub(crate) fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter()
        .copied()
        .filter(|x| b.binary_search(x).is_ok())
        .collect()
}

pub(crate) fn random_subset(rng: &mut ChaCha8Rng, size: usize) -> Vec<usize> {
    (0..size).filter(|_| rng.gen_bool(0.5)).collect()
}

pub(crate) fn sampler(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Checks the three matroid rank axioms.
///
/// Exhaustive mode tabulates `r` on all `2^|E|` subsets, then checks
/// cardinality on every subset, monotonicity on every single-element
/// extension `A ⊂ A + e` (which implies it for all `A ⊆ B`), and
/// submodularity on every unordered pair, all in ascending bitmask order.
pub fn verify_matroid_axioms<O: RankOracle + ?Sized>(
    oracle: &O,
    mode: VerifyMode,
) -> Result<AxiomReport, MatroidError> {
    match mode {
        VerifyMode::Exhaustive => exhaustive(oracle),
        VerifyMode::Sampled { seed, count } => sampled(oracle, seed, count),
    }
}

fn requery<O: RankOracle + ?Sized>(
    oracle: &O,
    subset: &[usize],
    first: usize,
) -> Result<(), MatroidError> {
    let second = oracle.rank(subset);
    if second != first {
        return Err(MatroidError::NondeterministicOracle {
            subset: subset.to_vec(),
            first,
            second,
        });
    }
    Ok(())
}

fn exhaustive<O: RankOracle + ?Sized>(oracle: &O) -> Result<AxiomReport, MatroidError> {
    let n = oracle.ground().len();
    if n > MATROID_EXHAUSTIVE_CAP {
        return Err(MatroidError::GroundTooLarge {
            size: n,
            cap: MATROID_EXHAUSTIVE_CAP,
        });
    }
    let full = 1u64 << n;
    let table: Vec<usize> = (0..full)
        .map(|m| oracle.rank(&mask_to_positions(m)))
        .collect();
    requery(oracle, &[], table[0])?;
    requery(
        oracle,
        &mask_to_positions(full - 1),
        table[(full - 1) as usize],
    )?;
    for e in 0..n {
        requery(oracle, &[e], table[1 << e])?;
    }

    let mut report = ReportBuilder::new(VerifyMode::Exhaustive);
    report.subsets_checked = full;
    for a in 0..full {
        report.check(
            Axiom::BoundedByCardinality,
            table[a as usize],
            a.count_ones() as usize,
            || vec![mask_to_positions(a)],
        );
    }
    for a in 0..full {
        for e in 0..n {
            let b = a | 1 << e;
            if b != a {
                report.check(
                    Axiom::Monotone,
                    table[a as usize],
                    table[b as usize],
                    || vec![mask_to_positions(a), mask_to_positions(b)],
                );
            }
        }
    }
    for a in 0..full {
        for b in a + 1..full {
            let lhs = table[(a | b) as usize] + table[(a & b) as usize];
            let rhs = table[a as usize] + table[b as usize];
            report.check(Axiom::Submodular, lhs, rhs, || {
                vec![mask_to_positions(a), mask_to_positions(b)]
            });
        }
    }
    Ok(report.finish())
}

fn sampled<O: RankOracle + ?Sized>(
    oracle: &O,
    seed: u64,
    count: usize,
) -> Result<AxiomReport, MatroidError> {
    let n = oracle.ground().len();
    let mut rng = sampler(seed);
    let mut report = ReportBuilder::new(VerifyMode::Sampled { seed, count });
    for k in 0..count {
        let a = random_subset(&mut rng, n);
        let b = random_subset(&mut rng, n);
        let cup = sorted_union(&a, &b);
        let cap = sorted_intersection(&a, &b);
        let (ra, rb, rcup, rcap) = (
            oracle.rank(&a),
            oracle.rank(&b),
            oracle.rank(&cup),
            oracle.rank(&cap),
        );
        if k == 0 {
            requery(oracle, &a, ra)?;
        }
        report.subsets_checked += 4;
        report.check(Axiom::BoundedByCardinality, ra, a.len(), || vec![a.clone()]);
        report.check(Axiom::Monotone, rcap, ra, || vec![cap.clone(), a.clone()]);
        report.check(Axiom::Monotone, ra, rcup, || vec![a.clone(), cup.clone()]);
        report.check(Axiom::Submodular, rcup + rcap, ra + rb, || {
            vec![a.clone(), b.clone()]
        });
    }
    Ok(report.finish())
}

/// Re-evaluates a stored matroid violation against `oracle`; true iff it
/// still fails with the recorded sides.
pub fn recheck_matroid_violation<O: RankOracle + ?Sized>(oracle: &O, v: &Violation) -> bool {
    let (lhs, rhs) = match (v.axiom, v.subsets.as_slice()) {
        (Axiom::BoundedByCardinality, [a]) => (oracle.rank(a), a.len()),
        (Axiom::Monotone, [a, b]) => {
            if sorted_intersection(a, b) != *a {
                return false;
            }
            (oracle.rank(a), oracle.rank(b))
        }
        (Axiom::Submodular, [a, b]) => (
            oracle.rank(&sorted_union(a, b)) + oracle.rank(&sorted_intersection(a, b)),
            oracle.rank(a) + oracle.rank(b),
        ),
        _ => return false,
    };
    lhs == v.lhs && rhs == v.rhs && lhs > rhs
}
