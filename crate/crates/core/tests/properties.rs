//! Invariants checked against small independent reference implementations.

use blockrank::matroid::{kung_rank, linking_rank, rado_hall_feasible, KungOracle};
use blockrank::theorem::{brute_force_solve, check_conditions, extract_witness, verify_selection};
use blockrank::{BlockInstance, Certificate, ExactMatrix, FieldSpec, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const FIELDS: [FieldSpec; 4] = [
    FieldSpec::Prime(2),
    FieldSpec::Prime(3),
    FieldSpec::Prime(7),
    FieldSpec::Rational,
];

/// Reference arithmetic: residues as i64 or big rationals, no shared code
/// with the library.
#[derive(Clone, Debug, PartialEq)]
enum Ref {
    Mod(i64, i64),
    Q(BigRational),
}

impl Ref {
    fn new(field: FieldSpec, v: i64) -> Ref {
        match field {
            FieldSpec::Prime(p) => Ref::Mod(v.rem_euclid(p as i64), p as i64),
            FieldSpec::Rational => Ref::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Ref::Mod(a, _) => *a == 0,
            Ref::Q(q) => q.is_zero(),
        }
    }

    fn zero_like(&self) -> Ref {
        match self {
            Ref::Mod(_, p) => Ref::Mod(0, *p),
            Ref::Q(_) => Ref::Q(BigRational::zero()),
        }
    }

    fn add(&self, o: &Ref) -> Ref {
        match (self, o) {
            (Ref::Mod(a, p), Ref::Mod(b, _)) => Ref::Mod((a + b) % p, *p),
            (Ref::Q(a), Ref::Q(b)) => Ref::Q(a + b),
            _ => unreachable!(),
        }
    }

    fn neg(&self) -> Ref {
        match self {
            Ref::Mod(a, p) => Ref::Mod((p - a) % p, *p),
            Ref::Q(a) => Ref::Q(-a),
        }
    }

    fn mul(&self, o: &Ref) -> Ref {
        match (self, o) {
            (Ref::Mod(a, p), Ref::Mod(b, _)) => Ref::Mod(a * b % p, *p),
            (Ref::Q(a), Ref::Q(b)) => Ref::Q(a * b),
            _ => unreachable!(),
        }
    }

    fn inv(&self) -> Ref {
        match self {
            // brute-force search is fine for the tiny primes used here
            Ref::Mod(a, p) => Ref::Mod((1..*p).find(|x| a * x % p == 1).unwrap(), *p),
            Ref::Q(a) => Ref::Q(a.recip()),
        }
    }

    fn matches(&self, s: &Scalar) -> bool {
        match self {
            Ref::Mod(a, _) => s.as_residue() == Some(*a as u32),
            Ref::Q(q) => s.as_rational() == Some(q),
        }
    }
}

fn ref_matrix(field: FieldSpec, rows: usize, cols: usize, vals: &[i64]) -> Vec<Vec<Ref>> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| Ref::new(field, vals[i * cols + j]))
                .collect()
        })
        .collect()
}

/// Textbook elimination with full division.
fn ref_rank(mut m: Vec<Vec<Ref>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].inv();
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].mul(&inv).neg();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.add(&f.mul(p));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Laplace expansion along the first row.
fn ref_det(m: &[Vec<Ref>]) -> Ref {
    match m.len() {
        0 => unreachable!(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = m[0][0].zero_like();
            for j in 0..n {
                let minor: Vec<Vec<Ref>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&ref_det(&minor));
                acc = acc.add(&if j % 2 == 0 { term } else { term.neg() });
            }
            acc
        }
    }
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = (FieldSpec, usize, usize, Vec<i64>)> {
    (0..FIELDS.len(), 1..=max_dim, 1..=max_dim).prop_flat_map(|(f, r, c)| {
        proptest::collection::vec(-4i64..=4, r * c).prop_map(move |v| (FIELDS[f], r, c, v))
    })
}

fn square_strategy(max_dim: usize) -> impl Strategy<Value = (FieldSpec, usize, Vec<i64>)> {
    (0..FIELDS.len(), 1..=max_dim).prop_flat_map(|(f, n)| {
        // sparse-ish entries make singular matrices common enough to matter
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 4 => -4i64..=4], n * n)
            .prop_map(move |v| (FIELDS[f], n, v))
    })
}

fn scalar_strategy() -> impl Strategy<Value = (FieldSpec, [(i64, i64); 3])> {
    let frac = (-20i64..=20, 1i64..=9);
    (0..FIELDS.len(), [frac.clone(), frac.clone(), frac]).prop_map(|(f, xs)| (FIELDS[f], xs))
}

fn to_scalar(field: FieldSpec, (n, d): (i64, i64)) -> Scalar {
    match field {
        // denominators are irrelevant for the residue checks
        FieldSpec::Prime(_) => Scalar::from_i64(field, n),
        FieldSpec::Rational => {
            Scalar::from_fraction(field, BigInt::from(n), BigInt::from(d)).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((field, xs) in scalar_strategy()) {
        let [a, b, c] = xs.map(|x| to_scalar(field, x));
        let zero = Scalar::zero(field);
        let one = Scalar::one(field);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.add(&zero).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        prop_assert_eq!(a.sub(&b).unwrap().add(&b).unwrap(), a.clone());
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            prop_assert_eq!(b.div(&a).unwrap().mul(&a).unwrap(), b.clone());
        }
        let text = a.to_string();
        prop_assert_eq!(Scalar::parse(field, &text).unwrap(), a);
    }

    #[test]
    fn rank_matches_reference((field, r, c, vals) in matrix_strategy(6)) {
        let g = ExactMatrix::from_i64(field, r, c, &vals).unwrap();
        let rank = g.rank();
        prop_assert_eq!(rank, ref_rank(ref_matrix(field, r, c, &vals)));
        prop_assert!(rank <= r.min(c));
        prop_assert_eq!(g.transpose().rank(), rank);
    }

    #[test]
    fn rank_under_deletion((field, r, c, vals) in matrix_strategy(6), drop_row in 0usize..6, drop_col in 0usize..6) {
        let g = ExactMatrix::from_i64(field, r, c, &vals).unwrap();
        let rank = g.rank();
        let all_rows: Vec<usize> = (0..r).collect();
        let all_cols: Vec<usize> = (0..c).collect();
        let cols: Vec<usize> = all_cols.iter().copied().filter(|&j| j != drop_col % c).collect();
        let rows: Vec<usize> = all_rows.iter().copied().filter(|&i| i != drop_row % r).collect();
        let without_col = g.submatrix_rank(&all_rows, &cols).unwrap();
        let without_row = g.submatrix_rank(&rows, &all_cols).unwrap();
        prop_assert!(without_col <= rank && rank <= without_col + 1);
        prop_assert!(without_row <= rank && rank <= without_row + 1);
        prop_assert!(g.submatrix_rank(&rows, &cols).unwrap() <= without_col.min(without_row));
    }

    #[test]
    fn determinant_matches_cofactors((field, n, vals) in square_strategy(5)) {
        let g = ExactMatrix::from_i64(field, n, n, &vals).unwrap();
        let det = g.determinant().unwrap();
        let m = ref_matrix(field, n, n, &vals);
        prop_assert!(ref_det(&m).matches(&det), "det {} for {:?}", det, vals);
        prop_assert_eq!(!det.is_zero(), g.rank() == n);
        prop_assert_eq!(g.transpose().determinant().unwrap(), det);
    }

    #[test]
    fn kung_rank_invariants((field, r, c, vals) in matrix_strategy(4), rmask in 0u32..16, cmask in 0u32..16, extra in 0usize..8) {
        let g = ExactMatrix::from_i64(field, r, c, &vals).unwrap();
        let s: Vec<usize> = (0..r).filter(|i| rmask >> i & 1 == 1).collect();
        let t: Vec<usize> = (0..c).filter(|j| cmask >> j & 1 == 1).collect();
        let all_cols: Vec<usize> = (0..c).collect();
        prop_assert_eq!(kung_rank(&g, &[], &t).unwrap(), t.len());
        prop_assert_eq!(kung_rank(&g, &s, &[]).unwrap(), linking_rank(&g, &s, &all_cols).unwrap());
        let base = kung_rank(&g, &s, &t).unwrap();
        prop_assert!(base <= s.len() + t.len());
        // adding one element raises the rank by zero or one
        let e = extra % (r + c);
        let (mut s2, mut t2) = (s.clone(), t.clone());
        if e < r { s2.push(e) } else { t2.push(e - r) }
        let grown = kung_rank(&g, &s2, &t2).unwrap();
        prop_assert!(base <= grown && grown <= base + 1);
    }

    #[test]
    fn rado_quota_behaviour((field, r, c, vals) in matrix_strategy(4), assign in proptest::collection::vec(0usize..3, 8), quotas in proptest::collection::vec(0usize..3, 3)) {
        let g = ExactMatrix::from_i64(field, r, c, &vals).unwrap();
        let oracle = KungOracle::new(&g);
        let mut families = vec![Vec::new(); 3];
        for e in 0..r + c {
            families[assign[e]].push(e);
        }
        let first = rado_hall_feasible(&oracle, &families, &quotas).unwrap();
        prop_assert_eq!(&rado_hall_feasible(&oracle, &families, &quotas).unwrap(), &first);

        // lowering a quota never hurts
        for k in 0..3 {
            if quotas[k] > 0 && first.feasible {
                let mut lower = quotas.clone();
                lower[k] -= 1;
                prop_assert!(rado_hall_feasible(&oracle, &families, &lower).unwrap().feasible);
            }
        }
        // an extra empty family with quota zero changes nothing
        let mut fam2 = families.clone();
        fam2.push(Vec::new());
        let mut q2 = quotas.clone();
        q2.push(0);
        prop_assert_eq!(rado_hall_feasible(&oracle, &fam2, &q2).unwrap().feasible, first.feasible);
        // a quota above the family size is infeasible
        let mut big = quotas.clone();
        big[0] = families[0].len() + 1;
        prop_assert!(!rado_hall_feasible(&oracle, &families, &big).unwrap().feasible);
    }

    #[test]
    fn conditions_witness_and_brute_force_agree(
        (field, r, c, vals) in matrix_strategy(4),
        row_assign in proptest::collection::vec(0usize..2, 4),
        col_assign in proptest::collection::vec(0usize..2, 4),
        units in proptest::collection::vec(0usize..2, 4),
        col_units in proptest::collection::vec(0usize..2, 4),
    ) {
        let g = ExactMatrix::from_i64(field, r, c, &vals).unwrap();
        let mut row_blocks = vec![Vec::new(); 2];
        (0..r).for_each(|i| row_blocks[row_assign[i]].push(i));
        let mut col_blocks = vec![Vec::new(); 2];
        (0..c).for_each(|j| col_blocks[col_assign[j]].push(j));
        let total = r.min(c).min(units.len());
        let mut rq = vec![0; 2];
        let mut cq = vec![0; 2];
        for k in 0..total {
            rq[units[k]] += 1;
            cq[col_units[k]] += 1;
        }
        let inst = BlockInstance::new(g, row_blocks, col_blocks, rq, cq).unwrap();
        let feasible = check_conditions(&inst).unwrap().feasible;
        prop_assert_eq!(brute_force_solve(&inst).unwrap().is_some(), feasible);
        match extract_witness(&inst).unwrap() {
            Certificate::Feasible { selection, determinant } => {
                prop_assert!(feasible);
                prop_assert!(verify_selection(&inst, &selection).is_ok());
                prop_assert!(!determinant.is_zero());
            }
            Certificate::Infeasible(v) => {
                prop_assert!(!feasible);
                prop_assert!(v.lhs_rank < v.rhs_bound);
            }
        }
    }
}
