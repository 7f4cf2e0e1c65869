//! Acceptance suite. Runs as a plain binary (`harness = false`) and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use blockrank::format::{parse_instance, CertificateDocument};
use blockrank::matroid::{
    verify_bimatroid_axioms, verify_matroid_axioms, verify_rank_exchange, KungOracle, VerifyMode,
};
use blockrank::theorem::{
    brute_force_solve, check_conditions, extract_witness, rado_hall_on_kung, random_instance,
    search_space_size, verify_selection, GenParams,
};
use blockrank::{BlockInstance, Certificate, ExactMatrix, FieldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INSTANCES: u64 = 600;
const FIELDS: [FieldSpec; 4] = [
    FieldSpec::Prime(2),
    FieldSpec::Prime(3),
    FieldSpec::Prime(5),
    FieldSpec::Rational,
];

fn params(field: FieldSpec, max_dim: usize, max_blocks: usize) -> GenParams {
    GenParams {
        field,
        max_rows: max_dim,
        max_cols: max_dim,
        max_row_blocks: max_blocks,
        max_col_blocks: max_blocks,
    }
}

/// Instances whose quotas fit their blocks and whose matrices are low rank
/// or sparse, so the verdict depends on the entries rather than on sizes.
fn structured_instance(seed: u64) -> BlockInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = FIELDS[seed as usize % 4];
    let (r, c) = (rng.gen_range(1..=6usize), rng.gen_range(1..=6usize));
    let entry = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            0
        } else {
            rng.gen_range(-3i64..=3)
        }
    };
    let values: Vec<i64> = if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=r.min(c));
        let a: Vec<i64> = (0..r * k).map(|_| entry(&mut rng)).collect();
        let b: Vec<i64> = (0..k * c).map(|_| entry(&mut rng)).collect();
        (0..r * c)
            .map(|x| (0..k).map(|l| a[x / c * k + l] * b[l * c + x % c]).sum())
            .collect()
    } else {
        (0..r * c).map(|_| entry(&mut rng)).collect()
    };
    let matrix = ExactMatrix::from_i64(field, r, c, &values).unwrap();
    let mut partition = |len: usize| {
        let mut blocks = vec![Vec::new(); rng.gen_range(1..=3)];
        for i in 0..len {
            let b = rng.gen_range(0..blocks.len());
            blocks[b].push(i);
        }
        blocks
    };
    let (row_blocks, col_blocks) = (partition(r), partition(c));
    let total = rng.gen_range(1..=r.min(c));
    let mut spread = |blocks: &[Vec<usize>]| {
        let mut quotas = vec![0; blocks.len()];
        for _ in 0..total {
            let open: Vec<usize> = (0..blocks.len())
                .filter(|&b| quotas[b] < blocks[b].len())
                .collect();
            quotas[open[rng.gen_range(0..open.len())]] += 1;
        }
        quotas
    };
    let (row_quotas, col_quotas) = (spread(&row_blocks), spread(&col_blocks));
    BlockInstance::new(matrix, row_blocks, col_blocks, row_quotas, col_quotas).unwrap()
}

/// The criterion-1 corpus: generator draws (fields cycle with the seed)
/// followed by structured draws.
fn corpus() -> Vec<BlockInstance> {
    let drawn = (0..INSTANCES)
        .map(|seed| random_instance(seed, &params(FIELDS[seed as usize % 4], 6, 3)).unwrap());
    let structured = (0..INSTANCES).map(|seed| structured_instance(50_000 + seed));
    drawn.chain(structured).collect()
}

struct Report {
    failed: bool,
}

impl Report {
    fn line(&mut self, n: u32, ok: bool, detail: String) {
        self.failed |= !ok;
        println!(
            "criterion {n}: {} ({detail})",
            if ok { "PASS" } else { "FAIL" }
        );
    }
}

fn criterion_1(corpus: &[BlockInstance]) -> (bool, String) {
    let start = Instant::now();
    let mut feasible = 0;
    let mut by_size = 0;
    let mut mismatches = Vec::new();
    for (seed, inst) in corpus.iter().enumerate() {
        let verdict = check_conditions(inst).unwrap().feasible;
        let oracle = brute_force_solve(inst).unwrap().is_some();
        feasible += verdict as usize;
        by_size += (search_space_size(inst) == 0) as usize;
        if verdict != oracle {
            mismatches.push(seed);
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(60);
    (
        ok,
        format!(
            "{} instances, {feasible} feasible, {by_size} infeasible by block sizes, {} disagreements {mismatches:?}, {:.3}s",
            corpus.len(),
            mismatches.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let mut violations = 0;
    let mut inequalities = 0;
    let count = 120;
    for seed in 0..count {
        let inst =
            random_instance(10_000 + seed, &params(FIELDS[seed as usize % 4], 5, 1)).unwrap();
        let g = inst.matrix();
        assert!(g.n_rows() + g.n_cols() <= 10);
        let report = verify_matroid_axioms(&KungOracle::new(g), VerifyMode::Exhaustive).unwrap();
        violations += report.violation_count;
        inequalities += report.inequalities_checked;
    }
    (
        violations == 0,
        format!("{count} matrices, {inequalities} inequalities, {violations} violations"),
    )
}

fn criterion_3() -> (bool, String) {
    let mut violations = 0;
    let mut inequalities = 0;
    let count = 60;
    for seed in 0..count {
        let inst =
            random_instance(20_000 + seed, &params(FIELDS[seed as usize % 4], 4, 1)).unwrap();
        let g = inst.matrix();
        for report in [
            verify_bimatroid_axioms(g, VerifyMode::Exhaustive).unwrap(),
            verify_rank_exchange(g, VerifyMode::Exhaustive).unwrap(),
        ] {
            violations += report.violation_count;
            inequalities += report.inequalities_checked;
        }
    }
    (
        violations == 0,
        format!("{count} matrices, {inequalities} inequalities, {violations} violations"),
    )
}

/// Rank of `G(∪_I S_i, ∪_K T_k)` and the bound, computed without the library's
/// condition checker.
fn recompute(inst: &BlockInstance, ib: &[usize], kb: &[usize]) -> (usize, usize) {
    let rows: Vec<usize> = ib
        .iter()
        .flat_map(|&i| inst.row_blocks()[i].clone())
        .collect();
    let cols: Vec<usize> = kb
        .iter()
        .flat_map(|&k| inst.col_blocks()[k].clone())
        .collect();
    let rank = inst.matrix().submatrix(&rows, &cols).unwrap().rank();
    let demand: usize = ib.iter().map(|&i| inst.row_quotas()[i]).sum::<usize>()
        + kb.iter().map(|&k| inst.col_quotas()[k]).sum::<usize>();
    (rank, demand.saturating_sub(inst.total()))
}

fn criterion_4(corpus: &[BlockInstance]) -> (bool, String) {
    let mut bad = Vec::new();
    let (mut feasible, mut infeasible) = (0, 0);
    for (seed, inst) in corpus.iter().enumerate() {
        let expected = check_conditions(inst).unwrap().feasible;
        let ok = match extract_witness(inst).unwrap() {
            Certificate::Feasible {
                selection,
                determinant,
            } => {
                feasible += 1;
                let counts_ok = selection
                    .row_picks
                    .iter()
                    .zip(inst.row_quotas())
                    .chain(selection.col_picks.iter().zip(inst.col_quotas()))
                    .all(|(pick, &q)| pick.len() == q);
                let sub = inst
                    .matrix()
                    .submatrix(&selection.rows(), &selection.cols())
                    .unwrap();
                expected
                    && counts_ok
                    && verify_selection(inst, &selection).is_ok()
                    && !determinant.is_zero()
                    && sub.determinant().unwrap() == determinant
                    && sub.rank() == inst.total()
            }
            Certificate::Infeasible(v) => {
                infeasible += 1;
                let (rank, bound) = recompute(inst, &v.row_blocks, &v.col_blocks);
                !expected && rank == v.lhs_rank && bound == v.rhs_bound && rank < bound
            }
        };
        if !ok {
            bad.push(seed);
        }
    }
    (
        bad.is_empty(),
        format!("{feasible} witnesses, {infeasible} violations, failures {bad:?}"),
    )
}

fn criterion_5(corpus: &[BlockInstance]) -> (bool, String) {
    let bad: Vec<usize> = corpus
        .iter()
        .enumerate()
        .filter(|(_, inst)| {
            rado_hall_on_kung(inst).unwrap().feasible != check_conditions(inst).unwrap().feasible
        })
        .map(|(seed, _)| seed)
        .collect();
    (
        bad.is_empty(),
        format!("{} instances, disagreements {bad:?}", corpus.len()),
    )
}

fn criterion_6(corpus: &[BlockInstance]) -> (bool, String) {
    let bad: Vec<usize> = corpus
        .iter()
        .enumerate()
        .filter(|(_, inst)| {
            let t = inst.transposed();
            check_conditions(&t).unwrap().feasible != check_conditions(inst).unwrap().feasible
                || extract_witness(&t).unwrap().is_feasible()
                    != extract_witness(inst).unwrap().is_feasible()
        })
        .map(|(seed, _)| seed)
        .collect();
    (
        bad.is_empty(),
        format!("{} instances, disagreements {bad:?}", corpus.len()),
    )
}

fn blockrank(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_blockrank"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn criterion_7() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    let field_names = ["gf2", "gf:3", "gf 5", "rational"];
    for seed in 0..50u64 {
        let file = dir.path().join(format!("inst{seed}.txt"));
        let cert = dir.path().join(format!("cert{seed}.json"));
        let field = field_names[seed as usize % 4];
        let seed_text = seed.to_string();
        let (code, _) = blockrank(&[
            "gen",
            "--seed",
            &seed_text,
            "--field",
            field,
            "--out",
            s(&file),
        ]);
        let text = std::fs::read_to_string(&file).unwrap_or_default();
        let parsed = parse_instance(&text);
        let expected = random_instance(seed, &params(FIELDS[seed as usize % 4], 6, 3)).unwrap();
        let (solve_code, first) = blockrank(&["solve", s(&file)]);
        let (_, second) = blockrank(&["solve", s(&file)]);
        std::fs::write(&cert, &first).unwrap();
        let (verify_code, _) = blockrank(&["verify", s(&file), s(&cert)]);
        let reverified = CertificateDocument::from_json(&first)
            .ok()
            .zip(parsed.as_ref().ok())
            .is_some_and(|(doc, inst)| doc.reverify(inst).is_ok());
        let ok = code == 0
            && parsed.as_ref() == Ok(&expected)
            && first == second
            && solve_code
                == if check_conditions(&expected).unwrap().feasible {
                    0
                } else {
                    1
                }
            && verify_code == 0
            && reverified;
        if !ok {
            failures.push(seed);
        }
    }

    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut golden_checked = 0;
    for stem in ["gf5_3x3", "all_ones_2x2", "identity_2x2"] {
        for command in ["check", "solve", "oracle"] {
            let (_, got) = blockrank(&[command, s(&golden.join(format!("{stem}.txt")))]);
            let want =
                std::fs::read_to_string(golden.join(format!("{stem}.{command}.json"))).unwrap();
            golden_checked += 1;
            if got != want {
                failures.push(1000 + golden_checked);
            }
        }
    }
    (
        failures.is_empty(),
        format!("50 seeds round-tripped, {golden_checked} golden outputs, failures {failures:?}"),
    )
}

fn main() {
    let corpus = corpus();
    let mut report = Report { failed: false };
    let (ok, detail) = criterion_1(&corpus);
    report.line(1, ok, detail);
    let (ok, detail) = criterion_2();
    report.line(2, ok, detail);
    let (ok, detail) = criterion_3();
    report.line(3, ok, detail);
    let (ok, detail) = criterion_4(&corpus);
    report.line(4, ok, detail);
    let (ok, detail) = criterion_5(&corpus);
    report.line(5, ok, detail);
    let (ok, detail) = criterion_6(&corpus);
    report.line(6, ok, detail);
    let (ok, detail) = criterion_7();
    report.line(7, ok, detail);
    if report.failed {
        std::process::exit(1);
    }
}
