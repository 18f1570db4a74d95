//! Acceptance suite: one test per criterion, each printing a single
//! `acceptance <k> (<name>): pass` line (visible with `--nocapture`) and
//! enforcing its time budget.

mod common;

use std::time::{Duration, Instant};

use floerlocal::deduce::{phi_matrix, pipeline};
use floerlocal::hat::hat_of;
use floerlocal::localequiv::{is_locally_equivalent, standard_representative};
use floerlocal::mazur::build_gradings;
use floerlocal::obstruction::{lifting_oracle, not_realizable, OracleOutcome};
use floerlocal::standard::{
    build_standard, enumerate_params, enumerate_symmetric, phi, StandardParams,
};

fn family(n: i64) -> StandardParams {
    StandardParams::new(vec![1, -(n + 1), n + 1, -1]).expect("valid parameters")
}

fn finish(k: usize, name: &str, t: Instant, budget: Duration) {
    let elapsed = t.elapsed();
    assert!(
        elapsed < budget,
        "criterion {k} exceeded its time budget: {elapsed:.2?} >= {budget:?}"
    );
    println!("acceptance {k} ({name}): pass ({elapsed:.2?})");
}

#[test]
fn criterion_1_phi_table() {
    let t = Instant::now();
    for n in 1..=20 {
        let p = family(n);
        for j in 1..=n + 5 {
            let want = i64::from(j == 1 || j == n + 1);
            assert_eq!(phi(&p, j), want, "phi_{j} of the n={n} family member");
        }
    }
    finish(1, "phi table", t, Duration::from_secs(1));
}

#[test]
fn criterion_2_summand_matrix() {
    let t = Instant::now();
    let m = phi_matrix(20).expect("pipeline closes and the table is the identity");
    assert_eq!(m.rank, 20);
    assert_eq!(m.rows.len(), 20);
    for (i, row) in m.rows.iter().enumerate() {
        assert_eq!(row.len(), 20);
        for (c, &v) in row.iter().enumerate() {
            assert_eq!(v, i64::from(i == c), "entry ({i}, {c})");
        }
    }
    finish(2, "summand matrix", t, Duration::from_secs(1));
}

#[test]
fn criterion_3_base_case() {
    let t = Instant::now();
    let c = build_standard(&StandardParams::new(vec![1, -1]).unwrap()).complex;
    let square = c.tensor(&c).unwrap().reduce();
    assert_eq!(square.num_gens(), 9);
    assert!(square.is_knot_like().unwrap());
    let rep = standard_representative(&square, 6, 2).unwrap();
    assert_eq!(rep, Some(StandardParams::new(vec![1, -1, 1, -1]).unwrap()));
    finish(3, "base case", t, Duration::from_secs(30));
}

#[test]
fn criterion_4_pipeline() {
    let t = Instant::now();
    let classes = pipeline(8).expect("every step closes with a unique survivor");
    let expected: Vec<StandardParams> = (0..=8).map(family).collect();
    assert_eq!(classes, expected);
    // The per-step budget is 60 s; the whole run fitting inside one budget
    // bounds every step.
    finish(4, "pipeline", t, Duration::from_secs(60));
}

#[test]
fn criterion_5_ch_cross_check() {
    let t = Instant::now();
    for p in enumerate_params(6, 3) {
        let f = hat_of(&build_standard(&p).complex).unwrap();
        assert_eq!(
            f.ch_from_basis().unwrap(),
            f.ch_from_definition(),
            "characteristic multi-sets disagree on ({p})"
        );
    }
    let mut rng = common::seeded_rng(5);
    for i in 0..200 {
        let c = common::random_reduced_rank_one(&mut rng);
        assert!(c.num_gens() <= 12);
        let f = hat_of(&c).unwrap();
        assert_eq!(
            f.ch_from_basis().unwrap(),
            f.ch_from_definition(),
            "characteristic multi-sets disagree on random complex {i}"
        );
    }
    finish(5, "ch cross-check", t, Duration::from_secs(60));
}

#[test]
fn criterion_6_obstruction_certification() {
    let t = Instant::now();
    let mut prefixes: Vec<Vec<i64>> = vec![vec![1, -1, -1], vec![1, -1, 1, 1]];
    for n in 1..=3 {
        for l in 1..=3 {
            prefixes.push(vec![1, -n, -1, -l]);
        }
    }
    for n in 1..=3 {
        prefixes.push(vec![1, -n, -1, 1, 1]);
        prefixes.push(vec![1, -n, 1, 1]);
        prefixes.push(vec![1, -n, 1, -1, -1]);
    }
    for prefix in &prefixes {
        assert!(not_realizable(prefix), "predicate misses {prefix:?}");
        let bound = 2 * prefix.iter().map(|b| b.unsigned_abs() as u32).max().unwrap() + 2;
        let report = lifting_oracle(prefix, 2, bound).unwrap();
        assert_eq!(
            report.outcome,
            OracleOutcome::Refuted,
            "oracle fails to refute {prefix:?} at exp_bound={bound}"
        );
    }
    for control in [vec![1, -1], vec![1, -1, 1, -1]] {
        assert!(!not_realizable(&control));
        let report = lifting_oracle(&control, 2, 4).unwrap();
        assert_eq!(report.outcome, OracleOutcome::Exists, "control {control:?} must lift");
    }
    finish(6, "obstruction certification", t, Duration::from_secs(300));
}

#[test]
fn criterion_7_mazur_table() {
    let t = Instant::now();
    for n in 2..=12 {
        let table = build_gradings(n).unwrap();
        assert_eq!(table.points().len() as i64, 32 * n - 3, "point count at n={n}");
        let spot = |label: &str| {
            let p = table.point(label).unwrap_or_else(|| panic!("missing {label} at n={n}"));
            (p.a, p.m)
        };
        assert_eq!(spot("t_12"), (n + 1, 0));
        assert_eq!(spot("c"), (0, -2));
        assert_eq!(spot("t_13"), (n + 1, 1 - 2 * n));
        for i in 1..n {
            assert_eq!(spot(&format!("a^{i}_8")), (i, 2 * i - 2));
        }
        for p in table.points() {
            let twin_label = mirror_label(&p.label);
            let q = table
                .point(&twin_label)
                .unwrap_or_else(|| panic!("missing mirror {twin_label} at n={n}"));
            assert_eq!((q.a, q.m), (-p.a, p.m - 2 * p.a), "mirror grading of {}", p.label);
        }
    }
    finish(7, "mazur table", t, Duration::from_secs(1));
}

/// Label of the mirror point: `a^i_j <-> a^-i_-j`, `t_j <-> t_-j`, `c` fixed.
fn mirror_label(label: &str) -> String {
    let neg = |s: &str| -> String {
        let v: i64 = s.parse().unwrap();
        (-v).to_string()
    };
    if label == "c" {
        return "c".into();
    }
    if let Some(rest) = label.strip_prefix("a^") {
        let (i, j) = rest.split_once('_').unwrap();
        return format!("a^{}_{}", neg(i), neg(j));
    }
    if let Some(j) = label.strip_prefix("t_") {
        return format!("t_{}", neg(j));
    }
    panic!("unrecognized label {label}");
}

#[test]
fn criterion_8_reduction_invariance() {
    let t = Instant::now();
    let mut rng = common::seeded_rng(8);
    for i in 0..100 {
        let (c, skeleton) = common::random_unreduced_with_skeleton(&mut rng);
        let r = c.reduce();
        assert!(r.validate().is_valid(), "reduction broke validity on sample {i}");
        assert!(r.is_reduced(), "reduction left a unit entry on sample {i}");
        let hat_r = hat_of(&r).unwrap();
        let hat_s = hat_of(&skeleton).unwrap();
        assert_eq!(
            hat_r.total_homology(),
            hat_s.total_homology(),
            "hat homology changed on sample {i}"
        );
        assert_eq!(
            hat_r.ch_from_definition(),
            hat_s.ch_from_definition(),
            "characteristic multi-set changed on sample {i}"
        );
    }
    finish(8, "reduction invariance", t, Duration::from_secs(60));
}

#[test]
fn criterion_9_local_equivalence_sanity() {
    let t = Instant::now();
    let mut rng = common::seeded_rng(9);
    for i in 0..50 {
        let (c, _) = common::random_unreduced_with_skeleton(&mut rng);
        assert!(is_locally_equivalent(&c, &c).unwrap(), "reflexivity fails on sample {i}");
    }
    for i in 0..20 {
        let (c, _) = common::random_unreduced_with_skeleton(&mut rng);
        let acyclic = common::random_acyclic(&mut rng, i);
        let sum = c.direct_sum(&acyclic).unwrap();
        assert!(
            is_locally_equivalent(&c, &sum).unwrap(),
            "acyclic summand changed the local class on sample {i}"
        );
    }
    for p in enumerate_symmetric(6, 3) {
        let rep = standard_representative(&build_standard(&p).complex, 6, 3).unwrap();
        assert_eq!(rep, Some(p.clone()), "round-trip failed for ({p})");
    }
    finish(9, "local-equivalence sanity", t, Duration::from_secs(120));
}
