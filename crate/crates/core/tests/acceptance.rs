//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line and then
//! asserts, so `cargo test --test acceptance -- --nocapture` shows a summary.

mod common;

use std::io::Write;
use std::time::Instant;

use facial_thue::analysis::{a_def, a_rec, char_roots, list_size};
use facial_thue::engine::{reconstruct, run, ListAssignment, Record, RecordEntry, Status};
use facial_thue::families::{colour_family, FamilyError, FamilyInstance};
use facial_thue::generators::{generate_family, random_plane_graph, Family};
use facial_thue::oracle::{ec_vs_oracle, pi_f_exact, OracleBudget};
use facial_thue::repetition::verify_facial_nonrepetitive;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    // Straight to the process stdout, so the line shows without --nocapture.
    let _ = writeln!(std::io::stdout().lock(), "{tag} criterion {n}: {detail}");
}

#[test]
fn criterion_1_counting_identities() {
    let t = Instant::now();
    let mut mismatches = Vec::new();
    for delta in 1..=6u64 {
        for m in 1..=16 {
            let def = a_def(m, delta);
            let rec = a_rec(m, delta);
            let dp = BigUint::from(common::a_dp(m, delta as u128));
            if def != rec || rec != dp {
                mismatches.push((delta, m));
            }
        }
        let d = delta as u128;
        let base = [2 * d + 1, 8 * d + 1, 4 * d * d + 20 * d + 1];
        for (i, b) in base.iter().enumerate() {
            if a_rec(i + 1, delta) != BigUint::from(*b) {
                mismatches.push((delta, i + 1));
            }
        }
    }
    let three: Vec<_> = (1..=3).map(|m| a_def(m, 3)).collect();
    let ok = mismatches.is_empty() && three == [7u32, 25, 97].map(BigUint::from);
    report(
        1,
        ok,
        format!(
            "a_def = a_rec for Δ 1..6, m 1..16; Δ=3 bases {three:?}; {:.2?}",
            t.elapsed()
        ),
    );
    assert!(ok, "mismatches at {mismatches:?}");
}

#[test]
fn criterion_2_root_constants() {
    let r = char_roots(3).unwrap();
    let exact = 1.0 + 2f64.cbrt() + 4f64.cbrt();
    let bisected = common::bisect_root(3);
    let ((re1, im1), (re2, im2)) = common::deflated_pair(3, bisected);
    let pair_ok = [(r.lambda1, (re1, im1)), (r.lambda2, (re2, im2))]
        .iter()
        .all(|(z, (re, im))| (z.re - re).abs() < 1e-9 && (z.im - im).abs() < 1e-9);
    let printed = (r.lambda1.re + 0.424).abs() < 1e-3 && (r.lambda1.im.abs() - 0.284).abs() < 1e-3;
    let ok = (r.lambda0 - exact).abs() < 1e-9
        && (r.lambda0 - bisected).abs() < 1e-9
        && r.lambda0 < 3.85
        && r.lambda0 * r.lambda0 < 15.0
        && pair_ok
        && printed
        && (r.lambda1.im + r.lambda2.im).abs() < 1e-15;
    report(
        2,
        ok,
        format!(
            "λ0(3) = {:.10}, λ0² = {:.6}, pair {:.4}±{:.4}i",
            r.lambda0,
            r.lambda0 * r.lambda0,
            r.lambda1.re,
            r.lambda1.im.abs()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_3_threshold_formula() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for delta in 4..=1000u64 {
        let s = list_size(delta).unwrap();
        let root = common::bisect_root(delta);
        let sq = root * root;
        // Reference value of the ceiling, guarded against near-integers.
        let frac = (sq + 0.5).fract();
        let reference = (sq + 0.5).ceil() as u64;
        let ambiguous = frac < 1e-9 || frac > 1.0 - 1e-9;
        let ok = s.l < 5 * delta
            && s.margin_certified
            && s.ceiling_certified
            && sq <= s.l as f64 - 0.5
            && (ambiguous || s.l == reference)
            && (s.lambda0 - root).abs() < 1e-9 * root;
        if !ok {
            bad.push(delta);
        }
    }
    let l4 = list_size(4).unwrap().l;
    let big = list_size(1_000_000).unwrap();
    let ratio = big.l as f64 / 1e6;
    let ok = bad.is_empty() && l4 == 19 && ratio < 2.01 && big.margin_certified;
    report(
        3,
        ok,
        format!(
            "l(4) = {l4}; Δ 4..1000 certified; l(10^6)/10^6 = {ratio:.6}; {:.2?}",
            t.elapsed()
        ),
    );
    assert!(ok, "failures at Δ = {bad:?}");
}

#[test]
fn criterion_4_engine_on_grids() {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, universe) in [("identical 1..20", None), ("random 20 of 1..25", Some(25))] {
        let g = generate_family(Family::Grid, &[8, 8]).unwrap();
        assert_eq!(g.max_degree(), 4);
        let (mut success, mut verified) = (0, 0);
        for seed in 0..100u64 {
            let lists = match universe {
                None => ListAssignment::identical(64, 20),
                Some(u) => ListAssignment::random(64, 20, u, &mut ChaCha8Rng::seed_from_u64(seed)),
            };
            let out = run(&g, &lists, seed, 100_000).unwrap();
            if out.status == Status::Success {
                success += 1;
                if verify_facial_nonrepetitive(&g, &out.colouring).is_ok() {
                    verified += 1;
                }
            }
        }
        ok &= success >= 99 && verified == success;
        lines.push(format!("8x8 {name}: {success}/100 success, {verified} verified"));
    }
    for k in 3..8 {
        let g = generate_family(Family::Grid, &[k, k]).unwrap();
        for seed in 0..20u64 {
            let lists = ListAssignment::random(k * k, 20, 30, &mut ChaCha8Rng::seed_from_u64(seed));
            let out = run(&g, &lists, seed, 100_000).unwrap();
            ok &= out.is_success() && verify_facial_nonrepetitive(&g, &out.colouring).is_ok();
        }
    }
    report(
        4,
        ok,
        format!("{}; smaller grids ok; {:.2?}", lines.join("; "), t.elapsed()),
    );
    assert!(ok);
}

fn tampers(record: &Record, i: usize) -> Vec<Record> {
    let mut out = Vec::new();
    let mut flip = record.clone();
    flip.entries[i] = match record.entries[i] {
        RecordEntry::Empty => RecordEntry::Rep { h: 1, q: 0, o: 1 },
        RecordEntry::Rep { .. } => RecordEntry::Empty,
    };
    out.push(flip);
    if let RecordEntry::Rep { h, q, o } = record.entries[i] {
        let mut grow = record.clone();
        grow.entries[i] = RecordEntry::Rep { h: h + 1, q, o };
        out.push(grow);
    }
    out
}

#[test]
fn criterion_5_record_round_trip() {
    let t = Instant::now();
    let graphs: Vec<_> = common::small_family_graphs(12)
        .into_iter()
        .map(|(_, _, g)| g)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut runs, mut success, mut exhausted) = (0, 0, 0);
    let (mut round_trips, mut tampered, mut rejected) = (0, 0, 0);
    while runs < 1200 {
        let g = &graphs[rng.random_range(0..graphs.len())];
        let l = rng.random_range(1..=4);
        let lists = ListAssignment::random(g.n(), l, l + rng.random_range(0..3), &mut rng);
        let budget = rng.random_range(1..=4 * g.n());
        let out = run(g, &lists, rng.random(), budget).unwrap();
        runs += 1;
        match out.status {
            Status::Success => success += 1,
            Status::Exhausted => exhausted += 1,
        }
        if reconstruct(g, &lists, &out.record, &out.colouring).as_ref() == Ok(&out.choices) {
            round_trips += 1;
        }
        for i in 0..out.record.entries.len() {
            for bad in tampers(&out.record, i) {
                tampered += 1;
                if reconstruct(g, &lists, &bad, &out.colouring).is_err() {
                    rejected += 1;
                }
            }
        }
    }
    let ok = round_trips == runs && rejected == tampered && success > 0 && exhausted > 0;
    report(
        5,
        ok,
        format!(
            "{round_trips}/{runs} round trips ({success} success, {exhausted} exhausted); \
             {rejected}/{tampered} single-entry tampers rejected; {:.2?}",
            t.elapsed()
        ),
    );
    assert!(ok);
}

fn family_params(f: Family) -> Vec<usize> {
    match f {
        Family::Path => vec![40],
        Family::Cycle => vec![40],
        Family::Star => vec![8],
        Family::SubdividedStar => vec![5, 6],
        Family::Wheel => vec![12],
        Family::SubdividedWheel => vec![6, 2, 3],
        Family::Grid => vec![6, 7],
        Family::Ladder => vec![12],
        Family::PendantLadder => vec![12],
        Family::Prism => vec![12],
        Family::Apic => vec![12],
        Family::Antiprism => vec![12],
    }
}

#[test]
fn criterion_6_family_colourers() {
    let t = Instant::now();
    let mut ok = true;
    let mut summary = Vec::new();
    for family in Family::ALL {
        let l = family.min_list_size();
        let params = family_params(family);
        let mut passed = 0;
        for seed in 0..100u64 {
            let inst = FamilyInstance::random(family, &params, l, l + 2, seed).unwrap();
            if let Ok(out) = colour_family(&inst, seed) {
                let on_lists = (0..inst.graph.n()).all(|v| inst.lists.list(v).contains(&out.colours[v]));
                if on_lists && verify_facial_nonrepetitive(&inst.graph, &out.colours).is_ok() {
                    passed += 1;
                }
            }
        }
        let short = FamilyInstance::random(family, &params, l - 1, l + 2, 0).unwrap();
        let rejects = matches!(colour_family(&short, 0), Err(FamilyError::ListTooShort { .. }));
        ok &= passed == 100 && rejects;
        summary.push(format!(
            "{family}:{l} {passed}/100{}",
            if rejects { "" } else { " (short lists accepted!)" }
        ));
    }
    report(6, ok, format!("{}; {:.2?}", summary.join(", "), t.elapsed()));
    assert!(ok);
}

#[test]
fn criterion_7_oracle_anchors() {
    let t = Instant::now();
    let b = OracleBudget::default();
    let pi = |f: Family, n: usize| pi_f_exact(&generate_family(f, &[n]).unwrap(), 6, &b).unwrap().k;
    let paths: Vec<_> = (1..=4).map(|n| pi(Family::Path, n)).collect();
    let (c5, c6) = (pi(Family::Cycle, 5), pi(Family::Cycle, 6));
    let anchors_ok = paths == [Some(1), Some(2), Some(2), Some(3)] && c5 == Some(4) && c6 == Some(3);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut contradictions, mut invalid, mut runs) = (0, 0, 0);
    for _ in 0..20 {
        let n = rng.random_range(3..=8);
        let g = random_plane_graph(n, 0.8, &mut rng);
        let l = 5 * g.max_degree().max(1);
        let lists = ListAssignment::random(n, l, l + 5, &mut rng);
        let seeds: Vec<u64> = (0..20).collect();
        let rep = ec_vs_oracle(&g, &lists, &seeds, 100_000, &b).unwrap();
        contradictions += rep.contradictions;
        invalid += rep.invalid_successes;
        runs += rep.runs;
    }
    let ok = anchors_ok && contradictions == 0 && invalid == 0;
    report(
        7,
        ok,
        format!(
            "π_f(P_1..P_4) = {paths:?}, π_f(C_5) = {c5:?}, π_f(C_6) = {c6:?}; \
             {contradictions} contradictions over {runs} engine runs; {:.2?}",
            t.elapsed()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_verifier_equivalence() {
    let t = Instant::now();
    let graphs = common::small_family_graphs(8);
    let (mut checked, mut disagreements) = (0u64, 0u64);
    for (_, _, g) in &graphs {
        let n = g.n() as u32;
        let total = 3u64.pow(n).min(1_000_000);
        let mut c = vec![0u32; g.n()];
        for code in 0..total {
            let mut x = code;
            for slot in c.iter_mut() {
                *slot = (x % 3) as u32 + 1;
                x /= 3;
            }
            let fast = verify_facial_nonrepetitive(g, &c).is_ok();
            if fast != common::naive_facially_nonrepetitive(g, &c) {
                disagreements += 1;
            }
            checked += 1;
        }
    }
    let ok = disagreements == 0;
    report(
        8,
        ok,
        format!(
            "{} graphs, {checked} colourings, {disagreements} disagreements; {:.2?}",
            graphs.len(),
            t.elapsed()
        ),
    );
    assert!(ok);
}
