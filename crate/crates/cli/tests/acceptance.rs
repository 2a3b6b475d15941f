//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N ... PASS|FAIL` line and fails if any check or its time
//! limit is missed.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ringwork::constructors::{dual, m2, product, zmod};
use ringwork::maps::{builtin_map, reduce_delta};
use ringwork::search::NAIVE_SIZE_CAP;
use ringwork::verify::{verify_proposition1, verify_theorem, TheoremOptions, TheoremResult};
use ringwork::{
    check_identity, check_m1, check_m2, check_m3, enumerate_reverse_maps, find_idempotents,
    is_prime, naive_enumerate, AntiAutomorphism, Component, Elem, FiniteRing, IdentityKind,
    InvolutionFamily, PeirceFrame, RingMap, SearchConfig, Verdict,
};
use tempfile::TempDir;

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(10);
const LIMIT_3: Duration = Duration::from_secs(60);
const LIMIT_4: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(30);
const LIMIT_6: Duration = Duration::from_secs(300);

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Duration,
    start: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn start(id: u8, title: &'static str, limit: Duration) -> Self {
        Criterion {
            id,
            title,
            limit,
            start: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        let mut failures = self.failures;
        if elapsed > self.limit {
            failures.push(format!("took {elapsed:?}, limit {:?}", self.limit));
        }
        let status = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {} ({}): {status} in {:.3}s (limit {}s)",
            self.id,
            self.title,
            elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        for f in &failures {
            println!("  - {f}");
        }
        assert!(
            failures.is_empty(),
            "criterion {} failed: {failures:#?}",
            self.id
        );
    }
}

fn builtin(ring: &FiniteRing, family: InvolutionFamily) -> AntiAutomorphism {
    AntiAutomorphism::builtin(ring, family).unwrap()
}

#[test]
fn criterion_1_dual6_reproduction() {
    let mut c = Criterion::start(1, "dual(Z_6) with neg_b", LIMIT_1);
    let ring = dual(6).unwrap();
    let inv = builtin(&ring, InvolutionFamily::NegBDual);
    let e = ring.resolve("(3,0)").unwrap();

    let symmetric = find_idempotents(&ring, Some(&inv));
    c.check(
        symmetric.contains(&e),
        format!("symmetric idempotents {symmetric:?} miss (3,0)"),
    );

    let witnesses = ringwork::conditions::m2_witnesses(&ring, e).unwrap();
    let target = ring.resolve("(2,4)").unwrap();
    c.check(!check_m2(&ring, e).unwrap().passed(), "M2 should fail");
    c.check(witnesses.contains(&target), "(2,4) should be an M2 witness");
    c.check(
        ring.elements()
            .all(|r| ring.is_zero(ring.mul(ring.mul(e, r), target))),
        "e R (2,4) should vanish",
    );

    let delta = builtin_map("example2", &ring).unwrap();
    c.check(
        check_identity(&ring, &delta, IdentityKind::StarReverse(&inv))
            .unwrap()
            .passed(),
        "example2 should be star_reverse",
    );
    c.check(
        check_identity(&ring, &delta, IdentityKind::Additive)
            .unwrap()
            .passed(),
        "example2 should be additive",
    );
    c.check(ring.is_zero(delta.apply(e)), "delta(e) should be 0");

    let frame = PeirceFrame::new(&ring, e, Some(&inv)).unwrap();
    match reduce_delta(&frame, &delta) {
        Ok(red) => c.check(red.inner == RingMap::zero(&ring), "inner map should vanish"),
        Err(err) => c.check(false, format!("reduction failed: {err}")),
    }
    c.finish();
}

#[test]
fn criterion_2_matrix_map_identities() {
    let mut c = Criterion::start(2, "example1 on M2(Z_n), n = 2, 3, 5", LIMIT_2);
    for n in [2, 3, 5] {
        let ring = m2(n).unwrap();
        let adj = builtin(&ring, InvolutionFamily::AdjugateM2);
        let delta = builtin_map("example1", &ring).unwrap();
        c.check(
            check_identity(&ring, &delta, IdentityKind::StarReverse(&adj))
                .unwrap()
                .passed(),
            format!("n={n}: star_reverse should hold for all pairs"),
        );
        for kind in [IdentityKind::Derivation, IdentityKind::ReverseDerivation] {
            match check_identity(&ring, &delta, kind).unwrap() {
                Verdict::Fail((a, b)) => {
                    println!(
                        "  n={n}: {} fails at ({}, {})",
                        kind.name(),
                        ring.label(a),
                        ring.label(b)
                    )
                }
                Verdict::Pass => c.check(
                    false,
                    format!(
                        "n={n}: {} should fail, but holds for all pairs",
                        kind.name()
                    ),
                ),
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_3_matrix_theorem_instance() {
    let mut c = Criterion::start(3, "M2(Z_2), transpose, E11", LIMIT_3);
    let ring = m2(2).unwrap();
    let inv = builtin(&ring, InvolutionFamily::TransposeM2);
    let e = ring.resolve("E11").unwrap();
    c.check(is_prime(&ring).passed(), "ring should be prime");
    c.check(check_m1(&ring).passed(), "M1");
    c.check(check_m2(&ring, e).unwrap().passed(), "M2");
    c.check(check_m3(&ring, e).unwrap().passed(), "M3");

    let report = verify_theorem(&ring, &inv, e, &TheoremOptions::default(), &[]).unwrap();
    c.check(report.search.exhausted, "search should be exhausted");
    c.check(
        report.maps_checked == report.search.count,
        "every emitted map is checked",
    );
    let l = &report.lemma_results;
    for (name, t) in [
        ("lemma 1", &l.lemma1),
        ("lemma 2", &l.lemma2),
        ("lemma 3", &l.lemma3),
        ("lemma 4", &l.lemma4),
        ("lemma 5", &l.lemma5),
        ("lemma 6", &l.lemma6),
        ("additivity", &report.additivity),
    ] {
        c.check(t.pass, format!("{name}: {:?}", t.first_failure));
    }
    c.check(
        report.theorem_result == TheoremResult::Pass,
        "theorem_result",
    );
    c.check(!report.refutation, "no refutation");
    println!(
        "  {} maps, {} nodes",
        report.search.count, report.search.nodes
    );
    c.finish();
}

#[test]
fn criterion_4_search_matches_brute_force() {
    let mut c = Criterion::start(4, "search vs brute force", LIMIT_4);
    let rings = [
        ("Z_2", zmod(2).unwrap()),
        ("Z_3", zmod(3).unwrap()),
        ("Z_4", zmod(4).unwrap()),
        ("dual(Z_2)", dual(2).unwrap()),
        (
            "Z_2xZ_2",
            product(&zmod(2).unwrap(), &zmod(2).unwrap()).unwrap(),
        ),
    ];
    for (name, ring) in &rings {
        assert!(ring.size() <= NAIVE_SIZE_CAP);
        let id = builtin(ring, InvolutionFamily::Identity);
        let outcome = enumerate_reverse_maps(ring, &SearchConfig::new(&id)).unwrap();
        c.check(outcome.exhausted, format!("{name}: search not exhausted"));
        let fast: BTreeSet<RingMap> = outcome.maps.into_iter().collect();
        let slow: BTreeSet<RingMap> = naive_enumerate(ring, &id, NAIVE_SIZE_CAP)
            .unwrap()
            .into_iter()
            .collect();
        c.check(
            fast == slow,
            format!("{name}: {} vs {} maps", fast.len(), slow.len()),
        );
        println!("  {name}: {} maps", slow.len());
    }
    c.finish();
}

fn structural(c: &mut Criterion, name: &str, ring: &FiniteRing, inv: &AntiAutomorphism, e: Elem) {
    let frame = PeirceFrame::new(ring, e, Some(inv)).unwrap();
    for x in ring.elements() {
        let split = frame.project(x);
        if split.sum(ring) != x {
            c.check(
                false,
                format!("{name}: projections of {} do not sum back", ring.label(x)),
            );
        }
        for comp in Component::ALL {
            let p = split.get(comp);
            if frame.pi(comp, p) != p {
                c.check(
                    false,
                    format!("{name}: pi{comp} not idempotent at {}", ring.label(x)),
                );
            }
        }
    }
    let parts: Vec<(Component, Vec<Elem>)> = Component::ALL
        .iter()
        .map(|&k| (k, frame.component_elements(k)))
        .collect();
    for (left, xs) in &parts {
        for (right, ys) in &parts {
            let (i, j) = left.indices();
            let (k, l) = right.indices();
            let target = (j == k).then(|| Component::from_indices(i, l).unwrap());
            let ok = xs.iter().all(|&x| {
                ys.iter().all(|&y| {
                    let p = ring.mul(x, y);
                    match target {
                        None => ring.is_zero(p),
                        Some(t) => frame.pi(t, p) == p,
                    }
                })
            });
            c.check(
                ok,
                format!("{name}: {left} * {right} lands outside its component"),
            );
        }
    }
    c.check(
        verify_proposition1(&frame).unwrap().passed(),
        format!("{name}: conjugation swap fails"),
    );

    // A map with a nonzero value at 0 never satisfies the identity.
    for v in ring.elements().filter(|&v| !ring.is_zero(v)) {
        let m = RingMap::from_fn(ring, |x| if ring.is_zero(x) { v } else { ring.zero() });
        let verdict = check_identity(ring, &m, IdentityKind::StarReverse(inv)).unwrap();
        c.check(
            !verdict.passed(),
            format!("{name}: map with d(0) = {} passes", ring.label(v)),
        );
    }
    let found = enumerate_reverse_maps(ring, &SearchConfig::new(inv)).unwrap();
    c.check(found.exhausted, format!("{name}: search not exhausted"));
    for m in &found.maps {
        c.check(
            ring.is_zero(m.apply(ring.zero())),
            format!("{name}: emitted map with d(0) != 0"),
        );
    }
}

#[test]
fn criterion_5_structural_properties() {
    let mut c = Criterion::start(5, "Peirce and swap properties on two frames", LIMIT_5);
    let mz2 = m2(2).unwrap();
    let t = builtin(&mz2, InvolutionFamily::TransposeM2);
    structural(&mut c, "M2(Z_2)", &mz2, &t, mz2.resolve("E11").unwrap());
    let d6 = dual(6).unwrap();
    let nb = builtin(&d6, InvolutionFamily::NegBDual);
    structural(&mut c, "dual(Z_6)", &d6, &nb, d6.resolve("(3,0)").unwrap());
    c.finish();
}

fn ringwork(jobs: usize, args: &[&str], dir: &Path) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ringwork"))
        .current_dir(dir)
        .env("RUST_LOG", "off")
        .arg("--jobs")
        .arg(jobs.to_string())
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn make(dir: &Path, file: &str, args: &[&str]) {
    let (bytes, code) = ringwork(1, args, dir);
    assert_eq!(code, 0, "{args:?}");
    std::fs::write(dir.join(file), bytes).unwrap();
}

#[test]
fn criterion_6_reports_independent_of_jobs() {
    let mut c = Criterion::start(6, "--jobs 1 vs --jobs 4", LIMIT_6);
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    make(
        dir,
        "d6.json",
        &["ring-make", "--family", "dual", "--n", "6"],
    );
    make(
        dir,
        "negb.json",
        &["inv-make", "--ring", "d6.json", "--family", "neg_b_dual"],
    );
    make(
        dir,
        "d6id.json",
        &["inv-make", "--ring", "d6.json", "--family", "identity"],
    );
    make(
        dir,
        "d2.json",
        &["ring-make", "--family", "dual", "--n", "2"],
    );
    make(
        dir,
        "d2id.json",
        &["inv-make", "--ring", "d2.json", "--family", "identity"],
    );
    make(
        dir,
        "v4.json",
        &["ring-make", "--family", "zprod", "--n", "2", "--m", "2"],
    );
    make(
        dir,
        "v4id.json",
        &["inv-make", "--ring", "v4.json", "--family", "identity"],
    );
    for n in [2, 3, 4] {
        let (r, i) = (format!("z{n}.json"), format!("z{n}id.json"));
        make(
            dir,
            &r,
            &["ring-make", "--family", "zmod", "--n", &n.to_string()],
        );
        make(dir, &i, &["inv-make", "--ring", &r, "--family", "identity"]);
    }
    for n in [2, 3, 5] {
        let (r, i) = (format!("m{n}.json"), format!("m{n}adj.json"));
        make(
            dir,
            &r,
            &["ring-make", "--family", "m2", "--n", &n.to_string()],
        );
        make(
            dir,
            &i,
            &["inv-make", "--ring", &r, "--family", "adjugate_m2"],
        );
    }
    make(
        dir,
        "m2t.json",
        &["inv-make", "--ring", "m2.json", "--family", "transpose_m2"],
    );

    let mut runs: Vec<Vec<&str>> = vec![
        vec![
            "idem-find",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--symmetric",
        ],
        vec![
            "conditions",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--e",
            "(3,0)",
        ],
        vec![
            "map-check",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--map",
            "example2",
            "--identity",
            "star_reverse",
        ],
        vec![
            "map-check",
            "--ring",
            "d6.json",
            "--map",
            "example2",
            "--identity",
            "additive",
        ],
        vec![
            "verify-theorem",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--e",
            "(3,0)",
            "--map",
            "example2",
        ],
        vec![
            "verify-theorem",
            "--ring",
            "m2.json",
            "--inv",
            "m2t.json",
            "--e",
            "E11",
            "--limit",
            "0",
        ],
        vec![
            "peirce", "--ring", "m2.json", "--inv", "m2t.json", "--e", "E11",
        ],
        vec![
            "peirce",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--e",
            "(3,0)",
        ],
        vec![
            "report",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--map",
            "example2",
        ],
        vec!["report", "--ring", "m2.json", "--inv", "m2t.json"],
        vec!["map-search", "--ring", "d6.json", "--inv", "negb.json"],
        vec![
            "map-search",
            "--ring",
            "d6.json",
            "--inv",
            "negb.json",
            "--nonadditive",
        ],
        vec![
            "map-search",
            "--ring",
            "d6.json",
            "--inv",
            "d6id.json",
            "--node-budget",
            "20000",
        ],
        vec!["map-search", "--ring", "d2.json", "--inv", "d2id.json"],
        vec!["map-search", "--ring", "v4.json", "--inv", "v4id.json"],
    ];
    let zs: Vec<(String, String)> = [2, 3, 4]
        .iter()
        .map(|n| (format!("z{n}.json"), format!("z{n}id.json")))
        .collect();
    let ms: Vec<(String, String)> = [2, 3, 5]
        .iter()
        .map(|n| (format!("m{n}.json"), format!("m{n}adj.json")))
        .collect();
    for (r, i) in &zs {
        runs.push(vec!["map-search", "--ring", r, "--inv", i]);
    }
    for (r, i) in &ms {
        for identity in ["star_reverse", "derivation", "reverse_derivation"] {
            runs.push(vec![
                "map-check",
                "--ring",
                r,
                "--inv",
                i,
                "--map",
                "example1",
                "--identity",
                identity,
            ]);
        }
    }

    for args in &runs {
        let (one, code_one) = ringwork(1, args, dir);
        let (four, code_four) = ringwork(4, args, dir);
        c.check(!one.is_empty(), format!("{args:?}: no output"));
        c.check(
            code_one == code_four,
            format!("{args:?}: exit {code_one} vs {code_four}"),
        );
        c.check(
            one == four,
            format!("{args:?}: output differs between job counts"),
        );
    }
    println!("  {} command lines compared", runs.len());
    c.finish();
}
