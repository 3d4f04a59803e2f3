//! Acceptance suite. Each criterion is one test that prints a single
//! `criterion N (<name>): PASS` line on success (visible with
//! `cargo test --test acceptance -- --nocapture`) and fails loudly
//! otherwise.
//!
//! 1. Worked examples (BeFit consent, SMS narrowing, Religion/Location GDPR
//!    checks) with exact verdicts, under one second.
//! 2. Engine vs. brute-force oracle on >= 10,000 randomized instances,
//!    100% agreement, under ten minutes.
//! 3. Law properties at >= 1,000 randomized cases each, zero failures.
//! 4. Workload fidelity: pilot counts exact, disjunct averages within 5%.
//! 5. Throughput: >= 2,000 sequential checks/sec on the pilot1 workload,
//!    whole run under 60 seconds including generation.
//! 6. Ledger determinism and temporal soundness on the shipped fixture.

use std::path::PathBuf;
use std::time::Instant;

use plcheck_core::engine::{check_compliance, subsumes_simple, Failure, Verdict};
use plcheck_core::interval::Interval;
use plcheck_core::ledger::AuditOutcome;
use plcheck_core::normalize::{normalize_full, normalize_simple};
use plcheck_core::oracle::{oracle_satisfiable, oracle_subsumes, random_instance};
use plcheck_core::policy::{parse_policy, ClassExpr, FullPolicy, PolicyKind};
use plcheck_core::rulebook::{builtin_gdpr_rulebook, check_regulatory};
use plcheck_core::vocab::{load_vocabulary, VocabularyOntology};
use plcheck_core::workload::{generate_workload, WorkloadProfile};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read(rel: &str) -> String {
    let path = root().join(rel);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn load_voc(rel: &str) -> VocabularyOntology {
    load_vocabulary(&read(rel)).expect("vocabulary loads")
}

fn pass(n: usize, name: &str, detail: &str) {
    println!("criterion {n} ({name}): PASS — {detail}");
}

// -------------------------------------------------------------------------

#[test]
fn criterion_1_paper_worked_examples() {
    let start = Instant::now();

    let befit = load_voc("vocab/befit.voc");
    let consent = parse_policy(
        &read("fixtures/policies/befit-consent.json"),
        PolicyKind::Consent,
    )
    .unwrap();
    let sms_consent = parse_policy(
        &read("fixtures/policies/befit-consent-sms.json"),
        PolicyKind::Consent,
    )
    .unwrap();
    let bp = parse_policy(
        &read("fixtures/policies/befit-bp-heartrate.json"),
        PolicyKind::Business,
    )
    .unwrap();

    // Average-heart-rate processing is allowed by the BeFit consent.
    let report = check_compliance(&befit, &bp, &consent).unwrap();
    assert_eq!(report.verdict, Verdict::Compliant);
    assert_eq!(report.cover.get(&0), Some(&0));

    // Narrowing the consent to SMS-only recommendations rejects the
    // un-narrowed business policy.
    let report = check_compliance(&befit, &bp, &sms_consent).unwrap();
    assert_eq!(report.verdict, Verdict::NonCompliant);

    // GDPR rulebook: collecting Religion under an Art. 6(1)(a) basis fails
    // through Chapter 2 / Article 9; the Location variant passes.
    let pilot = load_voc("vocab/pilot.voc");
    let rulebook = builtin_gdpr_rulebook();
    let religion = parse_policy(
        &read("fixtures/policies/gdpr-religion-bp.json"),
        PolicyKind::Business,
    )
    .unwrap();
    let report = check_regulatory(&pilot, &religion, &rulebook).unwrap();
    assert_eq!(report.verdict, Verdict::NonCompliant);
    match report.failure.expect("failure present") {
        Failure::Rulebook { path, .. } => {
            assert_eq!(
                path,
                vec![
                    "Chap2_LawfulProcessing".to_string(),
                    "Art9_SensitiveData".to_string()
                ]
            );
        }
        other => panic!("unexpected failure {other:?}"),
    }

    let location = parse_policy(
        &read("fixtures/policies/gdpr-location-bp.json"),
        PolicyKind::Business,
    )
    .unwrap();
    let report = check_regulatory(&pilot, &location, &rulebook).unwrap();
    assert_eq!(report.verdict, Verdict::Compliant);

    // The demographic-collection policy with consent duties also passes.
    let demographic = parse_policy(
        &read("fixtures/policies/gdpr-demographic-bp.json"),
        PolicyKind::Business,
    )
    .unwrap();
    let report = check_regulatory(&pilot, &demographic, &rulebook).unwrap();
    assert_eq!(report.verdict, Verdict::Compliant);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass(
        1,
        "paper worked examples",
        &format!("all verdicts exact in {elapsed:?}"),
    );
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    const INSTANCES: u64 = 10_000;
    let mut agreements = 0usize;
    for seed in 0..INSTANCES {
        let inst = random_instance(seed);
        let engine = check_compliance(&inst.vocabulary, &inst.business, &inst.consent)
            .unwrap()
            .verdict
            .is_compliant();
        let oracle = oracle_subsumes(&inst.vocabulary, &inst.business, &inst.consent).unwrap();
        assert_eq!(
            engine, oracle,
            "engine and oracle disagree on instance seed {seed}"
        );
        agreements += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 600.0,
        "took {elapsed:?}, budget 10 min"
    );
    pass(
        2,
        "oracle equivalence",
        &format!("{agreements}/{INSTANCES} instances agree in {elapsed:?}"),
    );
}

// -------------------------------------------------------------------------
// Criterion 3: each law at >= 1,000 randomized cases.
// -------------------------------------------------------------------------

const LAW_CASES: usize = 1_000;

#[test]
fn criterion_3a_reflexivity() {
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < LAW_CASES {
        let inst = random_instance(seed);
        seed += 1;
        let voc = &inst.vocabulary;
        for fp in [&inst.business, &inst.consent] {
            for n in normalize_full(voc, fp).unwrap() {
                if n.satisfiable {
                    assert!(subsumes_simple(voc, &n, &n).unwrap(), "seed {seed}");
                    checked += 1;
                }
            }
        }
    }
    pass(3, "property: reflexivity", &format!("{checked} cases"));
}

#[test]
fn criterion_3b_transitivity() {
    let mut checked = 0usize;
    let mut seed = 100_000u64;
    while checked < LAW_CASES {
        let inst = random_instance(seed);
        seed += 1;
        let voc = &inst.vocabulary;
        let mut pool = normalize_full(voc, &inst.business).unwrap();
        pool.extend(normalize_full(voc, &inst.consent).unwrap());
        for a in &pool {
            for b in &pool {
                for c in &pool {
                    if subsumes_simple(voc, a, b).unwrap() && subsumes_simple(voc, b, c).unwrap() {
                        assert!(
                            subsumes_simple(voc, a, c).unwrap(),
                            "transitivity broken at seed {seed}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    pass(
        3,
        "property: transitivity",
        &format!("{checked} satisfying triples"),
    );
}

#[test]
fn criterion_3c_union_left_decomposition() {
    for seed in 200_000..(200_000 + LAW_CASES as u64) {
        let inst = random_instance(seed);
        let voc = &inst.vocabulary;
        let whole = check_compliance(voc, &inst.business, &inst.consent)
            .unwrap()
            .verdict
            .is_compliant();
        let each = inst.business.disjuncts.iter().all(|d| {
            let single = FullPolicy {
                kind: PolicyKind::Business,
                disjuncts: vec![d.clone()],
            };
            check_compliance(voc, &single, &inst.consent)
                .unwrap()
                .verdict
                .is_compliant()
        });
        assert_eq!(whole, each, "decomposition broken at seed {seed}");
    }
    pass(
        3,
        "property: union left-decomposition",
        &format!("{LAW_CASES} cases"),
    );
}

#[test]
fn criterion_3d_disjunct_self_inclusion() {
    let mut checked = 0usize;
    let mut seed = 300_000u64;
    while checked < LAW_CASES {
        let inst = random_instance(seed);
        seed += 1;
        let voc = &inst.vocabulary;
        for d in &inst.consent.disjuncts {
            let single = FullPolicy {
                kind: PolicyKind::Business,
                disjuncts: vec![d.clone()],
            };
            let report = check_compliance(voc, &single, &inst.consent).unwrap();
            assert!(
                report.verdict.is_compliant(),
                "self-inclusion broken at seed {seed}"
            );
            checked += 1;
        }
    }
    pass(
        3,
        "property: disjunct self-inclusion",
        &format!("{checked} cases"),
    );
}

#[test]
fn criterion_3e_narrowing_monotonicity() {
    let mut checked = 0usize;
    let mut seed = 400_000u64;
    while checked < LAW_CASES {
        let inst = random_instance(seed);
        seed += 1;
        let voc = &inst.vocabulary;
        if !check_compliance(voc, &inst.business, &inst.consent)
            .unwrap()
            .verdict
            .is_compliant()
        {
            continue;
        }
        // Replace each named filler with each of its strict descendants in
        // turn; compliance must survive every replacement.
        let mut narrowed_any = false;
        for (di, d) in inst.business.disjuncts.iter().enumerate() {
            for slot in 0..4usize {
                let filler = match slot {
                    0 => &d.data,
                    1 => &d.purpose,
                    2 => &d.processing,
                    _ => &d.recipient,
                };
                let ClassExpr::Named(id) = filler else {
                    continue;
                };
                let Some(cid) = voc.class_id(id) else {
                    continue;
                };
                let descendants: Vec<String> = voc
                    .class_ids()
                    .filter(|&c| c != cid && voc.is_subclass_id(c, cid))
                    .map(|c| voc.class_name(c).to_string())
                    .collect();
                for desc in descendants {
                    let mut variant = inst.business.clone();
                    let target = &mut variant.disjuncts[di];
                    let slot_ref = match slot {
                        0 => &mut target.data,
                        1 => &mut target.purpose,
                        2 => &mut target.processing,
                        _ => &mut target.recipient,
                    };
                    *slot_ref = ClassExpr::Named(desc);
                    let report = check_compliance(voc, &variant, &inst.consent).unwrap();
                    assert!(
                        report.verdict.is_compliant(),
                        "narrowing flipped the verdict at seed {seed}"
                    );
                    narrowed_any = true;
                    checked += 1;
                }
            }
        }
        let _ = narrowed_any;
    }
    pass(
        3,
        "property: narrowing monotonicity",
        &format!("{checked} replacements"),
    );
}

#[test]
fn criterion_3f_normalization_idempotence_and_preservation() {
    let mut idempotence = 0usize;
    let mut preservation = 0usize;
    let mut seed = 500_000u64;
    while idempotence < LAW_CASES || preservation < LAW_CASES {
        let inst = random_instance(seed);
        seed += 1;
        let voc = &inst.vocabulary;
        for fp in [&inst.business, &inst.consent] {
            for (i, d) in fp.disjuncts.iter().enumerate() {
                let n1 = normalize_simple(voc, d, i).unwrap();
                let n2 = normalize_simple(voc, &n1.to_policy(voc), i).unwrap();
                assert_eq!(n1, n2, "idempotence broken at seed {seed}");
                idempotence += 1;

                // Emptiness agrees with the oracle; satisfiable policies are
                // semantically equivalent to their normal form.
                let sat = oracle_satisfiable(voc, d).unwrap();
                assert_eq!(n1.satisfiable, sat, "emptiness flag wrong at seed {seed}");
                if sat && preservation < LAW_CASES {
                    let original = FullPolicy {
                        kind: PolicyKind::Business,
                        disjuncts: vec![d.clone()],
                    };
                    let rendered = FullPolicy {
                        kind: PolicyKind::Business,
                        disjuncts: vec![n1.to_policy(voc)],
                    };
                    assert!(
                        oracle_subsumes(voc, &original, &rendered).unwrap()
                            && oracle_subsumes(voc, &rendered, &original).unwrap(),
                        "normal form not equivalent at seed {seed}"
                    );
                    preservation += 1;
                }
            }
        }
    }
    pass(
        3,
        "property: normalization idempotence + semantic preservation",
        &format!("{idempotence} idempotence, {preservation} preservation cases"),
    );
}

#[test]
fn criterion_3g_interval_containment() {
    // Exhaustive check against point enumeration over endpoint samples.
    let endpoints = [0u64, 1, 9, 10, 11, 29, 30, 31, 365, 1825, Interval::INF];
    let mut checked = 0usize;
    for &alo in &endpoints {
        for &ahi in &endpoints {
            for &blo in &endpoints {
                for &bhi in &endpoints {
                    let a = Interval::new(alo, ahi);
                    let b = Interval::new(blo, bhi);
                    let pointwise = endpoints
                        .iter()
                        .all(|&v| !a.contains_value(v) || b.contains_value(v));
                    assert_eq!(a.is_contained_in(&b), pointwise, "{a} vs {b}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= LAW_CASES);
    pass(
        3,
        "property: interval containment",
        &format!("{checked} pairs"),
    );
}

// -------------------------------------------------------------------------

#[test]
fn criterion_4_workload_fidelity() {
    for (profile, bp_count, bp_avg, consent_count, consent_avg) in [
        (
            WorkloadProfile::pilot1(11),
            120usize,
            2.71f64,
            12_000usize,
            3.77f64,
        ),
        (WorkloadProfile::pilot2(11), 100, 2.39, 10_000, 3.42),
    ] {
        let w = generate_workload(&profile).unwrap();
        assert_eq!(w.vocabulary.inclusion_count(), 186);
        assert_eq!(w.vocabulary.disjoint_axiom_count(), 11);
        assert_eq!(w.vocabulary.range_axiom_count(), 10);
        assert_eq!(w.vocabulary.functional_property_count(), 8);
        assert_eq!(w.vocabulary.hierarchy_height(), 4);
        assert_eq!(w.business.len(), bp_count);
        assert_eq!(w.consents.len(), consent_count);
        assert_eq!(w.pairs.len(), consent_count);
        let bp_err = (w.bp_avg_disjuncts() - bp_avg).abs() / bp_avg;
        let c_err = (w.consent_avg_disjuncts() - consent_avg).abs() / consent_avg;
        assert!(
            bp_err <= 0.05,
            "{}: bp avg {} vs {bp_avg}",
            profile.name,
            w.bp_avg_disjuncts()
        );
        assert!(
            c_err <= 0.05,
            "{}: consent avg {} vs {consent_avg}",
            profile.name,
            w.consent_avg_disjuncts()
        );
        assert!((w.compliant_fraction() - 0.5).abs() <= 0.10);
    }
    pass(
        4,
        "workload fidelity",
        "pilot1 and pilot2 match the published counts",
    );
}

#[test]
fn criterion_5_throughput() {
    let start = Instant::now();
    let profile = WorkloadProfile::pilot1(17);
    let workload = generate_workload(&profile).unwrap();
    let result = plcheck::bench::run_bench(&workload, 2_000, 1);
    let elapsed = start.elapsed();

    assert_eq!(result.checks, 12_000);
    assert_eq!(result.ground_truth_mismatches, 0);
    assert!(
        result.checks_per_sec >= 2_000.0,
        "only {:.0} checks/sec",
        result.checks_per_sec
    );
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "took {elapsed:?}, budget 60 s"
    );
    pass(
        5,
        "throughput",
        &format!(
            "{:.0} checks/sec sequential (median {:.1} µs), run took {elapsed:?}",
            result.checks_per_sec, result.median_us
        ),
    );
}

#[test]
fn criterion_6_ledger_determinism_and_temporal_soundness() {
    let voc = load_voc("vocab/befit.voc");
    let path = root().join("fixtures/ledger/demo.ledger");

    let run = || {
        let ledger = plcheck::ledger_file::read_ledger_file(&path, &voc).unwrap();
        let report = ledger.audit(&voc, 0, u64::MAX);
        let rendered = plcheck::report::render_audit(plcheck::report::Format::Text, &report);
        (report, rendered)
    };

    let (report, first) = run();
    // Consent at t=1000 withdrawn at t=2000: the t=1500 event is justified,
    // the t=2500 event is not.
    assert_eq!(report.lines.len(), 2);
    assert_eq!(report.lines[0].occurred_at, 1500);
    assert_eq!(
        report.lines[0].outcome,
        AuditOutcome::Justified {
            record: "c2".to_string()
        }
    );
    assert_eq!(report.lines[1].occurred_at, 2500);
    assert_eq!(report.lines[1].outcome, AuditOutcome::Unjustified);

    let (_, second) = run();
    assert_eq!(
        first.as_bytes(),
        second.as_bytes(),
        "audit report not byte-identical"
    );
    pass(
        6,
        "ledger determinism + temporal soundness",
        "t=1500 justified by c2, t=2500 unjustified, byte-identical reports",
    );
}
