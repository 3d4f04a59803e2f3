//! End-to-end tests of the `plcheck` binary: exit codes, stream separation,
//! and report shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn plcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plcheck"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn validate_befit_consent_exits_zero() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "validate",
        "fixtures/policies/befit-consent.json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("disjunct 0: satisfiable"));
}

#[test]
fn validate_all_unsat_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dead.json");
    std::fs::write(
        &path,
        r#"{ has_purpose: FitnessRecommendation, has_data: HeartRate,
             has_processing: Analytics, has_recipient: BeFit,
             has_storage: { has_duration: [10, 5] } }"#,
    )
    .unwrap();
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "validate",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("disjunct 0: unsatisfiable"));
}

#[test]
fn validate_malformed_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ has_color: Red }").unwrap();
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "validate",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stdout(&out).is_empty(),
        "reports must not reach stdout on errors"
    );
    let err = stderr(&out);
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains("has_color"), "{err}");
}

#[test]
fn check_worked_example_with_explain() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "check",
        "fixtures/policies/befit-bp-heartrate.json",
        "fixtures/policies/befit-consent.json",
        "--explain",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: compliant"), "{text}");
    assert!(
        text.contains("business disjunct 0 covered by branch 0"),
        "{text}"
    );
}

#[test]
fn check_third_party_fails_at_recipient() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "check",
        "fixtures/policies/befit-bp-thirdparty.json",
        "fixtures/policies/befit-consent.json",
        "--explain",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("verdict: non-compliant"), "{text}");
    assert!(text.contains("spl:hasRecipient"), "{text}");
}

#[test]
fn check_missing_file_exits_two() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "check",
        "no-such-file.json",
        "fixtures/policies/befit-consent.json",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gdpr_religion_fails_through_chap2_art9() {
    let out = plcheck(&[
        "--vocab",
        "vocab/pilot.voc",
        "gdpr",
        "fixtures/policies/gdpr-religion-bp.json",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(
        text.contains("Chap2_LawfulProcessing -> Art9_SensitiveData"),
        "{text}"
    );
}

#[test]
fn gdpr_location_variant_passes() {
    let out = plcheck(&[
        "--vocab",
        "vocab/pilot.voc",
        "gdpr",
        "fixtures/policies/gdpr-location-bp.json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn gdpr_shipped_rulebook_matches_builtin() {
    let out = plcheck(&[
        "--vocab",
        "vocab/pilot.voc",
        "gdpr",
        "fixtures/policies/gdpr-religion-bp.json",
        "--rulebook",
        "rules/gdpr-partial.rules",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn gdpr_cyclic_rulebook_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cyclic.rules");
    std::fs::write(&path, "root A\ndef A: ref(B)\ndef B: ref(A)\n").unwrap();
    let out = plcheck(&[
        "--vocab",
        "vocab/pilot.voc",
        "gdpr",
        "fixtures/policies/gdpr-religion-bp.json",
        "--rulebook",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cyclic"), "{}", stderr(&out));
}

#[test]
fn audit_fixture_flags_post_withdrawal_event() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "audit",
        "fixtures/ledger/demo.ledger",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(
        text.contains("event=e3") && text.contains("justified-by=c2"),
        "{text}"
    );
    assert!(
        text.contains("event=e5") && text.contains("unjustified"),
        "{text}"
    );
    assert!(
        text.contains("summary: 1 justified, 1 unjustified"),
        "{text}"
    );
}

#[test]
fn audit_window_before_withdrawal_is_all_justified() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "audit",
        "fixtures/ledger/demo.ledger",
        "--to",
        "2000",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn audit_truncated_line_exits_two_with_line_number() {
    let original = std::fs::read_to_string(root().join("fixtures/ledger/demo.ledger")).unwrap();
    let mut truncated: Vec<&str> = original.lines().collect();
    let broken = &truncated[1][..truncated[1].len() / 2];
    truncated[1] = broken;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.ledger");
    std::fs::write(&path, truncated.join("\n")).unwrap();
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "audit",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn vocab_env_variable_is_the_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_plcheck"))
        .current_dir(root())
        .env("PLCHECK_VOCAB", "vocab/befit.voc")
        .args(["validate", "fixtures/policies/befit-consent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn missing_vocab_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_plcheck"))
        .current_dir(root())
        .env_remove("PLCHECK_VOCAB")
        .args(["validate", "fixtures/policies/befit-consent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_format_emits_parseable_reports() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "--format",
        "json",
        "check",
        "fixtures/policies/befit-bp-heartrate.json",
        "fixtures/policies/befit-consent.json",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["verdict"], "compliant");
}

#[test]
fn normalize_output_reparses() {
    let out = plcheck(&[
        "--vocab",
        "vocab/befit.voc",
        "normalize",
        "fixtures/policies/befit-consent.json",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("# disjunct 0: satisfiable"), "{text}");
    // The normalized output is itself a valid policy document.
    plcheck_core::policy::parse_policy(&text, plcheck_core::policy::PolicyKind::Consent)
        .expect("normalized output reparses");
}

#[test]
fn bench_pilot2_smoke() {
    let out = plcheck(&[
        "bench",
        "--profile",
        "pilot2",
        "--seed",
        "5",
        "--parallelism",
        "2",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("checks: 10000"), "{text}");
    assert!(text.contains("ground_truth_mismatches: 0"), "{text}");
}

#[test]
fn deterministic_reports_across_runs() {
    let run = || {
        let out = plcheck(&[
            "--vocab",
            "vocab/pilot.voc",
            "--format",
            "json",
            "gdpr",
            "fixtures/policies/gdpr-religion-bp.json",
        ]);
        (code(&out), stdout(&out))
    };
    assert_eq!(run(), run());
}
