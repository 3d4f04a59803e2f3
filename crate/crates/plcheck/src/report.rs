//! Report rendering. Machine-readable output goes to stdout in either a
//! stable line-oriented text form or JSON; diagnostics stay on stderr.

use plcheck_core::engine::{ComplianceReport, Failure, Verdict};
use plcheck_core::ledger::{AuditOutcome, AuditReport};
use plcheck_core::normalize::NormalSimplePolicy;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Compliant => "compliant",
        Verdict::NonCompliant => "non-compliant",
        Verdict::VacuouslyCompliant => "vacuously-compliant",
    }
}

pub fn render_validation(format: Format, disjuncts: &[NormalSimplePolicy]) -> String {
    let satisfiable = disjuncts.iter().filter(|d| d.satisfiable).count();
    match format {
        Format::Text => {
            let mut out = String::new();
            for d in disjuncts {
                out.push_str(&format!(
                    "disjunct {}: {}\n",
                    d.provenance,
                    if d.satisfiable {
                        "satisfiable"
                    } else {
                        "unsatisfiable"
                    }
                ));
            }
            out.push_str(&format!(
                "valid: {} of {} disjuncts satisfiable\n",
                satisfiable,
                disjuncts.len()
            ));
            out
        }
        Format::Json => {
            let list: Vec<Value> = disjuncts
                .iter()
                .map(|d| json!({"index": d.provenance, "satisfiable": d.satisfiable}))
                .collect();
            format!(
                "{}\n",
                json!({
                    "disjuncts": list,
                    "satisfiable": satisfiable,
                    "total": disjuncts.len(),
                })
            )
        }
    }
}

fn failure_json(f: &Failure) -> Value {
    match f {
        Failure::Slot {
            business_disjunct,
            consent_disjunct,
            property_path,
            found,
            required,
        } => json!({
            "kind": "slot",
            "business_disjunct": business_disjunct,
            "consent_disjunct": consent_disjunct,
            "property_path": property_path,
            "found": found,
            "required": required,
        }),
        Failure::Rulebook {
            business_disjunct,
            path,
            detail,
        } => json!({
            "kind": "rulebook",
            "business_disjunct": business_disjunct,
            "path": path,
            "detail": detail,
        }),
    }
}

pub fn render_compliance(format: Format, report: &ComplianceReport, explain: bool) -> String {
    match format {
        Format::Text => {
            let mut out = format!("verdict: {}\n", verdict_str(report.verdict));
            if explain {
                for (bi, ci) in &report.cover {
                    out.push_str(&format!("business disjunct {bi} covered by branch {ci}\n"));
                }
                for v in &report.vacuous_disjuncts {
                    out.push_str(&format!(
                        "business disjunct {v} is unsatisfiable (vacuous)\n"
                    ));
                }
            }
            if let Some(f) = &report.failure {
                out.push_str(&format!("failure: {f}\n"));
            }
            out
        }
        Format::Json => {
            let cover: Vec<Value> = report
                .cover
                .iter()
                .map(|(b, c)| json!({"business": b, "covered_by": c}))
                .collect();
            format!(
                "{}\n",
                json!({
                    "verdict": verdict_str(report.verdict),
                    "cover": cover,
                    "vacuous_disjuncts": report.vacuous_disjuncts,
                    "failure": report.failure.as_ref().map(failure_json),
                })
            )
        }
    }
}

pub fn render_audit(format: Format, report: &AuditReport) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for line in &report.lines {
                let outcome = match &line.outcome {
                    AuditOutcome::Justified { record } => format!("justified-by={record}"),
                    AuditOutcome::Unjustified => "unjustified".to_string(),
                    AuditOutcome::Error { message } => format!("error={message:?}"),
                };
                out.push_str(&format!(
                    "event={} subject={} bp={} at={} {}\n",
                    line.event, line.subject, line.bp, line.occurred_at, outcome
                ));
            }
            out.push_str(&format!(
                "summary: {} justified, {} unjustified, {} errors\n",
                report.justified, report.unjustified, report.errors
            ));
            out
        }
        Format::Json => {
            let lines: Vec<Value> = report
                .lines
                .iter()
                .map(|line| {
                    let outcome = match &line.outcome {
                        AuditOutcome::Justified { record } => {
                            json!({"justified": true, "record": record})
                        }
                        AuditOutcome::Unjustified => json!({"justified": false}),
                        AuditOutcome::Error { message } => {
                            json!({"justified": false, "error": message})
                        }
                    };
                    json!({
                        "event": line.event,
                        "subject": line.subject,
                        "bp": line.bp,
                        "at": line.occurred_at,
                        "outcome": outcome,
                    })
                })
                .collect();
            format!(
                "{}\n",
                json!({
                    "events": lines,
                    "justified": report.justified,
                    "unjustified": report.unjustified,
                    "errors": report.errors,
                })
            )
        }
    }
}

pub fn render_bench(format: Format, result: &crate::bench::BenchResult) -> String {
    match format {
        Format::Text => format!(
            "profile: {}\nseed: {}\nparallelism: {}\nchecks: {}\n\
             phase1_ms: {:.3}\nwall_time_s: {:.6}\nmean_us: {:.3}\nmedian_us: {:.3}\n\
             p99_us: {:.3}\nchecks_per_sec: {:.0}\ncompliant: {}\nnon_compliant: {}\n\
             ground_truth_mismatches: {}\nworkload_fingerprint: {}\n",
            result.profile,
            result.seed,
            result.parallelism,
            result.checks,
            result.phase1_ms,
            result.wall_time_s,
            result.mean_us,
            result.median_us,
            result.p99_us,
            result.checks_per_sec,
            result.compliant,
            result.non_compliant,
            result.ground_truth_mismatches,
            result.workload_fingerprint,
        ),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(result).expect("bench result serializes")
        ),
    }
}
