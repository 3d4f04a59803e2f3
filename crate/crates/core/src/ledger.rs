//! Append-only transparency ledger: consent lifecycle records and processing
//! events, with ex-post auditing and justification lookup.
//!
//! The in-memory store validates appends (sequence contiguity, time
//! ordering, referential integrity) and answers audits by a single forward
//! scan. Consent validity is the half-open interval `[given_at,
//! withdrawn_at)`: processing based on consent is covered strictly before
//! its withdrawal. File persistence lives in the `plcheck` companion crate;
//! replaying the same entries reproduces audit reports exactly.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::engine::check_compliance_normalized;
use crate::normalize::{normalize_full, NormalSimplePolicy, NormalizeError};
use crate::policy::{FullPolicy, PolicyKind};
use crate::vocab::VocabularyOntology;

/// UTC seconds.
pub type Timestamp = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LedgerError {
    /// The ledger is time-ordered; appends may not go back in time.
    OutOfOrderTimestamp {
        at: Timestamp,
        last: Timestamp,
    },
    /// Replayed entries must carry contiguous sequence numbers.
    SequenceGap {
        expected: u64,
        found: u64,
    },
    WrongPolicyKind {
        expected: PolicyKind,
    },
    /// Consent must have at least one satisfiable disjunct.
    UnsatisfiableConsent {
        detail: String,
    },
    DuplicateBusinessPolicy(String),
    UnknownBusinessPolicy(String),
    UnknownRecord(String),
    UnknownEvent(String),
    DuplicateId(String),
    AlreadyWithdrawn(String),
    WithdrawalBeforeGrant {
        given_at: Timestamp,
        at: Timestamp,
    },
    Normalize(NormalizeError),
    /// A compliance evaluation inside a justification lookup failed.
    EvaluationFailed(String),
}

impl fmt::Display for LedgerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LedgerError::OutOfOrderTimestamp { at, last } => {
                write!(
                    f,
                    "timestamp {at} is earlier than the last appended entry ({last})"
                )
            }
            LedgerError::SequenceGap { expected, found } => {
                write!(f, "sequence gap: expected {expected}, found {found}")
            }
            LedgerError::WrongPolicyKind { expected } => {
                write!(f, "expected a {expected} policy")
            }
            LedgerError::UnsatisfiableConsent { detail } => {
                write!(f, "consent policy has no satisfiable disjunct: {detail}")
            }
            LedgerError::DuplicateBusinessPolicy(id) => {
                write!(f, "business policy '{id}' already registered")
            }
            LedgerError::UnknownBusinessPolicy(id) => {
                write!(f, "business policy '{id}' is not registered")
            }
            LedgerError::UnknownRecord(id) => write!(f, "unknown consent record '{id}'"),
            LedgerError::UnknownEvent(id) => write!(f, "unknown event '{id}'"),
            LedgerError::DuplicateId(id) => write!(f, "ledger id '{id}' already used"),
            LedgerError::AlreadyWithdrawn(id) => {
                write!(f, "consent record '{id}' was already withdrawn")
            }
            LedgerError::WithdrawalBeforeGrant { given_at, at } => {
                write!(f, "withdrawal at {at} precedes the grant at {given_at}")
            }
            LedgerError::Normalize(e) => write!(f, "{e}"),
            LedgerError::EvaluationFailed(message) => write!(f, "{message}"),
        }
    }
}

impl From<NormalizeError> for LedgerError {
    fn from(e: NormalizeError) -> Self {
        LedgerError::Normalize(e)
    }
}

/// Payload of one ledger line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LedgerOp {
    /// Register a business policy so later events can reference it by id.
    RegisterBp { id: String, policy: FullPolicy },
    /// A data subject granted consent.
    Consent {
        id: String,
        subject: String,
        policy: FullPolicy,
    },
    /// Tombstone closing a consent record; the record itself is never edited.
    Withdraw { record: String },
    /// A processing event executed under a registered business policy.
    Event {
        id: String,
        subject: String,
        bp: String,
    },
}

/// One appended line: sequence number and timestamp are mandatory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub seq: u64,
    pub at: Timestamp,
    pub op: LedgerOp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsentRecord {
    pub id: String,
    pub subject: String,
    pub policy: FullPolicy,
    pub given_at: Timestamp,
    pub withdrawn_at: Option<Timestamp>,
}

impl ConsentRecord {
    /// Half-open validity: `given_at <= t < withdrawn_at`.
    pub fn valid_at(&self, t: Timestamp) -> bool {
        self.given_at <= t && self.withdrawn_at.map(|w| t < w).unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessingEvent {
    pub id: String,
    pub subject: String,
    pub bp: String,
    pub occurred_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditOutcome {
    Justified {
        record: String,
    },
    Unjustified,
    /// The event could not be evaluated (e.g. its policy no longer
    /// normalizes under the audit vocabulary); the audit continues.
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditLine {
    pub event: String,
    pub subject: String,
    pub bp: String,
    pub occurred_at: Timestamp,
    pub outcome: AuditOutcome,
}

/// Verdicts are a pure function of ledger contents; replaying the same
/// ledger reproduces the report bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub lines: Vec<AuditLine>,
    pub justified: usize,
    pub unjustified: usize,
    pub errors: usize,
}

impl AuditReport {
    pub fn all_justified(&self) -> bool {
        self.unjustified == 0 && self.errors == 0
    }
}

/// In-memory ledger store: single writer, any number of readers.
#[derive(Debug, Default, Clone)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
    bps: BTreeMap<String, FullPolicy>,
    consents: BTreeMap<String, ConsentRecord>,
    consent_order: Vec<String>,
    events: BTreeMap<String, ProcessingEvent>,
    event_order: Vec<String>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn next_seq(&self) -> u64 {
        self.entries.len() as u64 + 1
    }

    fn last_at(&self) -> Option<Timestamp> {
        self.entries.last().map(|e| e.at)
    }

    pub fn consent(&self, id: &str) -> Option<&ConsentRecord> {
        self.consents.get(id)
    }

    pub fn event(&self, id: &str) -> Option<&ProcessingEvent> {
        self.events.get(id)
    }

    pub fn business_policy(&self, id: &str) -> Option<&FullPolicy> {
        self.bps.get(id)
    }

    /// Validate and append one entry. Both the live append operations and
    /// file replay funnel through here, so replays re-run every check.
    pub fn apply(
        &mut self,
        voc: &VocabularyOntology,
        entry: LedgerEntry,
    ) -> Result<(), LedgerError> {
        let expected = self.next_seq();
        if entry.seq != expected {
            return Err(LedgerError::SequenceGap {
                expected,
                found: entry.seq,
            });
        }
        if let Some(last) = self.last_at() {
            if entry.at < last {
                return Err(LedgerError::OutOfOrderTimestamp { at: entry.at, last });
            }
        }
        match &entry.op {
            LedgerOp::RegisterBp { id, policy } => {
                if policy.kind != PolicyKind::Business {
                    return Err(LedgerError::WrongPolicyKind {
                        expected: PolicyKind::Business,
                    });
                }
                if self.bps.contains_key(id) {
                    return Err(LedgerError::DuplicateBusinessPolicy(id.clone()));
                }
                self.bps.insert(id.clone(), policy.clone());
            }
            LedgerOp::Consent {
                id,
                subject,
                policy,
            } => {
                if policy.kind != PolicyKind::Consent {
                    return Err(LedgerError::WrongPolicyKind {
                        expected: PolicyKind::Consent,
                    });
                }
                if self.consents.contains_key(id) {
                    return Err(LedgerError::DuplicateId(id.clone()));
                }
                let normalized = normalize_full(voc, policy)?;
                if !normalized.iter().any(|d| d.satisfiable) {
                    let dead: Vec<String> = normalized
                        .iter()
                        .map(|d| alloc::format!("disjunct {}", d.provenance))
                        .collect();
                    return Err(LedgerError::UnsatisfiableConsent {
                        detail: if dead.is_empty() {
                            "the policy has no disjuncts".to_string()
                        } else {
                            dead.join(", ")
                        },
                    });
                }
                self.consents.insert(
                    id.clone(),
                    ConsentRecord {
                        id: id.clone(),
                        subject: subject.clone(),
                        policy: policy.clone(),
                        given_at: entry.at,
                        withdrawn_at: None,
                    },
                );
                self.consent_order.push(id.clone());
            }
            LedgerOp::Withdraw { record } => {
                let rec = self
                    .consents
                    .get_mut(record)
                    .ok_or_else(|| LedgerError::UnknownRecord(record.clone()))?;
                if rec.withdrawn_at.is_some() {
                    return Err(LedgerError::AlreadyWithdrawn(record.clone()));
                }
                if entry.at < rec.given_at {
                    return Err(LedgerError::WithdrawalBeforeGrant {
                        given_at: rec.given_at,
                        at: entry.at,
                    });
                }
                rec.withdrawn_at = Some(entry.at);
            }
            LedgerOp::Event { id, subject, bp } => {
                if !self.bps.contains_key(bp) {
                    return Err(LedgerError::UnknownBusinessPolicy(bp.clone()));
                }
                if self.events.contains_key(id) {
                    return Err(LedgerError::DuplicateId(id.clone()));
                }
                self.events.insert(
                    id.clone(),
                    ProcessingEvent {
                        id: id.clone(),
                        subject: subject.clone(),
                        bp: bp.clone(),
                        occurred_at: entry.at,
                    },
                );
                self.event_order.push(id.clone());
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn register_bp(
        &mut self,
        voc: &VocabularyOntology,
        id: impl Into<String>,
        policy: FullPolicy,
        at: Timestamp,
    ) -> Result<(), LedgerError> {
        self.apply(
            voc,
            LedgerEntry {
                seq: self.next_seq(),
                at,
                op: LedgerOp::RegisterBp {
                    id: id.into(),
                    policy,
                },
            },
        )
    }

    /// Record a consent grant; returns the generated record id.
    pub fn record_consent(
        &mut self,
        voc: &VocabularyOntology,
        subject: impl Into<String>,
        policy: FullPolicy,
        given_at: Timestamp,
    ) -> Result<String, LedgerError> {
        let id = alloc::format!("c{}", self.next_seq());
        self.apply(
            voc,
            LedgerEntry {
                seq: self.next_seq(),
                at: given_at,
                op: LedgerOp::Consent {
                    id: id.clone(),
                    subject: subject.into(),
                    policy,
                },
            },
        )?;
        Ok(id)
    }

    pub fn withdraw_consent(
        &mut self,
        voc: &VocabularyOntology,
        record: &str,
        at: Timestamp,
    ) -> Result<(), LedgerError> {
        self.apply(
            voc,
            LedgerEntry {
                seq: self.next_seq(),
                at,
                op: LedgerOp::Withdraw {
                    record: record.to_string(),
                },
            },
        )
    }

    /// Log a processing event; returns the generated event id.
    pub fn append_event(
        &mut self,
        voc: &VocabularyOntology,
        subject: impl Into<String>,
        bp: &str,
        occurred_at: Timestamp,
    ) -> Result<String, LedgerError> {
        let id = alloc::format!("e{}", self.next_seq());
        self.apply(
            voc,
            LedgerEntry {
                seq: self.next_seq(),
                at: occurred_at,
                op: LedgerOp::Event {
                    id: id.clone(),
                    subject: subject.into(),
                    bp: bp.to_string(),
                },
            },
        )?;
        Ok(id)
    }

    /// Qualifying consent record ids for one event, in ledger order: the
    /// record must belong to the same subject, be valid at the event time,
    /// and its policy must cover the event's business policy with duties and
    /// legal basis projected out.
    fn qualifying_records(
        &self,
        voc: &VocabularyOntology,
        event: &ProcessingEvent,
        bp_cache: &mut BTreeMap<String, Result<Vec<NormalSimplePolicy>, String>>,
        first_only: bool,
    ) -> Result<Vec<String>, String> {
        let bp_norm = bp_cache
            .entry(event.bp.clone())
            .or_insert_with(|| {
                let policy = match self.bps.get(&event.bp) {
                    Some(p) => p,
                    None => {
                        return Err(alloc::format!(
                            "business policy '{}' is not registered",
                            event.bp
                        ))
                    }
                };
                let mut usage_only = policy.clone();
                for d in &mut usage_only.disjuncts {
                    d.duties.clear();
                    d.legal_basis = None;
                }
                normalize_full(voc, &usage_only).map_err(|e| alloc::format!("{e}"))
            })
            .clone()?;

        let mut out = Vec::new();
        for cid in &self.consent_order {
            let rec = &self.consents[cid];
            if rec.subject != event.subject || !rec.valid_at(event.occurred_at) {
                continue;
            }
            let consent_norm =
                normalize_full(voc, &rec.policy).map_err(|e| alloc::format!("{e}"))?;
            let report = check_compliance_normalized(voc, &bp_norm, &consent_norm)
                .map_err(|e| alloc::format!("{e}"))?;
            if report.verdict.is_compliant() {
                out.push(cid.clone());
                if first_only {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Ex-post audit over events with `from <= occurred_at <= to`.
    pub fn audit(&self, voc: &VocabularyOntology, from: Timestamp, to: Timestamp) -> AuditReport {
        let mut lines = Vec::new();
        let mut justified = 0;
        let mut unjustified = 0;
        let mut errors = 0;
        let mut bp_cache = BTreeMap::new();
        for eid in &self.event_order {
            let event = &self.events[eid];
            if event.occurred_at < from || event.occurred_at > to {
                continue;
            }
            let outcome = match self.qualifying_records(voc, event, &mut bp_cache, true) {
                Ok(records) => match records.into_iter().next() {
                    Some(record) => {
                        justified += 1;
                        AuditOutcome::Justified { record }
                    }
                    None => {
                        unjustified += 1;
                        AuditOutcome::Unjustified
                    }
                },
                Err(message) => {
                    errors += 1;
                    AuditOutcome::Error { message }
                }
            };
            lines.push(AuditLine {
                event: eid.clone(),
                subject: event.subject.clone(),
                bp: event.bp.clone(),
                occurred_at: event.occurred_at,
                outcome,
            });
        }
        AuditReport {
            lines,
            justified,
            unjustified,
            errors,
        }
    }

    /// All consent records justifying one event (task T4), in ledger order.
    pub fn find_justification(
        &self,
        voc: &VocabularyOntology,
        event_id: &str,
    ) -> Result<Vec<String>, LedgerError> {
        let event = self
            .events
            .get(event_id)
            .ok_or_else(|| LedgerError::UnknownEvent(event_id.to_string()))?;
        let mut cache = BTreeMap::new();
        self.qualifying_records(voc, event, &mut cache, false)
            .map_err(LedgerError::EvaluationFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{parse_policy, PolicyKind};
    use crate::vocab::{classes, RangeSpec, VocabularyBuilder};

    fn voc() -> VocabularyOntology {
        let mut b = VocabularyBuilder::new();
        b.standard_properties();
        for c in [
            "BiometricData",
            "HeartRate",
            "FitnessRecommendation",
            "Analytics",
            "ComputeAvg",
            "BeFit",
            "ThirdParty",
            "EU",
        ] {
            b.class(c);
        }
        b.subclass("BiometricData", classes::ANY_DATA)
            .subclass("HeartRate", "BiometricData")
            .subclass("FitnessRecommendation", classes::ANY_PURPOSE)
            .subclass("Analytics", classes::ANY_PROCESSING)
            .subclass("ComputeAvg", "Analytics")
            .subclass("BeFit", classes::ANY_RECIPIENT)
            .subclass("ThirdParty", classes::ANY_RECIPIENT)
            .subclass("EU", classes::ANY_LOCATION)
            .property("unused", true, RangeSpec::Class("EU".into()));
        b.build().unwrap()
    }

    fn consent_policy() -> FullPolicy {
        parse_policy(
            r#"{ has_purpose: FitnessRecommendation, has_data: BiometricData,
                 has_processing: Analytics, has_recipient: BeFit,
                 has_storage: { has_location: EU } }"#,
            PolicyKind::Consent,
        )
        .unwrap()
    }

    fn heartrate_bp() -> FullPolicy {
        parse_policy(
            r#"{ has_purpose: FitnessRecommendation, has_data: HeartRate,
                 has_processing: ComputeAvg, has_recipient: BeFit,
                 has_storage: { has_location: EU },
                 has_duty: [getValidConsent] }"#,
            PolicyKind::Business,
        )
        .unwrap()
    }

    fn third_party_bp() -> FullPolicy {
        parse_policy(
            r#"{ has_purpose: FitnessRecommendation, has_data: HeartRate,
                 has_processing: ComputeAvg, has_recipient: ThirdParty,
                 has_storage: { has_location: EU } }"#,
            PolicyKind::Business,
        )
        .unwrap()
    }

    /// Consent at t=1000 withdrawn at t=2000; events at 1500 and 2500.
    fn fixture() -> (VocabularyOntology, Ledger, String, String, String) {
        let voc = voc();
        let mut ledger = Ledger::new();
        // getValidConsent is a duty this vocabulary does not declare; audits
        // project duties and legal bases out before normalizing.
        ledger
            .register_bp(&voc, "bp-avg-heart-rate", heartrate_bp(), 900)
            .unwrap();
        let c1 = ledger
            .record_consent(&voc, "subject-1", consent_policy(), 1000)
            .unwrap();
        let e1 = ledger
            .append_event(&voc, "subject-1", "bp-avg-heart-rate", 1500)
            .unwrap();
        ledger.withdraw_consent(&voc, &c1, 2000).unwrap();
        let e2 = ledger
            .append_event(&voc, "subject-1", "bp-avg-heart-rate", 2500)
            .unwrap();
        (voc, ledger, c1, e1, e2)
    }

    #[test]
    fn event_inside_window_is_justified_outside_is_not() {
        let (voc, ledger, c1, e1, e2) = fixture();
        let report = ledger.audit(&voc, 0, u64::MAX);
        assert_eq!(report.lines.len(), 2);
        assert_eq!(
            report.lines[0].outcome,
            AuditOutcome::Justified { record: c1.clone() }
        );
        assert_eq!(report.lines[1].outcome, AuditOutcome::Unjustified);
        assert_eq!((report.justified, report.unjustified), (1, 1));
        assert_eq!(
            ledger.find_justification(&voc, &e1).unwrap(),
            alloc::vec![c1]
        );
        assert!(ledger.find_justification(&voc, &e2).unwrap().is_empty());
    }

    #[test]
    fn withdrawal_at_grant_time_leaves_zero_validity() {
        let voc = voc();
        let mut ledger = Ledger::new();
        ledger.register_bp(&voc, "bp", heartrate_bp(), 0).unwrap();
        let c = ledger
            .record_consent(&voc, "s", consent_policy(), 1000)
            .unwrap();
        ledger.withdraw_consent(&voc, &c, 1000).unwrap();
        let e = ledger.append_event(&voc, "s", "bp", 1000).unwrap();
        assert!(ledger.find_justification(&voc, &e).unwrap().is_empty());
    }

    #[test]
    fn noncompliant_bp_is_unjustified_despite_valid_window() {
        let voc = voc();
        let mut ledger = Ledger::new();
        ledger
            .register_bp(&voc, "bp-third-party", third_party_bp(), 0)
            .unwrap();
        ledger
            .record_consent(&voc, "s", consent_policy(), 1000)
            .unwrap();
        ledger
            .append_event(&voc, "s", "bp-third-party", 1500)
            .unwrap();
        let report = ledger.audit(&voc, 0, u64::MAX);
        assert_eq!(report.lines[0].outcome, AuditOutcome::Unjustified);
    }

    #[test]
    fn overlapping_consents_are_both_cited_in_ledger_order() {
        let voc = voc();
        let mut ledger = Ledger::new();
        ledger.register_bp(&voc, "bp", heartrate_bp(), 0).unwrap();
        let c1 = ledger
            .record_consent(&voc, "s", consent_policy(), 100)
            .unwrap();
        let c2 = ledger
            .record_consent(&voc, "s", consent_policy(), 200)
            .unwrap();
        let e = ledger.append_event(&voc, "s", "bp", 300).unwrap();
        assert_eq!(
            ledger.find_justification(&voc, &e).unwrap(),
            alloc::vec![c1.clone(), c2]
        );
        // The audit cites the earliest qualifying record.
        let report = ledger.audit(&voc, 0, u64::MAX);
        assert_eq!(
            report.lines[0].outcome,
            AuditOutcome::Justified { record: c1 }
        );
    }

    #[test]
    fn out_of_order_timestamp_rejected() {
        let voc = voc();
        let mut ledger = Ledger::new();
        ledger
            .record_consent(&voc, "s", consent_policy(), 1000)
            .unwrap();
        let err = ledger
            .record_consent(&voc, "s", consent_policy(), 999)
            .unwrap_err();
        assert!(matches!(err, LedgerError::OutOfOrderTimestamp { .. }));
    }

    #[test]
    fn unsatisfiable_consent_rejected_with_diagnostic() {
        let voc = voc();
        let mut ledger = Ledger::new();
        let bad = parse_policy(
            r#"{ has_purpose: FitnessRecommendation, has_data: BiometricData,
                 has_processing: Analytics, has_recipient: BeFit,
                 has_storage: { has_duration: [10, 5] } }"#,
            PolicyKind::Consent,
        )
        .unwrap();
        let err = ledger.record_consent(&voc, "s", bad, 10).unwrap_err();
        assert!(matches!(err, LedgerError::UnsatisfiableConsent { .. }));
    }

    #[test]
    fn withdrawal_errors() {
        let voc = voc();
        let mut ledger = Ledger::new();
        let c = ledger
            .record_consent(&voc, "s", consent_policy(), 1000)
            .unwrap();
        assert!(matches!(
            ledger.withdraw_consent(&voc, "c999", 1500).unwrap_err(),
            LedgerError::UnknownRecord(_)
        ));
        ledger.withdraw_consent(&voc, &c, 1500).unwrap();
        assert!(matches!(
            ledger.withdraw_consent(&voc, &c, 1600).unwrap_err(),
            LedgerError::AlreadyWithdrawn(_)
        ));
    }

    #[test]
    fn event_requires_registered_bp() {
        let voc = voc();
        let mut ledger = Ledger::new();
        let err = ledger.append_event(&voc, "s", "nope", 10).unwrap_err();
        assert_eq!(err, LedgerError::UnknownBusinessPolicy("nope".into()));
    }

    #[test]
    fn replay_reproduces_audit_exactly() {
        let (voc, ledger, _, _, _) = fixture();
        let mut replayed = Ledger::new();
        for entry in ledger.entries() {
            replayed.apply(&voc, entry.clone()).unwrap();
        }
        assert_eq!(
            ledger.audit(&voc, 0, u64::MAX),
            replayed.audit(&voc, 0, u64::MAX)
        );
    }
}
