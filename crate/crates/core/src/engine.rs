//! Phase two: structural subsumption over normalized policies, and the
//! compliance verdict/explanation machinery.
//!
//! All checks are pure functions over immutable normalized inputs; callers
//! may run any number of checks in parallel.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::normalize::{normalize_full, NormalFiller, NormalSimplePolicy, NormalizeError};
use crate::policy::{ClassExpr, FullPolicy, PolicyKind};
use crate::vocab::{PropertyRange, VocabularyOntology};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// The two policies were normalized under different ontologies.
    VocabularyMismatch,
    /// `check_compliance` requires a consent policy on the right.
    NotAConsentPolicy,
    UndeclaredClass(String),
    UndeclaredProperty(String),
    Normalize(NormalizeError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::VocabularyMismatch => {
                write!(f, "policies were normalized under different vocabularies")
            }
            EngineError::NotAConsentPolicy => {
                write!(f, "the right-hand policy must have kind 'consent'")
            }
            EngineError::UndeclaredClass(id) => write!(f, "undeclared class '{id}'"),
            EngineError::UndeclaredProperty(id) => write!(f, "undeclared property '{id}'"),
            EngineError::Normalize(e) => write!(f, "{e}"),
        }
    }
}

impl From<NormalizeError> for EngineError {
    fn from(e: NormalizeError) -> Self {
        EngineError::Normalize(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Compliant,
    NonCompliant,
    /// Every business disjunct is unsatisfiable: the check holds vacuously,
    /// which almost certainly indicates an authoring error.
    VacuouslyCompliant,
}

impl Verdict {
    /// True for both `Compliant` and `VacuouslyCompliant`.
    pub fn is_compliant(self) -> bool {
        !matches!(self, Verdict::NonCompliant)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Compliant => write!(f, "compliant"),
            Verdict::NonCompliant => write!(f, "non-compliant"),
            Verdict::VacuouslyCompliant => write!(f, "vacuously-compliant"),
        }
    }
}

/// Why the first uncovered business disjunct failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Slot-level failure against the closest consent disjunct.
    Slot {
        business_disjunct: usize,
        /// The consent disjunct that matched the most slots before failing;
        /// `None` when the consent has no satisfiable disjunct at all.
        consent_disjunct: Option<usize>,
        /// Property path from the policy root to the failing slot.
        property_path: Vec<String>,
        found: String,
        required: String,
    },
    /// Rulebook-level failure (regulatory checks).
    Rulebook {
        business_disjunct: usize,
        /// Definition names from the rulebook root to the failing leaf.
        path: Vec<String>,
        detail: String,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Slot {
                business_disjunct,
                consent_disjunct,
                property_path,
                found,
                required,
            } => {
                write!(f, "business disjunct {business_disjunct}")?;
                if let Some(c) = consent_disjunct {
                    write!(f, " vs consent disjunct {c}")?;
                }
                write!(
                    f,
                    ": slot {} has '{}' but requires '{}'",
                    property_path.join("/"),
                    found,
                    required
                )
            }
            Failure::Rulebook {
                business_disjunct,
                path,
                detail,
            } => write!(
                f,
                "business disjunct {business_disjunct}: rulebook path {} failed: {detail}",
                path.join(" -> ")
            ),
        }
    }
}

/// Outcome of a compliance check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplianceReport {
    pub verdict: Verdict,
    /// For each satisfiable business disjunct, the index of the first
    /// consent disjunct (or rulebook branch) that covers it.
    pub cover: BTreeMap<usize, usize>,
    /// Business disjuncts flagged unsatisfiable (they comply vacuously).
    pub vacuous_disjuncts: Vec<usize>,
    /// Present exactly when the verdict is `NonCompliant`.
    pub failure: Option<Failure>,
}

// ---------------------------------------------------------------------------
// Normalized-vs-normalized subsumption (consent checking)
// ---------------------------------------------------------------------------

fn covers_names(
    voc: &VocabularyOntology,
    d: &[crate::vocab::ClassId],
    required: crate::vocab::ClassId,
) -> bool {
    d.iter().any(|&n| voc.is_subclass_id(n, required))
}

/// Structural subsumption between normalized fillers: `d ⊑ c`.
pub fn subsumes_norm_filler(voc: &VocabularyOntology, d: &NormalFiller, c: &NormalFiller) -> bool {
    for &required in &c.names {
        if !covers_names(voc, &d.names, required) {
            return false;
        }
    }
    if let Some(required) = &c.interval {
        match &d.interval {
            Some(have) if have.is_contained_in(required) => {}
            _ => return false,
        }
    }
    for (&prop, c_entries) in &c.nested {
        let Some(d_entries) = d.nested.get(&prop) else {
            return false;
        };
        for ce in c_entries {
            if !d_entries.iter().any(|de| subsumes_norm_filler(voc, de, ce)) {
                return false;
            }
        }
    }
    true
}

/// Where a slot-level comparison failed: path of property ids plus the
/// offending filler pair, and how many top-level slots passed first.
struct SlotFail {
    path: Vec<String>,
    found: String,
    required: String,
    progress: usize,
}

fn filler_fail(
    voc: &VocabularyOntology,
    path: Vec<String>,
    d: &NormalFiller,
    c: &NormalFiller,
) -> Option<SlotFail> {
    if subsumes_norm_filler(voc, d, c) {
        return None;
    }
    // Descend to the most specific failing sub-slot for the report.
    for (&prop, c_entries) in &c.nested {
        if let Some(d_entries) = d.nested.get(&prop) {
            for ce in c_entries {
                if !d_entries.iter().any(|de| subsumes_norm_filler(voc, de, ce)) {
                    if let [de] = d_entries.as_slice() {
                        let mut sub_path = path.clone();
                        sub_path.push(voc.property(prop).id.clone());
                        if let Some(fail) = filler_fail(voc, sub_path, de, ce) {
                            return Some(fail);
                        }
                    }
                    let mut sub_path = path;
                    sub_path.push(voc.property(prop).id.clone());
                    return Some(SlotFail {
                        path: sub_path,
                        found: d_entries
                            .iter()
                            .map(|e| e.render(voc))
                            .collect::<Vec<_>>()
                            .join(" | "),
                        required: ce.render(voc),
                        progress: 0,
                    });
                }
            }
        } else {
            let mut sub_path = path;
            sub_path.push(voc.property(prop).id.clone());
            return Some(SlotFail {
                path: sub_path,
                found: "(absent)".to_string(),
                required: c_entries.first().map(|e| e.render(voc)).unwrap_or_default(),
                progress: 0,
            });
        }
    }
    Some(SlotFail {
        path,
        found: d.render(voc),
        required: c.render(voc),
        progress: 0,
    })
}

/// `p ⊑ q` for normalized simple policies. An unsatisfiable `p` is subsumed
/// by anything; absent optional conjuncts of `q` (duties, legal basis)
/// impose no condition.
pub fn subsumes_simple(
    voc: &VocabularyOntology,
    p: &NormalSimplePolicy,
    q: &NormalSimplePolicy,
) -> Result<bool, EngineError> {
    if p.vocab_fingerprint != q.vocab_fingerprint || p.vocab_fingerprint != voc.fingerprint() {
        return Err(EngineError::VocabularyMismatch);
    }
    if !p.satisfiable {
        return Ok(true);
    }
    Ok(subsumes_simple_inner(voc, p, q).is_none())
}

/// Returns the first slot failure, or `None` when `p ⊑ q`.
fn subsumes_simple_inner(
    voc: &VocabularyOntology,
    p: &NormalSimplePolicy,
    q: &NormalSimplePolicy,
) -> Option<SlotFail> {
    for (progress, (&prop, q_entries)) in q.slots.iter().enumerate() {
        let d_entries = p.slots.get(&prop);
        for qe in q_entries {
            let covered = d_entries
                .map(|des| des.iter().any(|de| subsumes_norm_filler(voc, de, qe)))
                .unwrap_or(false);
            if !covered {
                let path = alloc::vec![voc.property(prop).id.clone()];
                let mut fail = match d_entries.map(|v| v.as_slice()) {
                    Some([de]) => filler_fail(voc, Vec::new(), de, qe).map(|mut f| {
                        f.path.insert(0, voc.property(prop).id.clone());
                        f
                    }),
                    _ => None,
                }
                .unwrap_or_else(|| SlotFail {
                    path,
                    found: d_entries
                        .map(|des| {
                            des.iter()
                                .map(|e| e.render(voc))
                                .collect::<Vec<_>>()
                                .join(" | ")
                        })
                        .unwrap_or_else(|| "(absent)".to_string()),
                    required: qe.render(voc),
                    progress: 0,
                });
                fail.progress = progress;
                return Some(fail);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Normalized-vs-expression subsumption (rulebook fillers)
// ---------------------------------------------------------------------------

/// Decide `d ⊑ c` where `c` is a rulebook/consent filler expression, which
/// may additionally contain complements and unions.
///
/// Complements are decided through derived disjointness: `d ⊑ ¬A` holds iff
/// every name of `d` is provably disjoint from `A`; unprovable disjointness
/// yields `false`.
pub fn subsumes_filler(
    voc: &VocabularyOntology,
    d: &NormalFiller,
    c: &ClassExpr,
) -> Result<bool, EngineError> {
    match c {
        ClassExpr::Named(id) => {
            let required = voc
                .class_id(id)
                .ok_or_else(|| EngineError::UndeclaredClass(id.clone()))?;
            Ok(covers_names(voc, &d.names, required))
        }
        ClassExpr::Intersection(members) => {
            for m in members {
                if !subsumes_filler(voc, d, m)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ClassExpr::Union(members) => {
            for m in members {
                if subsumes_filler(voc, d, m)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        ClassExpr::Complement(id) => {
            let a = voc
                .class_id(id)
                .ok_or_else(|| EngineError::UndeclaredClass(id.clone()))?;
            Ok(!d.names.is_empty() && d.names.iter().all(|&n| voc.are_disjoint_id(n, a)))
        }
        ClassExpr::Interval(required) => Ok(matches!(
            &d.interval,
            Some(have) if have.is_contained_in(required)
        )),
        ClassExpr::Exists(prop, filler) => {
            let pid = voc
                .prop_id(prop)
                .ok_or_else(|| EngineError::UndeclaredProperty(prop.clone()))?;
            if voc.property(pid).range == PropertyRange::DayInterval {
                if let ClassExpr::Interval(required) = filler.as_ref() {
                    return Ok(matches!(
                        &d.interval,
                        Some(have) if have.is_contained_in(required)
                    ));
                }
            }
            let Some(entries) = d.nested.get(&pid) else {
                return Ok(false);
            };
            if voc.property(pid).functional {
                match entries.as_slice() {
                    [single] => subsumes_filler(voc, single, filler),
                    _ => Ok(false),
                }
            } else {
                for e in entries {
                    if subsumes_filler(voc, e, filler)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

/// Decide whether a whole normalized policy is subsumed by a class
/// expression over its slots (existential restrictions at the top level,
/// boolean combinations around them). Bare names, complements and intervals
/// are not meaningful at the policy root and evaluate false.
pub fn subsumes_policy_expr(
    voc: &VocabularyOntology,
    p: &NormalSimplePolicy,
    expr: &ClassExpr,
) -> Result<bool, EngineError> {
    match expr {
        ClassExpr::Intersection(members) => {
            for m in members {
                if !subsumes_policy_expr(voc, p, m)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ClassExpr::Union(members) => {
            for m in members {
                if subsumes_policy_expr(voc, p, m)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        ClassExpr::Exists(prop, filler) => {
            let pid = voc
                .prop_id(prop)
                .ok_or_else(|| EngineError::UndeclaredProperty(prop.clone()))?;
            let Some(entries) = p.slots.get(&pid) else {
                return Ok(false);
            };
            if voc.property(pid).functional {
                match entries.as_slice() {
                    [single] => subsumes_filler(voc, single, filler),
                    _ => Ok(false),
                }
            } else {
                // Non-functional slots (duties): any conjunct may satisfy
                // the requirement.
                for e in entries {
                    if subsumes_filler(voc, e, filler)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
        ClassExpr::Named(_) | ClassExpr::Complement(_) | ClassExpr::Interval(_) => Ok(false),
    }
}

// ---------------------------------------------------------------------------
// Compliance
// ---------------------------------------------------------------------------

/// Check a business policy against a consent policy (task T2).
///
/// Union handling: the business union decomposes on the left (every
/// satisfiable disjunct must be covered), and each business disjunct tries
/// the consent disjuncts independently on the right. This is complete in the
/// policy logic as long as the vocabulary contains no covering axioms.
pub fn check_compliance(
    voc: &VocabularyOntology,
    business: &FullPolicy,
    consent: &FullPolicy,
) -> Result<ComplianceReport, EngineError> {
    if consent.kind != PolicyKind::Consent {
        return Err(EngineError::NotAConsentPolicy);
    }
    let business_norm = normalize_full(voc, business)?;
    let consent_norm = normalize_full(voc, consent)?;
    check_compliance_normalized(voc, &business_norm, &consent_norm)
}

/// `check_compliance` over pre-normalized policies; this is the benchmark
/// hot path.
pub fn check_compliance_normalized(
    voc: &VocabularyOntology,
    business: &[NormalSimplePolicy],
    consent: &[NormalSimplePolicy],
) -> Result<ComplianceReport, EngineError> {
    let fp = voc.fingerprint();
    if business
        .iter()
        .chain(consent)
        .any(|p| p.vocab_fingerprint != fp)
    {
        return Err(EngineError::VocabularyMismatch);
    }

    let mut cover = BTreeMap::new();
    let mut vacuous = Vec::new();
    let mut failure: Option<Failure> = None;

    for (bi, bp) in business.iter().enumerate() {
        if !bp.satisfiable {
            vacuous.push(bi);
            continue;
        }
        let mut covered = None;
        let mut best_fail: Option<(usize, SlotFail)> = None;
        for (ci, cp) in consent.iter().enumerate() {
            // An unsatisfiable consent disjunct permits nothing.
            if !cp.satisfiable {
                continue;
            }
            match subsumes_simple_inner(voc, bp, cp) {
                None => {
                    covered = Some(ci);
                    break;
                }
                Some(fail) => {
                    let better = match &best_fail {
                        Some((_, best)) => fail.progress > best.progress,
                        None => true,
                    };
                    if better {
                        best_fail = Some((ci, fail));
                    }
                }
            }
        }
        match covered {
            Some(ci) => {
                cover.insert(bi, ci);
            }
            None => {
                if failure.is_none() {
                    failure = Some(match best_fail {
                        Some((ci, fail)) => Failure::Slot {
                            business_disjunct: bi,
                            consent_disjunct: Some(ci),
                            property_path: fail.path,
                            found: fail.found,
                            required: fail.required,
                        },
                        None => Failure::Slot {
                            business_disjunct: bi,
                            consent_disjunct: None,
                            property_path: Vec::new(),
                            found: "(policy)".to_string(),
                            required: "a satisfiable consent disjunct".to_string(),
                        },
                    });
                }
            }
        }
    }

    let verdict = if failure.is_some() {
        Verdict::NonCompliant
    } else if vacuous.len() == business.len() {
        Verdict::VacuouslyCompliant
    } else {
        Verdict::Compliant
    };
    Ok(ComplianceReport {
        verdict,
        cover,
        vacuous_disjuncts: vacuous,
        failure,
    })
}
