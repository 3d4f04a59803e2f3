//! Phase one of compliance checking: close simple policies under the
//! vocabulary axioms, merge conjuncts on functional properties, intersect
//! duration intervals, and detect unsatisfiability.
//!
//! Normalization is idempotent and pure; disjuncts of a full policy can be
//! normalized in parallel with no coordination.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::interval::{intersect_intervals, Interval};
use crate::policy::{props, ClassExpr, DurationExpr, FullPolicy, SimplePolicy, StorageExpr};
use crate::vocab::{classes, ClassId, PropId, PropertyRange, VocabularyOntology};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    UndeclaredClass(String),
    UndeclaredProperty(String),
    /// Complement/union fillers belong to regulatory rulebooks, not policies.
    UnsupportedConstruct(&'static str),
}

impl fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizeError::UndeclaredClass(id) => write!(f, "undeclared class '{id}'"),
            NormalizeError::UndeclaredProperty(id) => write!(f, "undeclared property '{id}'"),
            NormalizeError::UnsupportedConstruct(what) => {
                write!(f, "{what} is not allowed in a policy")
            }
        }
    }
}

/// A normalized filler: the constraints a policy places on the value of one
/// property. `names` holds most-specific class ids (redundant superclasses
/// removed), `nested` the merged existential restrictions per sub-property,
/// and `interval` the intersected `spl:durationInDays` constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFiller {
    pub names: Vec<ClassId>,
    pub nested: BTreeMap<PropId, Vec<NormalFiller>>,
    pub interval: Option<Interval>,
}

impl NormalFiller {
    fn empty() -> Self {
        NormalFiller {
            names: Vec::new(),
            nested: BTreeMap::new(),
            interval: None,
        }
    }

    /// Compact rendering for reports, e.g. `HeartRate` or
    /// `FitnessRecommendation & (contact: SMS)`.
    pub fn render(&self, voc: &VocabularyOntology) -> String {
        let mut parts: Vec<String> = self
            .names
            .iter()
            .map(|&c| voc.class_name(c).to_string())
            .collect();
        for (&prop, entries) in &self.nested {
            for e in entries {
                parts.push(alloc::format!(
                    "({}: {})",
                    voc.property(prop).id,
                    e.render(voc)
                ));
            }
        }
        if let Some(iv) = &self.interval {
            parts.push(alloc::format!("{iv}"));
        }
        if parts.is_empty() {
            "anything".to_string()
        } else {
            parts.join(" & ")
        }
    }
}

/// One normalized disjunct of a full policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalSimplePolicy {
    /// Property id -> filler entries; functional properties hold exactly one
    /// entry, `sbpl:hasDuty` keeps its conjuncts un-merged.
    pub slots: BTreeMap<PropId, Vec<NormalFiller>>,
    pub satisfiable: bool,
    /// Index of the source disjunct within its full policy.
    pub provenance: usize,
    /// Fingerprint of the vocabulary this was normalized under.
    pub vocab_fingerprint: u64,
}

impl NormalSimplePolicy {
    pub fn slot(&self, prop: PropId) -> Option<&[NormalFiller]> {
        self.slots.get(&prop).map(|v| v.as_slice())
    }
}

/// Raw conjuncts collected while flattening an expression, before merging.
#[derive(Default)]
struct Conjuncts<'a> {
    names: Vec<ClassId>,
    exists: Vec<(PropId, Vec<&'a ClassExpr>)>,
    intervals: Vec<Interval>,
}

impl<'a> Conjuncts<'a> {
    fn push_exists(&mut self, prop: PropId, filler: &'a ClassExpr) {
        for (p, fillers) in &mut self.exists {
            if *p == prop {
                fillers.push(filler);
                return;
            }
        }
        self.exists.push((prop, alloc::vec![filler]));
    }
}

fn flatten<'a>(
    voc: &VocabularyOntology,
    expr: &'a ClassExpr,
    out: &mut Conjuncts<'a>,
) -> Result<(), NormalizeError> {
    match expr {
        ClassExpr::Named(id) => {
            let c = voc
                .class_id(id)
                .ok_or_else(|| NormalizeError::UndeclaredClass(id.clone()))?;
            out.names.push(c);
            Ok(())
        }
        ClassExpr::Intersection(members) => {
            for m in members {
                flatten(voc, m, out)?;
            }
            Ok(())
        }
        ClassExpr::Exists(prop, filler) => {
            let p = voc
                .prop_id(prop)
                .ok_or_else(|| NormalizeError::UndeclaredProperty(prop.clone()))?;
            if let ClassExpr::Interval(iv) = filler.as_ref() {
                if voc.property(p).range == PropertyRange::DayInterval {
                    out.intervals.push(*iv);
                    return Ok(());
                }
            }
            out.push_exists(p, filler);
            Ok(())
        }
        ClassExpr::Interval(iv) => {
            out.intervals.push(*iv);
            Ok(())
        }
        ClassExpr::Complement(_) => Err(NormalizeError::UnsupportedConstruct("a complement")),
        ClassExpr::Union(_) => Err(NormalizeError::UnsupportedConstruct("a union")),
    }
}

/// Build the normalized filler for the value of `prop` constrained by the
/// conjunction of `exprs`. Returns the filler and whether it is satisfiable.
fn build_filler(
    voc: &VocabularyOntology,
    prop: PropId,
    exprs: &[&ClassExpr],
) -> Result<(NormalFiller, bool), NormalizeError> {
    let mut conj = Conjuncts::default();
    // The range axiom contributes to the filler's closure; a filler that is
    // disjoint with the range is unsatisfiable.
    if let PropertyRange::Class(range) = voc.property(prop).range {
        conj.names.push(range);
    }
    for e in exprs {
        flatten(voc, e, &mut conj)?;
    }

    let mut sat = true;
    let mut filler = NormalFiller::empty();

    if voc.names_have_disjoint_pair(&conj.names) {
        sat = false;
    }
    let mut names = conj.names;
    voc.minimize_names(&mut names);
    filler.names = names;

    if !conj.intervals.is_empty() {
        let mut iv = Interval::UNBOUNDED;
        for i in &conj.intervals {
            iv = intersect_intervals(iv, *i);
        }
        if iv.is_empty() {
            sat = false;
        }
        filler.interval = Some(iv);
    }

    for (p, fillers) in conj.exists {
        if voc.property(p).functional {
            let (merged, entry_sat) = build_filler(voc, p, &fillers)?;
            sat &= entry_sat;
            filler.nested.insert(p, alloc::vec![merged]);
        } else {
            let mut entries = Vec::new();
            for f in fillers {
                let (entry, entry_sat) = build_filler(voc, p, &[f])?;
                sat &= entry_sat;
                entries.push(entry);
            }
            filler.nested.insert(p, entries);
        }
    }

    Ok((filler, sat))
}

fn storage_to_expr(storage: &StorageExpr) -> ClassExpr {
    match storage {
        StorageExpr::Null => ClassExpr::named(classes::NULL),
        StorageExpr::Block { location, duration } => {
            let mut members = alloc::vec![ClassExpr::exists(props::HAS_LOCATION, location.clone())];
            match duration {
                DurationExpr::Days(iv) => members.push(ClassExpr::exists(
                    props::DURATION_IN_DAYS,
                    ClassExpr::Interval(*iv),
                )),
                DurationExpr::Class(expr) => {
                    members.push(ClassExpr::exists(props::HAS_DURATION, expr.clone()))
                }
            }
            ClassExpr::Intersection(members)
        }
    }
}

/// Normalize one simple policy. `provenance` is its index within the full
/// policy it came from.
pub fn normalize_simple(
    voc: &VocabularyOntology,
    p: &SimplePolicy,
    provenance: usize,
) -> Result<NormalSimplePolicy, NormalizeError> {
    let mut slots: BTreeMap<PropId, Vec<NormalFiller>> = BTreeMap::new();
    let mut sat = true;

    let storage_expr = storage_to_expr(&p.storage);
    let usage: [(&str, &ClassExpr); 5] = [
        (props::HAS_DATA, &p.data),
        (props::HAS_PURPOSE, &p.purpose),
        (props::HAS_PROCESSING, &p.processing),
        (props::HAS_RECIPIENT, &p.recipient),
        (props::HAS_STORAGE, &storage_expr),
    ];
    for (prop, expr) in usage {
        let pid = voc
            .prop_id(prop)
            .ok_or_else(|| NormalizeError::UndeclaredProperty(prop.to_string()))?;
        let (filler, slot_sat) = build_filler(voc, pid, &[expr])?;
        sat &= slot_sat;
        slots.insert(pid, alloc::vec![filler]);
    }

    if !p.duties.is_empty() {
        let pid = voc
            .prop_id(props::HAS_DUTY)
            .ok_or_else(|| NormalizeError::UndeclaredProperty(props::HAS_DUTY.to_string()))?;
        let mut entries = Vec::new();
        for duty in &p.duties {
            let (filler, duty_sat) = build_filler(voc, pid, &[duty])?;
            sat &= duty_sat;
            entries.push(filler);
        }
        slots.insert(pid, entries);
    }

    if let Some(basis) = &p.legal_basis {
        let pid = voc.prop_id(props::HAS_LEGAL_BASIS).ok_or_else(|| {
            NormalizeError::UndeclaredProperty(props::HAS_LEGAL_BASIS.to_string())
        })?;
        let (filler, basis_sat) = build_filler(voc, pid, &[basis])?;
        sat &= basis_sat;
        slots.insert(pid, alloc::vec![filler]);
    }

    Ok(NormalSimplePolicy {
        slots,
        satisfiable: sat,
        provenance,
        vocab_fingerprint: voc.fingerprint(),
    })
}

/// Normalize every disjunct of a full policy. Unsatisfiable disjuncts are
/// retained but flagged; they comply vacuously and reports surface the flag.
pub fn normalize_full(
    voc: &VocabularyOntology,
    fp: &FullPolicy,
) -> Result<Vec<NormalSimplePolicy>, NormalizeError> {
    fp.disjuncts
        .iter()
        .enumerate()
        .map(|(i, p)| normalize_simple(voc, p, i))
        .collect()
}

// ---------------------------------------------------------------------------
// Back-conversion (used by `plcheck normalize` and the idempotence tests)
// ---------------------------------------------------------------------------

fn filler_to_expr(voc: &VocabularyOntology, f: &NormalFiller) -> ClassExpr {
    let mut members: Vec<ClassExpr> = f
        .names
        .iter()
        .map(|&c| ClassExpr::named(voc.class_name(c)))
        .collect();
    for (&prop, entries) in &f.nested {
        for e in entries {
            members.push(ClassExpr::Exists(
                voc.property(prop).id.clone(),
                Box::new(filler_to_expr(voc, e)),
            ));
        }
    }
    if let Some(iv) = f.interval {
        members.push(ClassExpr::exists(
            props::DURATION_IN_DAYS,
            ClassExpr::Interval(iv),
        ));
    }
    if members.len() == 1 {
        members.pop().unwrap()
    } else {
        ClassExpr::Intersection(members)
    }
}

impl NormalSimplePolicy {
    /// Render the normalized policy back as an AST (normalizing the result
    /// again is the identity). Only meaningful on `normalize_simple` output.
    pub fn to_policy(&self, voc: &VocabularyOntology) -> SimplePolicy {
        let slot_expr = |prop: &str, fallback: &str| -> ClassExpr {
            voc.prop_id(prop)
                .and_then(|p| self.slots.get(&p))
                .and_then(|entries| entries.first())
                .map(|f| filler_to_expr(voc, f))
                .unwrap_or_else(|| ClassExpr::named(fallback))
        };

        let storage = match voc
            .prop_id(props::HAS_STORAGE)
            .and_then(|p| self.slots.get(&p))
            .and_then(|entries| entries.first())
        {
            Some(f) => storage_from_filler(voc, f),
            None => StorageExpr::any(),
        };

        let duties = voc
            .prop_id(props::HAS_DUTY)
            .and_then(|p| self.slots.get(&p))
            .map(|entries| entries.iter().map(|f| filler_to_expr(voc, f)).collect())
            .unwrap_or_default();

        let legal_basis = voc
            .prop_id(props::HAS_LEGAL_BASIS)
            .and_then(|p| self.slots.get(&p))
            .and_then(|entries| entries.first())
            .map(|f| filler_to_expr(voc, f));

        SimplePolicy {
            data: slot_expr(props::HAS_DATA, classes::ANY_DATA),
            purpose: slot_expr(props::HAS_PURPOSE, classes::ANY_PURPOSE),
            processing: slot_expr(props::HAS_PROCESSING, classes::ANY_PROCESSING),
            recipient: slot_expr(props::HAS_RECIPIENT, classes::ANY_RECIPIENT),
            storage,
            duties,
            legal_basis,
        }
    }
}

fn storage_from_filler(voc: &VocabularyOntology, f: &NormalFiller) -> StorageExpr {
    let is_null = f.nested.is_empty()
        && f.interval.is_none()
        && f.names.len() == 1
        && voc.class_name(f.names[0]) == classes::NULL;
    if is_null {
        return StorageExpr::Null;
    }
    let location = voc
        .prop_id(props::HAS_LOCATION)
        .and_then(|p| f.nested.get(&p))
        .and_then(|entries| entries.first())
        .map(|loc| filler_to_expr(voc, loc))
        .unwrap_or_else(|| ClassExpr::named(classes::ANY_LOCATION));
    let named_duration = voc
        .prop_id(props::HAS_DURATION)
        .and_then(|p| f.nested.get(&p))
        .and_then(|entries| entries.first())
        .map(|d| filler_to_expr(voc, d));
    let duration = match (named_duration, f.interval) {
        (Some(expr), _) => DurationExpr::Class(expr),
        (None, Some(iv)) => DurationExpr::Days(iv),
        (None, None) => DurationExpr::Days(Interval::UNBOUNDED),
    };
    StorageExpr::Block { location, duration }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::{parse_policy, PolicyKind};
    use crate::vocab::{RangeSpec, VocabularyBuilder};

    fn befit_voc() -> VocabularyOntology {
        let mut b = VocabularyBuilder::new();
        b.standard_properties();
        for c in [
            "BiometricData",
            "HeartRate",
            "LocationData",
            "FitnessRecommendation",
            "SocialNetworking",
            "Analytics",
            "ComputeAvg",
            "Transfer",
            "BeFit",
            "DataSubjFriends",
            "EU",
            "AnyModality",
            "SMS",
        ] {
            b.class(c);
        }
        b.subclass("BiometricData", classes::ANY_DATA)
            .subclass("HeartRate", "BiometricData")
            .subclass("LocationData", classes::ANY_DATA)
            .subclass("FitnessRecommendation", classes::ANY_PURPOSE)
            .subclass("SocialNetworking", classes::ANY_PURPOSE)
            .subclass("Analytics", classes::ANY_PROCESSING)
            .subclass("ComputeAvg", "Analytics")
            .subclass("Transfer", classes::ANY_PROCESSING)
            .subclass("BeFit", classes::ANY_RECIPIENT)
            .subclass("DataSubjFriends", classes::ANY_RECIPIENT)
            .subclass("EU", classes::ANY_LOCATION)
            .subclass("SMS", "AnyModality")
            .property("contact", true, RangeSpec::Class("AnyModality".into()));
        b.build().unwrap()
    }

    fn parse_simple_text(voc: &VocabularyOntology, text: &str) -> NormalSimplePolicy {
        let fp = parse_policy(text, PolicyKind::Business).unwrap();
        normalize_simple(voc, &fp.disjuncts[0], 0).unwrap()
    }

    #[test]
    fn narrowed_purpose_splits_into_name_and_nested() {
        let voc = befit_voc();
        let n = parse_simple_text(
            &voc,
            r#"{ has_purpose: { FitnessRecommendation, contact: SMS },
                 has_data: HeartRate, has_processing: ComputeAvg,
                 has_recipient: BeFit, has_storage: { has_location: EU } }"#,
        );
        assert!(n.satisfiable);
        let purpose = &n
            .slot(voc.prop_id(crate::policy::props::HAS_PURPOSE).unwrap())
            .unwrap()[0];
        assert_eq!(
            purpose.names,
            alloc::vec![voc.class_id("FitnessRecommendation").unwrap()]
        );
        let contact = purpose
            .nested
            .get(&voc.prop_id("contact").unwrap())
            .unwrap();
        assert_eq!(contact.len(), 1);
        assert_eq!(contact[0].names, alloc::vec![voc.class_id("SMS").unwrap()]);
    }

    #[test]
    fn functional_intervals_intersect() {
        let voc = befit_voc();
        // Two numeric duration constraints on the same storage node.
        let n = parse_simple_text(
            &voc,
            r#"{ has_purpose: FitnessRecommendation, has_data: HeartRate,
                 has_processing: Analytics, has_recipient: BeFit,
                 has_storage: { has_location: EU, has_duration: [400, 500] } }"#,
        );
        let storage = &n
            .slot(voc.prop_id(crate::policy::props::HAS_STORAGE).unwrap())
            .unwrap()[0];
        assert_eq!(storage.interval, Some(Interval::new(400, 500)));
    }

    #[test]
    fn disjoint_names_flag_unsatisfiable() {
        let mut b = VocabularyBuilder::new();
        b.standard_properties();
        b.class("Sensitive")
            .class("NonSensitive")
            .class("Religion")
            .class("Location")
            .class("P")
            .class("Pr")
            .class("R")
            .subclass("Sensitive", classes::ANY_DATA)
            .subclass("NonSensitive", classes::ANY_DATA)
            .subclass("Religion", "Sensitive")
            .subclass("Location", "NonSensitive")
            .subclass("P", classes::ANY_PURPOSE)
            .subclass("Pr", classes::ANY_PROCESSING)
            .subclass("R", classes::ANY_RECIPIENT)
            .disjoint(&["Sensitive", "NonSensitive"]);
        let voc = b.build().unwrap();
        let n = parse_simple_text(
            &voc,
            r#"{ has_data: { Religion, Location }, has_purpose: P,
                 has_processing: Pr, has_recipient: R, has_storage: Null }"#,
        );
        assert!(!n.satisfiable);
    }

    #[test]
    fn empty_interval_flags_unsatisfiable() {
        let voc = befit_voc();
        let n = parse_simple_text(
            &voc,
            r#"{ has_purpose: FitnessRecommendation, has_data: HeartRate,
                 has_processing: Analytics, has_recipient: BeFit,
                 has_storage: { has_duration: [500, 100] } }"#,
        );
        assert!(!n.satisfiable);
    }

    #[test]
    fn range_violation_flags_unsatisfiable() {
        let mut b = VocabularyBuilder::new();
        b.standard_properties();
        b.class("P")
            .class("D")
            .subclass("P", classes::ANY_PURPOSE)
            .subclass("D", classes::ANY_DATA)
            .disjoint(&[classes::ANY_DATA, classes::ANY_PURPOSE]);
        let voc = b.build().unwrap();
        // A purpose term used as a data filler.
        let n = parse_simple_text(
            &voc,
            r#"{ has_data: P, has_purpose: P, has_processing: spl:AnyProcessing,
                 has_recipient: spl:AnyRecipient, has_storage: Null }"#,
        );
        assert!(!n.satisfiable);
    }

    #[test]
    fn normalization_is_idempotent() {
        let voc = befit_voc();
        let n = parse_simple_text(
            &voc,
            r#"{ has_purpose: { FitnessRecommendation, contact: SMS },
                 has_data: { spl:AnyData, HeartRate, BiometricData },
                 has_processing: ComputeAvg, has_recipient: BeFit,
                 has_storage: { has_location: EU, has_duration: [1year, 5year] } }"#,
        );
        let again = normalize_simple(&voc, &n.to_policy(&voc), 0).unwrap();
        assert_eq!(again, n);
    }

    #[test]
    fn null_storage_round_trips() {
        let voc = befit_voc();
        let n = parse_simple_text(
            &voc,
            r#"{ has_purpose: FitnessRecommendation, has_data: HeartRate,
                 has_processing: Analytics, has_recipient: BeFit, has_storage: Null }"#,
        );
        let p = n.to_policy(&voc);
        assert_eq!(p.storage, StorageExpr::Null);
        assert_eq!(normalize_simple(&voc, &p, 0).unwrap(), n);
    }

    #[test]
    fn undeclared_class_is_an_error() {
        let voc = befit_voc();
        let fp = parse_policy(
            r#"{ has_purpose: Mystery, has_data: HeartRate, has_processing: Analytics,
                 has_recipient: BeFit, has_storage: Null }"#,
            PolicyKind::Consent,
        )
        .unwrap();
        let err = normalize_simple(&voc, &fp.disjuncts[0], 0).unwrap_err();
        assert_eq!(err, NormalizeError::UndeclaredClass("Mystery".into()));
    }
}
