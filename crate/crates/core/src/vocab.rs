//! Vocabulary ontology: class and property declarations, subclass and
//! disjointness axioms, and their computed closure.
//!
//! The ontology supports exactly four axiom kinds: class inclusions,
//! disjointness (binary or grouped), property range axioms and functional
//! property declarations. The closure is cached as per-class ancestor bitsets
//! (reflexive-transitive subsumption) plus "disjoint partner" bitsets, so the
//! subsumption and disjointness queries on the compliance hot path are a
//! couple of word operations.
//!
//! File format (UTF-8, one declaration per line, `#` comments):
//!
//! ```text
//! class spl:AnyData
//! subclass svd:Biometric spl:AnyData
//! disjoint spl:AnyData spl:AnyPurpose spl:AnyProcessing
//! property spl:hasData functional range=spl:AnyData
//! property spl:durationInDays functional range=interval
//! property sbpl:hasDuty multi range=sbpl:AnyDuty
//! ```

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Well-known class ids.
pub mod classes {
    pub const ANY_DATA: &str = "spl:AnyData";
    pub const ANY_PURPOSE: &str = "spl:AnyPurpose";
    pub const ANY_PROCESSING: &str = "spl:AnyProcessing";
    pub const ANY_RECIPIENT: &str = "spl:AnyRecipient";
    pub const ANY_STORAGE: &str = "spl:AnyStorage";
    pub const ANY_LOCATION: &str = "spl:AnyLocation";
    pub const ANY_DURATION: &str = "spl:AnyDuration";
    pub const ANY_DUTY: &str = "sbpl:AnyDuty";
    pub const ANY_LEGAL_BASIS: &str = "sbpl:AnyLegalBasis";
    pub const NULL: &str = "spl:Null";
}

/// Interned class identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub u32);

/// Interned property identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(pub u32);

/// Range of a property: a class, or whole-day integers (`spl:durationInDays`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyRange {
    Class(ClassId),
    DayInterval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDecl {
    pub id: String,
    pub functional: bool,
    pub range: PropertyRange,
}

// ---------------------------------------------------------------------------
// Bitsets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(bits: usize) -> Self {
        BitSet {
            words: alloc::vec![0; bits.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    /// Union `other` into `self`; true when anything changed.
    pub(crate) fn union_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            let before = *w;
            *w |= o;
            changed |= *w != before;
        }
        changed
    }

    #[inline]
    pub(crate) fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VocabError {
    /// A line of the vocabulary file could not be parsed.
    Syntax { line: usize, message: String },
    /// An axiom references a class id that was never declared.
    UndeclaredClass(String),
    /// A query used a property id that was never declared.
    UndeclaredProperty(String),
    /// The same property was declared twice with different flags or range.
    ConflictingProperty(String),
}

impl fmt::Display for VocabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VocabError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            VocabError::UndeclaredClass(id) => write!(f, "undeclared class '{id}'"),
            VocabError::UndeclaredProperty(id) => write!(f, "undeclared property '{id}'"),
            VocabError::ConflictingProperty(id) => {
                write!(f, "property '{id}' redeclared with conflicting flags")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

/// Range as named in a declaration, resolved at `build` time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeSpec {
    Class(String),
    DayInterval,
}

/// Programmatic construction of a vocabulary; `load_vocabulary` goes through
/// the same validation path.
#[derive(Debug, Default, Clone)]
pub struct VocabularyBuilder {
    classes: Vec<String>,
    subclass: Vec<(String, String)>,
    disjoint_groups: Vec<Vec<String>>,
    properties: Vec<(String, bool, RangeSpec)>,
}

impl VocabularyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class(&mut self, id: impl Into<String>) -> &mut Self {
        self.classes.push(id.into());
        self
    }

    pub fn subclass(&mut self, sub: impl Into<String>, sup: impl Into<String>) -> &mut Self {
        self.subclass.push((sub.into(), sup.into()));
        self
    }

    pub fn disjoint(&mut self, group: &[&str]) -> &mut Self {
        self.disjoint_groups
            .push(group.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn property(
        &mut self,
        id: impl Into<String>,
        functional: bool,
        range: RangeSpec,
    ) -> &mut Self {
        self.properties.push((id.into(), functional, range));
        self
    }

    /// Declare the ten standard properties and their top classes.
    pub fn standard_properties(&mut self) -> &mut Self {
        use crate::policy::props;
        for top in [
            classes::ANY_DATA,
            classes::ANY_PURPOSE,
            classes::ANY_PROCESSING,
            classes::ANY_RECIPIENT,
            classes::ANY_STORAGE,
            classes::ANY_LOCATION,
            classes::ANY_DURATION,
            classes::ANY_DUTY,
            classes::ANY_LEGAL_BASIS,
        ] {
            self.class(top);
        }
        self.class(classes::NULL);
        self.subclass(classes::NULL, classes::ANY_STORAGE);
        self.subclass(classes::NULL, classes::ANY_RECIPIENT);
        self.property(
            props::HAS_DATA,
            true,
            RangeSpec::Class(classes::ANY_DATA.into()),
        );
        self.property(
            props::HAS_PURPOSE,
            true,
            RangeSpec::Class(classes::ANY_PURPOSE.into()),
        );
        self.property(
            props::HAS_PROCESSING,
            true,
            RangeSpec::Class(classes::ANY_PROCESSING.into()),
        );
        self.property(
            props::HAS_RECIPIENT,
            true,
            RangeSpec::Class(classes::ANY_RECIPIENT.into()),
        );
        self.property(
            props::HAS_STORAGE,
            true,
            RangeSpec::Class(classes::ANY_STORAGE.into()),
        );
        self.property(
            props::HAS_LOCATION,
            true,
            RangeSpec::Class(classes::ANY_LOCATION.into()),
        );
        self.property(
            props::HAS_DURATION,
            true,
            RangeSpec::Class(classes::ANY_DURATION.into()),
        );
        self.property(props::DURATION_IN_DAYS, true, RangeSpec::DayInterval);
        self.property(
            props::HAS_DUTY,
            false,
            RangeSpec::Class(classes::ANY_DUTY.into()),
        );
        self.property(
            props::HAS_LEGAL_BASIS,
            false,
            RangeSpec::Class(classes::ANY_LEGAL_BASIS.into()),
        );
        self
    }

    pub fn build(&self) -> Result<VocabularyOntology, VocabError> {
        VocabularyOntology::from_builder(self)
    }
}

// ---------------------------------------------------------------------------
// Ontology
// ---------------------------------------------------------------------------

/// Tops of the five usage attributes plus the `spl:Null` nominal, when
/// declared.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttributeTops {
    pub data: Option<ClassId>,
    pub purpose: Option<ClassId>,
    pub processing: Option<ClassId>,
    pub recipient: Option<ClassId>,
    pub storage: Option<ClassId>,
    pub null: Option<ClassId>,
}

/// Immutable after load; all queries are read-only and safe to run from any
/// number of threads.
#[derive(Debug, Clone)]
pub struct VocabularyOntology {
    class_names: Vec<String>,
    class_index: BTreeMap<String, ClassId>,
    properties: Vec<PropertyDecl>,
    prop_index: BTreeMap<String, PropId>,
    subclass_axioms: Vec<(ClassId, ClassId)>,
    disjoint_pairs: Vec<(ClassId, ClassId)>,
    ancestors: Vec<BitSet>,
    partners: Vec<BitSet>,
    unsat: BitSet,
    tops: AttributeTops,
    warnings: Vec<String>,
    fingerprint: u64,
}

impl VocabularyOntology {
    fn from_builder(b: &VocabularyBuilder) -> Result<Self, VocabError> {
        // Pass 1: intern classes (duplicate declarations are idempotent).
        let mut class_names: Vec<String> = Vec::new();
        let mut class_index: BTreeMap<String, ClassId> = BTreeMap::new();
        for id in &b.classes {
            if !class_index.contains_key(id) {
                class_index.insert(id.clone(), ClassId(class_names.len() as u32));
                class_names.push(id.clone());
            }
        }
        let n = class_names.len();
        let resolve = |id: &str| -> Result<ClassId, VocabError> {
            class_index
                .get(id)
                .copied()
                .ok_or_else(|| VocabError::UndeclaredClass(id.to_string()))
        };

        // Pass 2: axioms.
        let mut subclass_axioms: Vec<(ClassId, ClassId)> = Vec::new();
        for (sub, sup) in &b.subclass {
            let pair = (resolve(sub)?, resolve(sup)?);
            if !subclass_axioms.contains(&pair) {
                subclass_axioms.push(pair);
            }
        }
        let mut disjoint_pairs: Vec<(ClassId, ClassId)> = Vec::new();
        for group in &b.disjoint_groups {
            let ids: Vec<ClassId> = group
                .iter()
                .map(|id| resolve(id))
                .collect::<Result<_, _>>()?;
            // A group of n expands to all n*(n-1)/2 pairs.
            for i in 0..ids.len() {
                for j in (i + 1)..ids.len() {
                    let (a, bb) = (ids[i].min(ids[j]), ids[i].max(ids[j]));
                    let pair = (a, bb);
                    if a != bb && !disjoint_pairs.contains(&pair) {
                        disjoint_pairs.push(pair);
                    }
                }
            }
        }

        let mut properties: Vec<PropertyDecl> = Vec::new();
        let mut prop_index: BTreeMap<String, PropId> = BTreeMap::new();
        for (id, functional, range) in &b.properties {
            let range = match range {
                RangeSpec::Class(c) => PropertyRange::Class(resolve(c)?),
                RangeSpec::DayInterval => PropertyRange::DayInterval,
            };
            if let Some(&existing) = prop_index.get(id) {
                let prev = &properties[existing.0 as usize];
                if prev.functional != *functional || prev.range != range {
                    return Err(VocabError::ConflictingProperty(id.clone()));
                }
                continue;
            }
            prop_index.insert(id.clone(), PropId(properties.len() as u32));
            properties.push(PropertyDecl {
                id: id.clone(),
                functional: *functional,
                range,
            });
        }

        // Reflexive-transitive closure by fixpoint; subclass cycles collapse
        // into mutual subsumption.
        let mut ancestors: Vec<BitSet> = (0..n)
            .map(|i| {
                let mut s = BitSet::new(n);
                s.set(i);
                s
            })
            .collect();
        loop {
            let mut changed = false;
            for &(sub, sup) in &subclass_axioms {
                if sub == sup {
                    continue;
                }
                let (si, pi) = (sub.0 as usize, sup.0 as usize);
                let sup_set = ancestors[pi].clone();
                changed |= ancestors[si].union_with(&sup_set);
            }
            if !changed {
                break;
            }
        }

        // Disjoint partners, propagated downward: partners(c) holds every B
        // such that some asserted pair (A, B) has c subsumed by A.
        let mut partners: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for c in 0..n {
            for &(a, bb) in &disjoint_pairs {
                if ancestors[c].get(a.0 as usize) {
                    partners[c].set(bb.0 as usize);
                }
                if ancestors[c].get(bb.0 as usize) {
                    partners[c].set(a.0 as usize);
                }
            }
        }

        let mut unsat = BitSet::new(n);
        let mut warnings = Vec::new();
        for c in 0..n {
            if partners[c].intersects(&ancestors[c]) {
                unsat.set(c);
                let witness = ancestors[c]
                    .iter()
                    .find(|&a| partners[c].get(a))
                    .map(|a| class_names[a].clone())
                    .unwrap_or_default();
                warnings.push(alloc::format!(
                    "class '{}' is unsatisfiable: it is disjoint with its own superclass '{}'",
                    class_names[c],
                    witness
                ));
            }
        }

        let tops = AttributeTops {
            data: class_index.get(classes::ANY_DATA).copied(),
            purpose: class_index.get(classes::ANY_PURPOSE).copied(),
            processing: class_index.get(classes::ANY_PROCESSING).copied(),
            recipient: class_index.get(classes::ANY_RECIPIENT).copied(),
            storage: class_index.get(classes::ANY_STORAGE).copied(),
            null: class_index.get(classes::NULL).copied(),
        };

        let fingerprint =
            fingerprint_of(&class_names, &subclass_axioms, &disjoint_pairs, &properties);

        Ok(VocabularyOntology {
            class_names,
            class_index,
            properties,
            prop_index,
            subclass_axioms,
            disjoint_pairs,
            ancestors,
            partners,
            unsat,
            tops,
            warnings,
            fingerprint,
        })
    }

    // -- identifiers ---------------------------------------------------------

    pub fn class_id(&self, id: &str) -> Option<ClassId> {
        self.class_index.get(id).copied()
    }

    pub fn require_class(&self, id: &str) -> Result<ClassId, VocabError> {
        self.class_id(id)
            .ok_or_else(|| VocabError::UndeclaredClass(id.to_string()))
    }

    pub fn class_name(&self, id: ClassId) -> &str {
        &self.class_names[id.0 as usize]
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.class_names.len()).map(|i| ClassId(i as u32))
    }

    pub fn prop_id(&self, id: &str) -> Option<PropId> {
        self.prop_index.get(id).copied()
    }

    pub fn require_prop(&self, id: &str) -> Result<PropId, VocabError> {
        self.prop_id(id)
            .ok_or_else(|| VocabError::UndeclaredProperty(id.to_string()))
    }

    pub fn property(&self, id: PropId) -> &PropertyDecl {
        &self.properties[id.0 as usize]
    }

    pub fn properties(&self) -> &[PropertyDecl] {
        &self.properties
    }

    pub fn attribute_tops(&self) -> &AttributeTops {
        &self.tops
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Content hash; normalized policies are stamped with it so the engine
    /// can reject mixing ontologies.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    // -- queries -------------------------------------------------------------

    /// Reflexive-transitive subsumption lookup.
    #[inline]
    pub fn is_subclass_id(&self, sub: ClassId, sup: ClassId) -> bool {
        self.ancestors[sub.0 as usize].get(sup.0 as usize)
    }

    /// Derived disjointness: some asserted pair (A, B) has `a ⊑ A`, `b ⊑ B`.
    #[inline]
    pub fn are_disjoint_id(&self, a: ClassId, b: ClassId) -> bool {
        self.partners[a.0 as usize].intersects(&self.ancestors[b.0 as usize])
    }

    pub fn is_unsatisfiable(&self, c: ClassId) -> bool {
        self.unsat.get(c.0 as usize)
    }

    pub fn ancestor_ids(&self, c: ClassId) -> impl Iterator<Item = ClassId> + '_ {
        self.ancestors[c.0 as usize]
            .iter()
            .map(|i| ClassId(i as u32))
    }

    /// Remove redundant superclasses from `names`, keeping most-specific
    /// representatives (ties between mutually-subsuming classes go to the
    /// smaller id). Result is sorted and deduplicated.
    pub fn minimize_names(&self, names: &mut Vec<ClassId>) {
        names.sort_unstable();
        names.dedup();
        let snapshot = names.clone();
        names.retain(|&x| {
            !snapshot.iter().any(|&y| {
                y != x && self.is_subclass_id(y, x) && (!self.is_subclass_id(x, y) || y < x)
            })
        });
    }

    /// True when the set contains a provably disjoint pair.
    pub fn names_have_disjoint_pair(&self, names: &[ClassId]) -> bool {
        names
            .iter()
            .enumerate()
            .any(|(i, &a)| names[i..].iter().any(|&b| self.are_disjoint_id(a, b)))
    }

    // -- census (Table-1-style counts) ---------------------------------------

    pub fn subclass_axioms(&self) -> &[(ClassId, ClassId)] {
        &self.subclass_axioms
    }

    pub fn disjoint_pairs(&self) -> &[(ClassId, ClassId)] {
        &self.disjoint_pairs
    }

    pub fn inclusion_count(&self) -> usize {
        self.subclass_axioms.len()
    }

    pub fn disjoint_axiom_count(&self) -> usize {
        self.disjoint_pairs.len()
    }

    pub fn range_axiom_count(&self) -> usize {
        self.properties.len()
    }

    pub fn functional_property_count(&self) -> usize {
        self.properties.iter().filter(|p| p.functional).count()
    }

    /// Length of the longest strict subsumption chain (edges), with
    /// equivalence cycles contributing nothing.
    pub fn hierarchy_height(&self) -> usize {
        let n = self.class_names.len();
        let mut memo: Vec<Option<usize>> = alloc::vec![None; n];
        // Process classes by ascending strict-ancestor count: that is a
        // topological order of the cycle condensation.
        let mut order: Vec<usize> = (0..n).collect();
        let strict_count = |c: usize| {
            self.ancestors[c]
                .iter()
                .filter(|&a| a != c && !self.ancestors[a].get(c))
                .count()
        };
        order.sort_by_key(|&c| strict_count(c));
        for &c in order.iter() {
            let mut best = 0;
            for &(sub, sup) in &self.subclass_axioms {
                if sub.0 as usize == c {
                    let p = sup.0 as usize;
                    if p != c && !self.ancestors[p].get(c) {
                        best = best.max(memo[p].unwrap_or(0) + 1);
                    }
                }
            }
            memo[c] = Some(best);
        }
        memo.into_iter().flatten().max().unwrap_or(0)
    }
}

fn fnv1a(hash: &mut u64, bytes: &[u8]) {
    for &b in bytes {
        *hash ^= u64::from(b);
        *hash = hash.wrapping_mul(0x100000001b3);
    }
}

fn fingerprint_of(
    class_names: &[String],
    subclass: &[(ClassId, ClassId)],
    disjoint: &[(ClassId, ClassId)],
    properties: &[PropertyDecl],
) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for name in class_names {
        fnv1a(&mut h, name.as_bytes());
        fnv1a(&mut h, b";");
    }
    for &(a, b) in subclass {
        fnv1a(&mut h, &a.0.to_le_bytes());
        fnv1a(&mut h, &b.0.to_le_bytes());
    }
    fnv1a(&mut h, b"|");
    for &(a, b) in disjoint {
        fnv1a(&mut h, &a.0.to_le_bytes());
        fnv1a(&mut h, &b.0.to_le_bytes());
    }
    for p in properties {
        fnv1a(&mut h, p.id.as_bytes());
        fnv1a(&mut h, &[p.functional as u8]);
        match p.range {
            PropertyRange::Class(c) => fnv1a(&mut h, &c.0.to_le_bytes()),
            PropertyRange::DayInterval => fnv1a(&mut h, b"interval"),
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

/// Parse and validate a vocabulary document, computing the closure.
pub fn load_vocabulary(source: &str) -> Result<VocabularyOntology, VocabError> {
    let mut b = VocabularyBuilder::new();
    for (lineno, raw) in source.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let directive = parts.next().unwrap();
        let syntax = |message: &str| VocabError::Syntax {
            line: lineno,
            message: message.to_string(),
        };
        match directive {
            "class" => {
                let id = parts.next().ok_or_else(|| syntax("expected: class <id>"))?;
                if parts.next().is_some() {
                    return Err(syntax("expected: class <id>"));
                }
                b.class(id);
            }
            "subclass" => {
                let sub = parts
                    .next()
                    .ok_or_else(|| syntax("expected: subclass <sub> <super>"))?;
                let sup = parts
                    .next()
                    .ok_or_else(|| syntax("expected: subclass <sub> <super>"))?;
                if parts.next().is_some() {
                    return Err(syntax("expected: subclass <sub> <super>"));
                }
                b.subclass(sub, sup);
            }
            "disjoint" => {
                let group: Vec<&str> = parts.collect();
                if group.len() < 2 {
                    return Err(syntax("expected: disjoint <id> <id> [<id> ...]"));
                }
                b.disjoint(&group);
            }
            "property" => {
                let id = parts.next().ok_or_else(|| {
                    syntax("expected: property <id> functional|multi range=<id|interval>")
                })?;
                let functional = match parts.next() {
                    Some("functional") => true,
                    Some("multi") => false,
                    _ => return Err(syntax("expected 'functional' or 'multi'")),
                };
                let range = match parts.next().and_then(|r| r.strip_prefix("range=")) {
                    Some("interval") => RangeSpec::DayInterval,
                    Some(cls) if !cls.is_empty() => RangeSpec::Class(cls.to_string()),
                    _ => return Err(syntax("expected range=<class-id|interval>")),
                };
                if parts.next().is_some() {
                    return Err(syntax("unexpected trailing tokens"));
                }
                b.property(id, functional, range);
            }
            other => {
                return Err(VocabError::Syntax {
                    line: lineno,
                    message: alloc::format!("unknown directive '{other}'"),
                })
            }
        }
    }
    b.build()
}

/// Subsumption query by class id string.
pub fn is_subclass(voc: &VocabularyOntology, sub: &str, sup: &str) -> Result<bool, VocabError> {
    Ok(voc.is_subclass_id(voc.require_class(sub)?, voc.require_class(sup)?))
}

/// Derived disjointness query by class id string.
pub fn are_disjoint(voc: &VocabularyOntology, a: &str, b: &str) -> Result<bool, VocabError> {
    Ok(voc.are_disjoint_id(voc.require_class(a)?, voc.require_class(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BEFIT_MINI: &str = "
        class spl:AnyData
        class BiometricData
        class HeartRate
        class Analytics
        class ComputeAvg
        subclass BiometricData spl:AnyData
        subclass HeartRate BiometricData
        subclass ComputeAvg Analytics
        class spl:AnyProcessing
        subclass Analytics spl:AnyProcessing
    ";

    #[test]
    fn befit_subsumption() {
        let voc = load_vocabulary(BEFIT_MINI).unwrap();
        assert!(is_subclass(&voc, "HeartRate", "BiometricData").unwrap());
        assert!(is_subclass(&voc, "HeartRate", "spl:AnyData").unwrap());
        assert!(!is_subclass(&voc, "BiometricData", "HeartRate").unwrap());
        assert!(is_subclass(&voc, "HeartRate", "HeartRate").unwrap());
    }

    #[test]
    fn tops_only_closure_is_identity() {
        let voc = load_vocabulary(
            "class spl:AnyData\nclass spl:AnyPurpose\nclass spl:AnyProcessing\n\
             class spl:AnyRecipient\nclass spl:AnyStorage\nclass spl:Null",
        )
        .unwrap();
        for a in voc.class_ids() {
            for b in voc.class_ids() {
                assert_eq!(voc.is_subclass_id(a, b), a == b);
            }
        }
    }

    #[test]
    fn cycle_collapses_to_equivalence() {
        let voc =
            load_vocabulary("class A\nclass B\nclass C\nsubclass A B\nsubclass B C\nsubclass C A")
                .unwrap();
        for x in ["A", "B", "C"] {
            for y in ["A", "B", "C"] {
                assert!(is_subclass(&voc, x, y).unwrap(), "{x} vs {y}");
            }
        }
        assert_eq!(voc.hierarchy_height(), 0);
    }

    #[test]
    fn derived_disjointness_propagates_downward() {
        let voc = load_vocabulary(
            "class Sensitive\nclass NonSensitive\nclass Religion\nclass Location\n\
             subclass Religion Sensitive\nsubclass Location NonSensitive\n\
             disjoint Sensitive NonSensitive",
        )
        .unwrap();
        assert!(are_disjoint(&voc, "Religion", "Location").unwrap());
        assert!(are_disjoint(&voc, "Location", "Religion").unwrap());
        assert!(!are_disjoint(&voc, "Religion", "Religion").unwrap());
        assert!(!are_disjoint(&voc, "Religion", "Sensitive").unwrap());
    }

    #[test]
    fn disjoint_with_ancestor_warns_and_marks_unsat() {
        let voc = load_vocabulary("class A\nclass B\nsubclass A B\ndisjoint A B").unwrap();
        let a = voc.class_id("A").unwrap();
        assert!(voc.is_unsatisfiable(a));
        assert!(!voc.is_unsatisfiable(voc.class_id("B").unwrap()));
        assert_eq!(voc.warnings().len(), 1);
        // An unsatisfiable class is disjoint with itself.
        assert!(are_disjoint(&voc, "A", "A").unwrap());
    }

    #[test]
    fn group_disjointness_expands_to_pairs() {
        let voc = load_vocabulary("class A\nclass B\nclass C\ndisjoint A B C").unwrap();
        assert_eq!(voc.disjoint_axiom_count(), 3);
        assert!(are_disjoint(&voc, "A", "C").unwrap());
    }

    #[test]
    fn undeclared_reference_is_an_error() {
        let err = load_vocabulary("class A\nsubclass A Missing").unwrap_err();
        assert_eq!(err, VocabError::UndeclaredClass("Missing".into()));
    }

    #[test]
    fn conflicting_property_redeclaration() {
        let err =
            load_vocabulary("class T\nproperty p functional range=T\nproperty p multi range=T")
                .unwrap_err();
        assert_eq!(err, VocabError::ConflictingProperty("p".into()));
    }

    #[test]
    fn forward_references_allowed() {
        let voc = load_vocabulary("subclass A B\nclass A\nclass B").unwrap();
        assert!(is_subclass(&voc, "A", "B").unwrap());
    }

    #[test]
    fn height_counts_strict_chain_edges() {
        let voc = load_vocabulary(
            "class T\nclass A\nclass B\nclass C\n\
             subclass A T\nsubclass B A\nsubclass C B",
        )
        .unwrap();
        assert_eq!(voc.hierarchy_height(), 3);
    }

    #[test]
    fn minimize_drops_redundant_supers() {
        let voc = load_vocabulary(BEFIT_MINI).unwrap();
        let mut names = alloc::vec![
            voc.class_id("spl:AnyData").unwrap(),
            voc.class_id("HeartRate").unwrap(),
            voc.class_id("BiometricData").unwrap(),
        ];
        voc.minimize_names(&mut names);
        assert_eq!(names, alloc::vec![voc.class_id("HeartRate").unwrap()]);
    }

    #[test]
    fn null_subsumed_only_by_itself_and_tops() {
        let mut b = VocabularyBuilder::new();
        b.standard_properties();
        let voc = b.build().unwrap();
        let null = voc.class_id(classes::NULL).unwrap();
        for c in voc.class_ids() {
            let expected = c == null
                || Some(c) == voc.class_id(classes::ANY_STORAGE)
                || Some(c) == voc.class_id(classes::ANY_RECIPIENT);
            assert_eq!(voc.is_subclass_id(null, c), expected);
        }
    }
}
