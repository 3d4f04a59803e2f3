//! Test support: a brute-force semantic subsumption oracle, independent of
//! the normalizer and the structural engine.
//!
//! The oracle decides `p ⊑ q` by searching for a countermodel among finite
//! tree-shaped interpretations: a tree satisfying one disjunct of `p` whose
//! root does not satisfy `q`. Node labels are consistent upward-closed class
//! sets (closure recomputed here by plain breadth-first reachability over
//! the raw subclass axioms, disjointness checked directly against the raw
//! asserted pairs), functional properties get at most one successor,
//! non-functional ones any grouping of their conjuncts (all set partitions
//! are tried), and duration values range over the interval endpoints of the
//! query plus/minus one and zero, which is exhaustive for closed intervals.
//!
//! Everything here is deliberately naive; it must stay an independent check
//! on the production path, not share its shortcuts.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::interval::Interval;
use crate::policy::{ClassExpr, DurationExpr, FullPolicy, PolicyKind, SimplePolicy, StorageExpr};
use crate::vocab::{
    classes, PropId, PropertyRange, RangeSpec, VocabularyBuilder, VocabularyOntology,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The instance exceeds the enumeration bounds.
    Bounds(String),
    UndeclaredClass(String),
    UndeclaredProperty(String),
    /// Complements and unions may not appear on the subsumee side.
    PolicyConstruct(&'static str),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Bounds(msg) => write!(f, "oracle bounds exceeded: {msg}"),
            OracleError::UndeclaredClass(id) => write!(f, "undeclared class '{id}'"),
            OracleError::UndeclaredProperty(id) => write!(f, "undeclared property '{id}'"),
            OracleError::PolicyConstruct(what) => {
                write!(f, "{what} cannot occur in the subsumee policy")
            }
        }
    }
}

const MAX_CLASSES: usize = 64;
const MAX_DEPTH: usize = 8;
const MAX_BRANCHES: usize = 4096;
const MAX_PARTITION_ITEMS: usize = 5;

struct Oracle<'v> {
    voc: &'v VocabularyOntology,
    /// Reachability over the raw subclass axioms (reflexive).
    up: Vec<BTreeSet<u32>>,
    /// Raw asserted disjoint pairs.
    asserted: Vec<(u32, u32)>,
}

impl<'v> Oracle<'v> {
    fn new(voc: &'v VocabularyOntology) -> Result<Self, OracleError> {
        let n = voc.class_count();
        if n > MAX_CLASSES {
            return Err(OracleError::Bounds(alloc::format!(
                "{n} classes exceeds the limit of {MAX_CLASSES}"
            )));
        }
        // Breadth-first reachability, one source at a time.
        let mut adjacency: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
        for &(sub, sup) in voc.subclass_axioms() {
            adjacency[sub.0 as usize].push(sup.0);
        }
        let mut up = Vec::with_capacity(n);
        for start in 0..n as u32 {
            let mut seen: BTreeSet<u32> = BTreeSet::new();
            let mut queue = alloc::vec![start];
            while let Some(c) = queue.pop() {
                if seen.insert(c) {
                    queue.extend(adjacency[c as usize].iter().copied());
                }
            }
            up.push(seen);
        }
        let asserted = voc
            .disjoint_pairs()
            .iter()
            .map(|&(a, b)| (a.0, b.0))
            .collect();
        Ok(Oracle { voc, up, asserted })
    }

    fn close(&self, names: &[u32]) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for &c in names {
            out.extend(self.up[c as usize].iter().copied());
        }
        out
    }

    fn consistent(&self, closed: &BTreeSet<u32>) -> bool {
        !self
            .asserted
            .iter()
            .any(|&(a, b)| closed.contains(&a) && closed.contains(&b))
    }

    fn resolve_class(&self, id: &str) -> Result<u32, OracleError> {
        self.voc
            .class_id(id)
            .map(|c| c.0)
            .ok_or_else(|| OracleError::UndeclaredClass(id.to_string()))
    }

    fn resolve_prop(&self, id: &str) -> Result<PropId, OracleError> {
        self.voc
            .prop_id(id)
            .ok_or_else(|| OracleError::UndeclaredProperty(id.to_string()))
    }

    fn is_day_interval_prop(&self, pid: PropId) -> bool {
        self.voc.property(pid).range == PropertyRange::DayInterval
    }
}

// ---------------------------------------------------------------------------
// Conjunction side (the tree must satisfy this)
// ---------------------------------------------------------------------------

#[derive(Default)]
struct Conj<'a> {
    names: Vec<u32>,
    exists: Vec<(PropId, Vec<&'a ClassExpr>)>,
    intervals: Vec<Interval>,
}

fn collect_conj<'a>(
    oracle: &Oracle<'_>,
    expr: &'a ClassExpr,
    out: &mut Conj<'a>,
) -> Result<(), OracleError> {
    match expr {
        ClassExpr::Named(id) => {
            out.names.push(oracle.resolve_class(id)?);
            Ok(())
        }
        ClassExpr::Intersection(members) => {
            for m in members {
                collect_conj(oracle, m, out)?;
            }
            Ok(())
        }
        ClassExpr::Interval(iv) => {
            out.intervals.push(*iv);
            Ok(())
        }
        ClassExpr::Exists(prop, filler) => {
            let pid = oracle.resolve_prop(prop)?;
            if oracle.is_day_interval_prop(pid) {
                if let ClassExpr::Interval(iv) = filler.as_ref() {
                    out.intervals.push(*iv);
                    return Ok(());
                }
            }
            match out.exists.iter_mut().find(|(p, _)| *p == pid) {
                Some((_, fillers)) => fillers.push(filler),
                None => out.exists.push((pid, alloc::vec![filler])),
            }
            Ok(())
        }
        ClassExpr::Complement(_) => Err(OracleError::PolicyConstruct("a complement")),
        ClassExpr::Union(_) => Err(OracleError::PolicyConstruct("a union")),
    }
}

// ---------------------------------------------------------------------------
// Avoidance side (the tree must refute all of these)
// ---------------------------------------------------------------------------

/// One branch of refutation choices, flattened to atoms.
#[derive(Default, Clone)]
struct Refute<'a> {
    avoid_names: Vec<u32>,
    require_names: Vec<u32>,
    avoid_intervals: Vec<Interval>,
    avoid_succ: Vec<(PropId, &'a ClassExpr)>,
}

impl<'a> Refute<'a> {
    fn merge(&self, other: &Refute<'a>) -> Refute<'a> {
        let mut out = self.clone();
        out.avoid_names.extend_from_slice(&other.avoid_names);
        out.require_names.extend_from_slice(&other.require_names);
        out.avoid_intervals
            .extend_from_slice(&other.avoid_intervals);
        out.avoid_succ.extend_from_slice(&other.avoid_succ);
        out
    }
}

/// All ways to refute a single expression.
fn refute_one<'a>(
    oracle: &Oracle<'_>,
    expr: &'a ClassExpr,
) -> Result<Vec<Refute<'a>>, OracleError> {
    match expr {
        ClassExpr::Named(id) => Ok(alloc::vec![Refute {
            avoid_names: alloc::vec![oracle.resolve_class(id)?],
            ..Refute::default()
        }]),
        ClassExpr::Complement(id) => Ok(alloc::vec![Refute {
            require_names: alloc::vec![oracle.resolve_class(id)?],
            ..Refute::default()
        }]),
        ClassExpr::Interval(iv) => Ok(alloc::vec![Refute {
            avoid_intervals: alloc::vec![*iv],
            ..Refute::default()
        }]),
        ClassExpr::Exists(prop, filler) => {
            let pid = oracle.resolve_prop(prop)?;
            if oracle.is_day_interval_prop(pid) {
                if let ClassExpr::Interval(iv) = filler.as_ref() {
                    return Ok(alloc::vec![Refute {
                        avoid_intervals: alloc::vec![*iv],
                        ..Refute::default()
                    }]);
                }
            }
            Ok(alloc::vec![Refute {
                avoid_succ: alloc::vec![(pid, filler.as_ref())],
                ..Refute::default()
            }])
        }
        // Refuting an intersection means refuting at least one member.
        ClassExpr::Intersection(members) => {
            let mut out = Vec::new();
            for m in members {
                out.extend(refute_one(oracle, m)?);
            }
            if members.is_empty() {
                // The empty intersection is "anything": it cannot be refuted.
                return Ok(Vec::new());
            }
            Ok(out)
        }
        // Refuting a union means refuting every member.
        ClassExpr::Union(members) => {
            let mut acc = alloc::vec![Refute::default()];
            for m in members {
                let branches = refute_one(oracle, m)?;
                let mut next = Vec::new();
                for base in &acc {
                    for b in &branches {
                        next.push(base.merge(b));
                    }
                }
                if next.len() > MAX_BRANCHES {
                    return Err(OracleError::Bounds("refutation branching".into()));
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

fn refute_all<'a>(
    oracle: &Oracle<'_>,
    exprs: &[&'a ClassExpr],
) -> Result<Vec<Refute<'a>>, OracleError> {
    let mut acc = alloc::vec![Refute::default()];
    for e in exprs {
        let branches = refute_one(oracle, e)?;
        let mut next = Vec::new();
        for base in &acc {
            for b in &branches {
                next.push(base.merge(b));
            }
        }
        if next.len() > MAX_BRANCHES {
            return Err(OracleError::Bounds("refutation branching".into()));
        }
        acc = next;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Countermodel search
// ---------------------------------------------------------------------------

/// All set partitions of `0..n` (n kept small by the bounds check).
fn partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = alloc::vec![Vec::new()];
    for item in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for (i, _) in p.iter().enumerate() {
                let mut q = p.clone();
                q[i].push(item);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(alloc::vec![item]);
            next.push(q);
        }
        out = next;
    }
    out
}

impl<'v> Oracle<'v> {
    /// Does a tree exist that satisfies the conjunction of `conj_exprs`
    /// (plus `extra_names`) while refuting every expression in `avoid`?
    fn sat_avoid(
        &self,
        extra_names: &[u32],
        conj_exprs: &[&ClassExpr],
        avoid: &[&ClassExpr],
        candidates: &[u64],
        depth: usize,
    ) -> Result<bool, OracleError> {
        if depth > MAX_DEPTH {
            return Err(OracleError::Bounds("nesting depth".into()));
        }
        let mut conj = Conj::default();
        for e in conj_exprs {
            collect_conj(self, e, &mut conj)?;
        }
        conj.names.extend_from_slice(extra_names);

        'branch: for branch in refute_all(self, avoid)? {
            // Label: the upward closure of everything required here.
            let mut required = conj.names.clone();
            required.extend_from_slice(&branch.require_names);
            let closed = self.close(&required);
            if !self.consistent(&closed) {
                continue;
            }
            if branch.avoid_names.iter().any(|a| closed.contains(a)) {
                continue;
            }

            // Duration value, when the conjunction demands one.
            if !conj.intervals.is_empty() {
                let ok = candidates.iter().any(|&v| {
                    conj.intervals.iter().all(|iv| iv.contains_value(v))
                        && !branch.avoid_intervals.iter().any(|iv| iv.contains_value(v))
                });
                if !ok {
                    continue;
                }
            }

            // Successors required by the conjunction; everything each
            // successor must refute is everything avoided under its role.
            for (pid, fillers) in &conj.exists {
                let child_avoid: Vec<&ClassExpr> = branch
                    .avoid_succ
                    .iter()
                    .filter(|(p, _)| p == pid)
                    .map(|(_, d)| *d)
                    .collect();
                let range_extra: Vec<u32> = match self.voc.property(*pid).range {
                    PropertyRange::Class(c) => alloc::vec![c.0],
                    PropertyRange::DayInterval => Vec::new(),
                };
                if self.voc.property(*pid).functional {
                    if !self.sat_avoid(
                        &range_extra,
                        fillers,
                        &child_avoid,
                        candidates,
                        depth + 1,
                    )? {
                        continue 'branch;
                    }
                } else {
                    if fillers.len() > MAX_PARTITION_ITEMS {
                        return Err(OracleError::Bounds("successor grouping".into()));
                    }
                    let mut any_partition = false;
                    'partition: for partition in partitions(fillers.len()) {
                        for group in &partition {
                            let group_exprs: Vec<&ClassExpr> =
                                group.iter().map(|&i| fillers[i]).collect();
                            if !self.sat_avoid(
                                &range_extra,
                                &group_exprs,
                                &child_avoid,
                                candidates,
                                depth + 1,
                            )? {
                                continue 'partition;
                            }
                        }
                        any_partition = true;
                        break;
                    }
                    if !any_partition {
                        continue 'branch;
                    }
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

fn collect_interval_endpoints(expr: &ClassExpr, out: &mut BTreeSet<u64>) {
    match expr {
        ClassExpr::Interval(iv) => {
            out.insert(iv.lo);
            out.insert(iv.lo.saturating_sub(1));
            if iv.hi < Interval::INF {
                out.insert(iv.hi);
                out.insert(iv.hi.saturating_add(1));
            } else {
                out.insert(Interval::INF);
            }
        }
        ClassExpr::Intersection(members) | ClassExpr::Union(members) => {
            for m in members {
                collect_interval_endpoints(m, out);
            }
        }
        ClassExpr::Exists(_, filler) => collect_interval_endpoints(filler, out),
        ClassExpr::Named(_) | ClassExpr::Complement(_) => {}
    }
}

fn value_candidates(exprs: &[&ClassExpr]) -> Vec<u64> {
    let mut set = BTreeSet::new();
    set.insert(0);
    for e in exprs {
        collect_interval_endpoints(e, &mut set);
    }
    set.into_iter().collect()
}

/// Semantic subsumption between full policies by countermodel enumeration.
pub fn oracle_subsumes(
    voc: &VocabularyOntology,
    p: &FullPolicy,
    q: &FullPolicy,
) -> Result<bool, OracleError> {
    oracle_subsumes_expr(voc, p, &q.to_class_expr())
}

/// Semantic subsumption of a full policy under an arbitrary class expression
/// (e.g. an inlined regulatory rulebook).
pub fn oracle_subsumes_expr(
    voc: &VocabularyOntology,
    p: &FullPolicy,
    q_expr: &ClassExpr,
) -> Result<bool, OracleError> {
    let oracle = Oracle::new(voc)?;
    // A union on the left decomposes exactly: every disjunct must be
    // subsumed on its own.
    for disjunct in &p.disjuncts {
        let d_expr = disjunct.to_class_expr();
        let candidates = value_candidates(&[&d_expr, q_expr]);
        if oracle.sat_avoid(&[], &[&d_expr], &[q_expr], &candidates, 0)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Semantic satisfiability of one simple policy.
pub fn oracle_satisfiable(voc: &VocabularyOntology, p: &SimplePolicy) -> Result<bool, OracleError> {
    let oracle = Oracle::new(voc)?;
    let expr = p.to_class_expr();
    let candidates = value_candidates(&[&expr]);
    oracle.sat_avoid(&[], &[&expr], &[], &candidates, 0)
}

// ---------------------------------------------------------------------------
// Random instances within the oracle bounds
// ---------------------------------------------------------------------------

/// A generated differential-test instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub vocabulary: VocabularyOntology,
    pub business: FullPolicy,
    pub consent: FullPolicy,
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[(rng.next_u64() % items.len() as u64) as usize]
}

fn chance(rng: &mut ChaCha8Rng, p: f64) -> bool {
    ((rng.next_u64() >> 11) as f64) / ((1u64 << 53) as f64) < p
}

const ENDPOINTS: [u64; 5] = [0, 10, 30, 365, Interval::INF];

/// Random vocabulary and policy pair within the oracle bounds: at most eight
/// classes beyond the tops, expression depth at most three, interval
/// endpoints drawn from a fixed pool.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;

    let trees: [(&str, &str); 5] = [
        ("d", classes::ANY_DATA),
        ("p", classes::ANY_PURPOSE),
        ("pr", classes::ANY_PROCESSING),
        ("r", classes::ANY_RECIPIENT),
        ("l", classes::ANY_LOCATION),
    ];
    let mut b = VocabularyBuilder::new();
    b.standard_properties();

    let n = 4 + (rng.next_u64() % 5) as usize; // 4..=8 extra classes
    let mut names: Vec<String> = Vec::new();
    let mut tree_of: Vec<usize> = Vec::new();
    for i in 0..n {
        let name = alloc::format!("t:X{i}");
        b.class(&name);
        // Parent: an earlier class (same tree) or a fresh tree top.
        let same_tree_parents: Vec<usize> = (0..i).collect();
        if !same_tree_parents.is_empty() && chance(rng, 0.6) {
            let parent = *pick(rng, &same_tree_parents);
            b.subclass(&name, &names[parent]);
            tree_of.push(tree_of[parent]);
            // Occasional second parent within the same tree exercises
            // multi-inheritance in the closure.
            if chance(rng, 0.15) {
                let other = *pick(rng, &same_tree_parents);
                if tree_of[other] == tree_of[parent] {
                    b.subclass(&name, &names[other]);
                }
            }
        } else {
            let t = (rng.next_u64() % trees.len() as u64) as usize;
            b.subclass(&name, trees[t].1);
            tree_of.push(t);
        }
        names.push(name);
    }

    // Occasional back edge within a tree: may introduce an equivalence
    // cycle, which collapses to mutual subsumption.
    if names.len() >= 2 && chance(rng, 0.15) {
        let j = 1 + (rng.next_u64() % (names.len() as u64 - 1)) as usize;
        let i = (rng.next_u64() % j as u64) as usize;
        if tree_of[i] == tree_of[j] {
            b.subclass(&names[i], &names[j]);
        }
    }

    // A couple of duty classes for non-functional slots.
    b.class("t:Duty0").subclass("t:Duty0", classes::ANY_DUTY);
    b.class("t:Duty1").subclass("t:Duty1", classes::ANY_DUTY);

    // A nested modality tree reached through a functional sub-property.
    b.class("t:Mode").subclass("t:Mode", classes::ANY_PURPOSE);
    b.class("t:ModeA").subclass("t:ModeA", "t:Mode");
    b.class("t:ModeB").subclass("t:ModeB", "t:Mode");
    b.property("t:chan", true, RangeSpec::Class("t:Mode".into()));

    // Disjointness: attribute tops with some probability, plus random
    // sibling pairs (possibly making classes unsatisfiable, which the
    // engine must treat identically).
    if chance(rng, 0.7) {
        b.disjoint(&[
            classes::ANY_DATA,
            classes::ANY_PURPOSE,
            classes::ANY_PROCESSING,
        ]);
    }
    for _ in 0..(rng.next_u64() % 3) {
        if names.len() >= 2 {
            let a = pick(rng, &names).clone();
            let c = pick(rng, &names).clone();
            if a != c {
                b.disjoint(&[&a, &c]);
            }
        }
    }
    let vocabulary = b.build().expect("generated vocabulary is well-formed");

    let class_for = |rng: &mut ChaCha8Rng, tree: usize, strict: bool| -> String {
        let mine: Vec<&String> = names
            .iter()
            .zip(&tree_of)
            .filter(|(_, &t)| t == tree)
            .map(|(n, _)| n)
            .collect();
        if mine.is_empty() || (!strict && chance(rng, 0.15)) {
            // Cross-tree pick: may produce range violations on purpose.
            if names.is_empty() {
                trees[tree].1.to_string()
            } else {
                (*pick(rng, &names)).clone()
            }
        } else if chance(rng, 0.1) {
            trees[tree].1.to_string()
        } else {
            (*pick(rng, &mine)).clone()
        }
    };

    let filler = |rng: &mut ChaCha8Rng, tree: usize| -> ClassExpr {
        let base = ClassExpr::Named(class_for(rng, tree, false));
        if chance(rng, 0.25) {
            let mut members = alloc::vec![base];
            if chance(rng, 0.5) {
                members.push(ClassExpr::Named(class_for(rng, tree, false)));
            }
            if tree == 1 && chance(rng, 0.7) {
                let mode = *pick(rng, &["t:Mode", "t:ModeA", "t:ModeB"]);
                members.push(ClassExpr::exists("t:chan", ClassExpr::named(mode)));
            }
            ClassExpr::Intersection(members)
        } else {
            base
        }
    };

    let interval = |rng: &mut ChaCha8Rng| -> Interval {
        let lo = *pick(rng, &ENDPOINTS[..4]);
        let hi = *pick(rng, &ENDPOINTS);
        Interval::new(lo, hi) // lo > hi is a legitimate unsatisfiable case
    };

    let storage = |rng: &mut ChaCha8Rng| -> StorageExpr {
        if chance(rng, 0.15) {
            StorageExpr::Null
        } else {
            StorageExpr::Block {
                location: ClassExpr::Named(class_for(rng, 4, false)),
                duration: if chance(rng, 0.3) {
                    DurationExpr::Days(Interval::UNBOUNDED)
                } else {
                    DurationExpr::Days(interval(rng))
                },
            }
        }
    };

    let simple = |rng: &mut ChaCha8Rng, business: bool| -> SimplePolicy {
        let mut duties = Vec::new();
        if business {
            for _ in 0..(rng.next_u64() % 3) {
                duties.push(ClassExpr::named(*pick(rng, &["t:Duty0", "t:Duty1"])));
            }
        }
        SimplePolicy {
            data: filler(rng, 0),
            purpose: filler(rng, 1),
            processing: filler(rng, 2),
            recipient: filler(rng, 3),
            storage: storage(rng),
            duties,
            legal_basis: None,
        }
    };

    let business = FullPolicy {
        kind: PolicyKind::Business,
        disjuncts: (0..1 + (rng.next_u64() % 2) as usize)
            .map(|_| simple(rng, true))
            .collect(),
    };

    // Half the consents derive from the business policy (ancestor swaps,
    // then a chance of one deliberate perturbation) so near-miss pairs are
    // well represented; the rest are independent.
    let consent_disjuncts = if chance(rng, 0.5) {
        let mut ds: Vec<SimplePolicy> = business
            .disjuncts
            .iter()
            .map(|d| {
                let mut c = d.clone();
                c.duties.clear();
                c.legal_basis = None;
                let widen = |rng: &mut ChaCha8Rng, e: &ClassExpr| -> ClassExpr {
                    match e {
                        ClassExpr::Named(id) => {
                            if let Some(cid) = vocabulary.class_id(id) {
                                let ancestors: Vec<_> = vocabulary
                                    .ancestor_ids(cid)
                                    .map(|a| vocabulary.class_name(a).to_string())
                                    .collect();
                                ClassExpr::Named(pick(rng, &ancestors).clone())
                            } else {
                                e.clone()
                            }
                        }
                        other => other.clone(),
                    }
                };
                c.data = widen(rng, &c.data);
                c.recipient = widen(rng, &c.recipient);
                if let StorageExpr::Block { duration, .. } = &mut c.storage {
                    if let DurationExpr::Days(iv) = duration {
                        *duration =
                            DurationExpr::Days(Interval::new(iv.lo.saturating_sub(10), iv.hi));
                    }
                }
                c
            })
            .collect();
        if chance(rng, 0.5) {
            let i = (rng.next_u64() % ds.len() as u64) as usize;
            ds[i].purpose = filler(rng, 1);
        }
        if chance(rng, 0.3) {
            ds.push(simple(rng, false));
        }
        ds
    } else {
        (0..1 + (rng.next_u64() % 3) as usize)
            .map(|_| simple(rng, false))
            .collect()
    };

    Instance {
        vocabulary,
        business,
        consent: FullPolicy {
            kind: PolicyKind::Consent,
            disjuncts: consent_disjuncts,
        },
    }
}
