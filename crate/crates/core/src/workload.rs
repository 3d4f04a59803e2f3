//! Deterministic workload generation mirroring the pilot test-case shape:
//! an ontology with a fixed axiom census, pools of business and consent
//! policies with fixed disjunct averages, and a pairing list with known
//! ground truth.
//!
//! Compliant pairs are built constructively (the consent is a widened copy
//! of the business policy, one covering disjunct per business disjunct, plus
//! padding), and non-compliant pairs additionally swap every consent data
//! filler into a different top-level branch of the data tree so that the
//! first business disjunct is provably uncovered. Ground truth is therefore
//! known without running the engine, and the workload doubles as a
//! large-scale correctness corpus.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::interval::Interval;
use crate::policy::{ClassExpr, DurationExpr, FullPolicy, PolicyKind, SimplePolicy, StorageExpr};
use crate::vocab::{classes, VocabularyBuilder, VocabularyOntology};

/// Shape parameters for one generated workload.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadProfile {
    pub name: String,
    pub inclusions: usize,
    pub disjoint_axioms: usize,
    pub range_axioms: usize,
    pub functional_properties: usize,
    pub hierarchy_height: usize,
    pub bp_count: usize,
    pub bp_avg_disjuncts: f64,
    pub consent_count: usize,
    pub consent_avg_disjuncts: f64,
    pub check_count: usize,
    pub seed: u64,
    /// Fraction of checks constructed to be compliant.
    pub target_compliant: f64,
}

impl WorkloadProfile {
    /// Pilot 1: 186 inclusions, 11 disjointness axioms, 10 ranges, 8
    /// functional properties, height 4; 120 business policies (avg 2.71),
    /// 12,000 consents (avg 3.77), 12,000 checks.
    pub fn pilot1(seed: u64) -> Self {
        WorkloadProfile {
            name: "pilot1".to_string(),
            inclusions: 186,
            disjoint_axioms: 11,
            range_axioms: 10,
            functional_properties: 8,
            hierarchy_height: 4,
            bp_count: 120,
            bp_avg_disjuncts: 2.71,
            consent_count: 12_000,
            consent_avg_disjuncts: 3.77,
            check_count: 12_000,
            seed,
            target_compliant: 0.5,
        }
    }

    /// Pilot 2: same ontology census; 100 business policies (avg 2.39),
    /// 10,000 consents (avg 3.42), 10,000 checks.
    pub fn pilot2(seed: u64) -> Self {
        WorkloadProfile {
            name: "pilot2".to_string(),
            bp_count: 100,
            bp_avg_disjuncts: 2.39,
            consent_count: 10_000,
            consent_avg_disjuncts: 3.42,
            check_count: 10_000,
            ..WorkloadProfile::pilot1(seed)
        }
    }

    pub fn by_name(name: &str, seed: u64) -> Option<Self> {
        match name {
            "pilot1" => Some(Self::pilot1(seed)),
            "pilot2" => Some(Self::pilot2(seed)),
            _ => None,
        }
    }

    /// FNV-1a hash over the profile fields, part of the bench fingerprint.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.name.as_bytes());
        for v in [
            self.inclusions,
            self.disjoint_axioms,
            self.range_axioms,
            self.functional_properties,
            self.hierarchy_height,
            self.bp_count,
            self.consent_count,
            self.check_count,
        ] {
            eat(&(v as u64).to_le_bytes());
        }
        eat(&self.bp_avg_disjuncts.to_bits().to_le_bytes());
        eat(&self.consent_avg_disjuncts.to_bits().to_le_bytes());
        eat(&self.target_compliant.to_bits().to_le_bytes());
        eat(&self.seed.to_le_bytes());
        h
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    Inconsistent(String),
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::Inconsistent(msg) => write!(f, "inconsistent profile: {msg}"),
        }
    }
}

/// One scheduled compliance check with its constructed ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckPair {
    pub business: usize,
    pub consent: usize,
    pub expected_compliant: bool,
}

#[derive(Debug, Clone)]
pub struct Workload {
    pub profile: WorkloadProfile,
    pub vocabulary: VocabularyOntology,
    pub business: Vec<FullPolicy>,
    pub consents: Vec<FullPolicy>,
    pub pairs: Vec<CheckPair>,
}

impl Workload {
    pub fn bp_avg_disjuncts(&self) -> f64 {
        let total: usize = self.business.iter().map(|p| p.disjuncts.len()).sum();
        total as f64 / self.business.len() as f64
    }

    pub fn consent_avg_disjuncts(&self) -> f64 {
        let total: usize = self.consents.iter().map(|p| p.disjuncts.len()).sum();
        total as f64 / self.consents.len() as f64
    }

    pub fn compliant_fraction(&self) -> f64 {
        let compliant = self.pairs.iter().filter(|p| p.expected_compliant).count();
        compliant as f64 / self.pairs.len() as f64
    }
}

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

fn rng_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// `f64::round` for non-negative values (`round` itself is std-only).
fn round_usize(x: f64) -> usize {
    (x + 0.5) as usize
}

fn rng_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn shuffle<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        items.swap(i, rng_index(rng, i + 1));
    }
}

/// One generated class tree under an attribute top. `parents[i]` is the
/// index of node i's parent (or none for the top), `depth[i]` its distance
/// from the top, `branch[i]` which level-1 subtree it belongs to.
struct Tree {
    names: Vec<String>,
    depth: Vec<usize>,
    branch: Vec<usize>,
    chain: Vec<Vec<String>>,
}

impl Tree {
    /// Grow `count` classes under `top` with maximum depth `height`,
    /// guaranteeing one chain of exactly `height` edges when capacity
    /// allows.
    fn grow(
        rng: &mut ChaCha8Rng,
        b: &mut VocabularyBuilder,
        top: &str,
        prefix: &str,
        count: usize,
        height: usize,
    ) -> Tree {
        let mut tree = Tree {
            names: Vec::new(),
            depth: Vec::new(),
            branch: Vec::new(),
            chain: Vec::new(),
        };
        for i in 0..count {
            let name = alloc::format!("{prefix}{i}");
            b.class(&name);
            let (parent, depth, branch) = if i == 0 {
                (top.to_string(), 1, 0)
            } else if i < height {
                // Spine: forces the hierarchy to reach the stated height.
                (tree.names[i - 1].clone(), tree.depth[i - 1] + 1, 0)
            } else if rng_f64(rng) < 0.25 {
                // Fresh level-1 branch (disjointness axioms pair these).
                (top.to_string(), 1, tree.names.len())
            } else {
                // Prefer deeper parents so fillers are leaf-biased, but
                // never exceed the height cap.
                let mut pick = rng_index(rng, i);
                for _ in 0..4 {
                    if tree.depth[pick] < height {
                        break;
                    }
                    pick = rng_index(rng, i);
                }
                if tree.depth[pick] >= height {
                    (top.to_string(), 1, tree.names.len())
                } else {
                    (
                        tree.names[pick].clone(),
                        tree.depth[pick] + 1,
                        tree.branch[pick],
                    )
                }
            };
            let branch = if depth == 1 { tree.names.len() } else { branch };
            b.subclass(&name, &parent);
            // Ancestor chain from the node up to (excluding) the top.
            let mut chain = alloc::vec![name.clone()];
            if depth > 1 {
                let parent_idx = tree.names.iter().position(|n| *n == parent).unwrap();
                chain.extend(tree.chain[parent_idx].iter().cloned());
            }
            tree.names.push(name);
            tree.depth.push(depth);
            tree.branch.push(branch);
            tree.chain.push(chain);
        }
        tree
    }

    /// Leaf-biased filler pick (never the attribute top).
    fn pick(&self, rng: &mut ChaCha8Rng) -> usize {
        let a = rng_index(rng, self.names.len());
        let b = rng_index(rng, self.names.len());
        if self.depth[a] >= self.depth[b] {
            a
        } else {
            b
        }
    }

    /// Random ancestor-or-self of node `i` (biased toward staying close).
    fn widen(&self, rng: &mut ChaCha8Rng, i: usize, top: &str) -> String {
        let chain = &self.chain[i];
        // chain[0] is the node itself; allow the top as the last resort.
        let steps = chain.len() + 1;
        let mut pick = rng_index(rng, steps).min(rng_index(rng, steps));
        if rng_f64(rng) < 0.05 {
            pick = steps - 1;
        }
        if pick >= chain.len() {
            top.to_string()
        } else {
            chain[pick].clone()
        }
    }
}

const DURATION_POOL: [Interval; 6] = [
    Interval::new(0, 30),
    Interval::new(0, 365),
    Interval::new(30, 365),
    Interval::new(365, 1825),
    Interval::new(90, Interval::INF),
    Interval::new(0, Interval::INF),
];

struct Trees {
    data: Tree,
    purpose: Tree,
    processing: Tree,
    recipient: Tree,
    location: Tree,
    duty: Tree,
    basis: Tree,
}

/// Split the disjunct-count budget so the averages come out exactly:
/// everyone gets the floor, a shuffled subset gets one more.
fn disjunct_counts(rng: &mut ChaCha8Rng, count: usize, avg: f64) -> Vec<usize> {
    let total = round_usize(avg * count as f64);
    let base = total / count;
    let extra = total - base * count;
    let mut counts = alloc::vec![base.max(1); count];
    let mut idx: Vec<usize> = (0..count).collect();
    shuffle(rng, &mut idx);
    for &i in idx.iter().take(extra) {
        counts[i] += 1;
    }
    counts
}

fn gen_simple(rng: &mut ChaCha8Rng, trees: &Trees, business: bool) -> SimplePolicy {
    let storage = {
        let roll = rng_f64(rng);
        if roll < 0.10 {
            StorageExpr::Null
        } else if roll < 0.15 {
            StorageExpr::any()
        } else {
            let location = trees.location.names[trees.location.pick(rng)].clone();
            let duration = if rng_f64(rng) < 0.2 {
                Interval::UNBOUNDED
            } else {
                DURATION_POOL[rng_index(rng, DURATION_POOL.len())]
            };
            StorageExpr::Block {
                location: ClassExpr::Named(location),
                duration: DurationExpr::Days(duration),
            }
        }
    };
    let mut duties = Vec::new();
    let mut legal_basis = None;
    if business {
        for _ in 0..rng_index(rng, 3) {
            duties.push(ClassExpr::Named(
                trees.duty.names[trees.duty.pick(rng)].clone(),
            ));
        }
        if rng_f64(rng) < 0.6 {
            legal_basis = Some(ClassExpr::Named(
                trees.basis.names[trees.basis.pick(rng)].clone(),
            ));
        }
    }
    SimplePolicy {
        data: ClassExpr::Named(trees.data.names[trees.data.pick(rng)].clone()),
        purpose: ClassExpr::Named(trees.purpose.names[trees.purpose.pick(rng)].clone()),
        processing: ClassExpr::Named(trees.processing.names[trees.processing.pick(rng)].clone()),
        recipient: ClassExpr::Named(trees.recipient.names[trees.recipient.pick(rng)].clone()),
        storage,
        duties,
        legal_basis,
    }
}

fn widen_named(rng: &mut ChaCha8Rng, tree: &Tree, top: &str, expr: &ClassExpr) -> ClassExpr {
    match expr {
        ClassExpr::Named(id) => match tree.names.iter().position(|n| n == id) {
            Some(i) => ClassExpr::Named(tree.widen(rng, i, top)),
            None => expr.clone(),
        },
        other => other.clone(),
    }
}

fn widen_interval(rng: &mut ChaCha8Rng, iv: Interval) -> Interval {
    let lo = iv.lo.saturating_sub(rng.next_u64() % 30);
    let hi = if iv.hi == Interval::INF || rng_f64(rng) < 0.1 {
        Interval::INF
    } else {
        iv.hi.saturating_add(rng.next_u64() % 400)
    };
    Interval::new(lo, hi)
}

/// A consent disjunct guaranteed to cover `bp` (fillers replaced with
/// ancestors, intervals widened, duties and legal basis dropped).
fn widen_disjunct(rng: &mut ChaCha8Rng, trees: &Trees, bp: &SimplePolicy) -> SimplePolicy {
    let storage = match &bp.storage {
        StorageExpr::Null => StorageExpr::Null,
        StorageExpr::Block { location, duration } => StorageExpr::Block {
            location: widen_named(rng, &trees.location, classes::ANY_LOCATION, location),
            duration: match duration {
                DurationExpr::Days(iv) => DurationExpr::Days(widen_interval(rng, *iv)),
                DurationExpr::Class(c) => DurationExpr::Class(c.clone()),
            },
        },
    };
    SimplePolicy {
        data: widen_named(rng, &trees.data, classes::ANY_DATA, &bp.data),
        purpose: widen_named(rng, &trees.purpose, classes::ANY_PURPOSE, &bp.purpose),
        processing: widen_named(
            rng,
            &trees.processing,
            classes::ANY_PROCESSING,
            &bp.processing,
        ),
        recipient: widen_named(rng, &trees.recipient, classes::ANY_RECIPIENT, &bp.recipient),
        storage,
        duties: Vec::new(),
        legal_basis: None,
    }
}

/// A data class from a different level-1 branch than `avoid`: provably not
/// an ancestor of it.
fn foreign_data_class(rng: &mut ChaCha8Rng, tree: &Tree, avoid: &ClassExpr) -> String {
    let avoid_branch = match avoid {
        ClassExpr::Named(id) => tree
            .names
            .iter()
            .position(|n| n == id)
            .map(|i| tree.branch[i]),
        _ => None,
    };
    loop {
        let i = tree.pick(rng);
        if Some(tree.branch[i]) != avoid_branch {
            return tree.names[i].clone();
        }
    }
}

/// Generate the full deterministic workload for a profile.
pub fn generate_workload(profile: &WorkloadProfile) -> Result<Workload, ProfileError> {
    if profile.bp_count == 0 || profile.consent_count == 0 || profile.check_count == 0 {
        return Err(ProfileError::Inconsistent(
            "all counts must be positive".into(),
        ));
    }
    if profile.hierarchy_height == 0 && profile.inclusions > 0 {
        return Err(ProfileError::Inconsistent(
            "height 0 is impossible with a positive inclusion count".into(),
        ));
    }
    if profile.consent_count != profile.check_count {
        return Err(ProfileError::Inconsistent(
            "one consent is generated per check; the counts must match".into(),
        ));
    }
    if !(0.0..=1.0).contains(&profile.target_compliant) {
        return Err(ProfileError::Inconsistent(
            "target compliant fraction must be within [0, 1]".into(),
        ));
    }
    // The standard skeleton contributes two inclusions (spl:Null under the
    // storage and recipient tops).
    if profile.inclusions < 30 {
        return Err(ProfileError::Inconsistent(
            "at least 30 inclusions are needed for the seven attribute trees".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let mut b = VocabularyBuilder::new();
    b.standard_properties();

    let budget = profile.inclusions - 2;
    let share = |f: f64| (budget as f64 * f) as usize;
    let counts = [
        share(0.35), // data
        share(0.15), // purpose
        share(0.14), // processing
        share(0.10), // recipient
        share(0.10), // location
        share(0.08), // duty
    ];
    let used: usize = counts.iter().sum();
    let basis_count = budget - used;
    let h = profile.hierarchy_height;
    let trees = Trees {
        data: Tree::grow(&mut rng, &mut b, classes::ANY_DATA, "w:D", counts[0], h),
        purpose: Tree::grow(&mut rng, &mut b, classes::ANY_PURPOSE, "w:PU", counts[1], h),
        processing: Tree::grow(
            &mut rng,
            &mut b,
            classes::ANY_PROCESSING,
            "w:PR",
            counts[2],
            h,
        ),
        recipient: Tree::grow(
            &mut rng,
            &mut b,
            classes::ANY_RECIPIENT,
            "w:R",
            counts[3],
            h,
        ),
        location: Tree::grow(&mut rng, &mut b, classes::ANY_LOCATION, "w:L", counts[4], h),
        duty: Tree::grow(&mut rng, &mut b, classes::ANY_DUTY, "w:DU", counts[5], h),
        basis: Tree::grow(
            &mut rng,
            &mut b,
            classes::ANY_LEGAL_BASIS,
            "w:LB",
            basis_count,
            h,
        ),
    };

    // Disjointness among distinct level-1 branches of the data tree keeps
    // every generated policy satisfiable while exercising the axiom kind.
    let level1: Vec<&String> = trees
        .data
        .names
        .iter()
        .zip(&trees.data.depth)
        .filter(|(_, &d)| d == 1)
        .map(|(n, _)| n)
        .collect();
    let mut added = 0;
    'outer: for i in 0..level1.len() {
        for j in (i + 1)..level1.len() {
            if added == profile.disjoint_axioms {
                break 'outer;
            }
            b.disjoint(&[level1[i], level1[j]]);
            added += 1;
        }
    }
    if added < profile.disjoint_axioms {
        return Err(ProfileError::Inconsistent(alloc::format!(
            "data tree has too few top branches for {} disjointness axioms",
            profile.disjoint_axioms
        )));
    }

    let vocabulary = b
        .build()
        .expect("generated vocabulary is well-formed by construction");

    let bp_counts = disjunct_counts(&mut rng, profile.bp_count, profile.bp_avg_disjuncts);
    let business: Vec<FullPolicy> = bp_counts
        .iter()
        .map(|&n| FullPolicy {
            kind: PolicyKind::Business,
            disjuncts: (0..n).map(|_| gen_simple(&mut rng, &trees, true)).collect(),
        })
        .collect();

    // Ground-truth flags: exactly round(f * checks) compliant, shuffled.
    let compliant_count = round_usize(profile.target_compliant * profile.check_count as f64);
    let mut flags = alloc::vec![false; profile.check_count];
    for f in flags.iter_mut().take(compliant_count) {
        *f = true;
    }
    shuffle(&mut rng, &mut flags);

    let consent_counts = disjunct_counts(
        &mut rng,
        profile.consent_count,
        profile.consent_avg_disjuncts,
    );
    let mut consents = Vec::with_capacity(profile.consent_count);
    let mut pairs = Vec::with_capacity(profile.check_count);
    for i in 0..profile.check_count {
        let bp_idx = rng_index(&mut rng, profile.bp_count);
        let bp = &business[bp_idx];
        let target = consent_counts[i].max(bp.disjuncts.len());
        let mut disjuncts: Vec<SimplePolicy> = bp
            .disjuncts
            .iter()
            .map(|d| widen_disjunct(&mut rng, &trees, d))
            .collect();
        while disjuncts.len() < target {
            disjuncts.push(gen_simple(&mut rng, &trees, false));
        }
        if !flags[i] {
            // Make the first business disjunct provably uncovered: every
            // consent disjunct gets a data filler from a foreign branch.
            for d in &mut disjuncts {
                d.data = ClassExpr::Named(foreign_data_class(
                    &mut rng,
                    &trees.data,
                    &bp.disjuncts[0].data,
                ));
            }
        }
        consents.push(FullPolicy {
            kind: PolicyKind::Consent,
            disjuncts,
        });
        pairs.push(CheckPair {
            business: bp_idx,
            consent: i,
            expected_compliant: flags[i],
        });
    }

    Ok(Workload {
        profile: profile.clone(),
        vocabulary,
        business,
        consents,
        pairs,
    })
}
