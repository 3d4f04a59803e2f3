//! Core reasoner for the `plcheck` policy toolkit.
//!
//! The crate is organized around a two-phase compliance pipeline:
//!
//! 1. **Normalization** ([`normalize`]): simple policies are closed under the
//!    vocabulary axioms ([`vocab`]), conjuncts on functional properties are
//!    merged, duration intervals are intersected, and unsatisfiable policies
//!    are flagged.
//! 2. **Structural subsumption** ([`engine`]): normalized business policies
//!    are compared slot by slot against consent policies or against a
//!    regulatory rulebook ([`rulebook`]).
//!
//! Around that sit the policy syntax ([`policy`], [`text`]), the append-only
//! transparency ledger ([`ledger`]) and a deterministic workload generator
//! ([`workload`]) used for benchmarking.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `plcheck` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod engine;
pub mod interval;
pub mod ledger;
pub mod normalize;
pub mod policy;
pub mod rulebook;
pub mod text;
pub mod vocab;
pub mod workload;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use engine::{check_compliance, ComplianceReport, Verdict};
pub use interval::Interval;
pub use normalize::{normalize_full, normalize_simple, NormalFiller, NormalSimplePolicy};
pub use policy::{parse_policy, serialize_policy, ClassExpr, FullPolicy, PolicyKind, SimplePolicy};
pub use rulebook::{builtin_gdpr_rulebook, check_regulatory, RegulatoryRulebook};
pub use vocab::{load_vocabulary, VocabularyOntology};
