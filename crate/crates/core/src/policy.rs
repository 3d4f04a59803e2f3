//! Usage and business policy ASTs, their concrete syntax, and the canonical
//! serializer.
//!
//! A policy document is a JSON-like object (or an array of objects, read as a
//! union of simple policies). Attribute keys use the snake_case spelling
//! (`has_data`, `has_purpose`, ...); internally slots are addressed by the
//! `spl:`/`sbpl:` property ids. Compound fillers are brace sets whose bare
//! members are class names and whose `key: value` members are existential
//! restrictions:
//!
//! ```text
//! {
//!   has_purpose: { FitnessRecommendation, contact: SMS },
//!   has_data: BiometricData,
//!   has_processing: Analytics,
//!   has_recipient: BeFit,
//!   has_storage: { has_location: EU, has_duration: [1year, 5year] }
//! }
//! ```
//!
//! Durations normalize to whole days at parse time (`1year` = 365, `1month` =
//! 30, `1week` = 7); `*` is the open upper bound. A storage block without
//! `has_duration` gets the full range `[0d, *]`, and one without
//! `has_location` gets `spl:AnyLocation`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::interval::Interval;
use crate::text::{ParseError, Token, TokenStream};

/// Canonical property ids used in normalized slots and rulebooks.
pub mod props {
    pub const HAS_DATA: &str = "spl:hasData";
    pub const HAS_PURPOSE: &str = "spl:hasPurpose";
    pub const HAS_PROCESSING: &str = "spl:hasProcessing";
    pub const HAS_RECIPIENT: &str = "spl:hasRecipient";
    pub const HAS_STORAGE: &str = "spl:hasStorage";
    pub const HAS_LOCATION: &str = "spl:hasLocation";
    pub const HAS_DURATION: &str = "spl:hasDuration";
    pub const DURATION_IN_DAYS: &str = "spl:durationInDays";
    pub const HAS_DUTY: &str = "sbpl:hasDuty";
    pub const HAS_LEGAL_BASIS: &str = "sbpl:hasLegalBasis";

    /// The five mandatory usage attributes, in canonical slot order.
    pub const USAGE_ATTRIBUTES: [&str; 5] = [
        HAS_DATA,
        HAS_PURPOSE,
        HAS_PROCESSING,
        HAS_RECIPIENT,
        HAS_STORAGE,
    ];
}

/// Class filler expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassExpr {
    Named(String),
    Intersection(Vec<ClassExpr>),
    Exists(String, Box<ClassExpr>),
    Interval(Interval),
    /// Complement of a named class; rulebook bodies only.
    Complement(String),
    /// Union of expressions; rulebook bodies only.
    Union(Vec<ClassExpr>),
}

impl ClassExpr {
    pub fn named(id: impl Into<String>) -> Self {
        ClassExpr::Named(id.into())
    }

    pub fn exists(prop: impl Into<String>, filler: ClassExpr) -> Self {
        ClassExpr::Exists(prop.into(), Box::new(filler))
    }
}

/// Duration constraint inside a storage block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DurationExpr {
    /// Numeric bound in days on `spl:durationInDays`.
    Days(Interval),
    /// Named duration category on `spl:hasDuration` (e.g. `svdu:Indefinitely`).
    Class(ClassExpr),
}

/// Storage slot: either the `spl:Null` marker ("not stored") or a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StorageExpr {
    Null,
    Block {
        location: ClassExpr,
        duration: DurationExpr,
    },
}

impl StorageExpr {
    /// Storage block admitting any location and any duration.
    pub fn any() -> Self {
        StorageExpr::Block {
            location: ClassExpr::named(crate::vocab::classes::ANY_LOCATION),
            duration: DurationExpr::Days(Interval::UNBOUNDED),
        }
    }
}

/// One conjunctive usage/business record (properties P1-P6 plus duties and a
/// legal basis for business policies).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePolicy {
    pub data: ClassExpr,
    pub purpose: ClassExpr,
    pub processing: ClassExpr,
    pub recipient: ClassExpr,
    pub storage: StorageExpr,
    pub duties: Vec<ClassExpr>,
    pub legal_basis: Option<ClassExpr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Consent,
    Business,
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Consent => write!(f, "consent"),
            PolicyKind::Business => write!(f, "business"),
        }
    }
}

/// A union of simple policies. Disjunct order is preserved through
/// parse/serialize round trips so report indices stay stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullPolicy {
    pub kind: PolicyKind,
    pub disjuncts: Vec<SimplePolicy>,
}

impl SimplePolicy {
    /// The simple policy as a class expression: the intersection of one
    /// existential restriction per attribute, which is the semantics the
    /// concrete syntax abbreviates.
    pub fn to_class_expr(&self) -> ClassExpr {
        let storage_filler = match &self.storage {
            StorageExpr::Null => ClassExpr::named(crate::vocab::classes::NULL),
            StorageExpr::Block { location, duration } => {
                let duration_member = match duration {
                    DurationExpr::Days(iv) => {
                        ClassExpr::exists(props::DURATION_IN_DAYS, ClassExpr::Interval(*iv))
                    }
                    DurationExpr::Class(expr) => {
                        ClassExpr::exists(props::HAS_DURATION, expr.clone())
                    }
                };
                ClassExpr::Intersection(alloc::vec![
                    ClassExpr::exists(props::HAS_LOCATION, location.clone()),
                    duration_member,
                ])
            }
        };
        let mut members = alloc::vec![
            ClassExpr::exists(props::HAS_DATA, self.data.clone()),
            ClassExpr::exists(props::HAS_PURPOSE, self.purpose.clone()),
            ClassExpr::exists(props::HAS_PROCESSING, self.processing.clone()),
            ClassExpr::exists(props::HAS_RECIPIENT, self.recipient.clone()),
            ClassExpr::exists(props::HAS_STORAGE, storage_filler),
        ];
        for duty in &self.duties {
            members.push(ClassExpr::exists(props::HAS_DUTY, duty.clone()));
        }
        if let Some(basis) = &self.legal_basis {
            members.push(ClassExpr::exists(props::HAS_LEGAL_BASIS, basis.clone()));
        }
        ClassExpr::Intersection(members)
    }
}

impl FullPolicy {
    /// The full policy as a class expression (union of its disjuncts).
    pub fn to_class_expr(&self) -> ClassExpr {
        if self.disjuncts.len() == 1 {
            self.disjuncts[0].to_class_expr()
        } else {
            ClassExpr::Union(self.disjuncts.iter().map(|d| d.to_class_expr()).collect())
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

const KEY_DATA: &str = "has_data";
const KEY_PURPOSE: &str = "has_purpose";
const KEY_PROCESSING: &str = "has_processing";
const KEY_RECIPIENT: &str = "has_recipient";
const KEY_STORAGE: &str = "has_storage";
const KEY_LOCATION: &str = "has_location";
const KEY_DURATION: &str = "has_duration";
const KEY_DUTY: &str = "has_duty";
const KEY_LEGAL_BASIS: &str = "has_legal_basis";

/// Map a concrete-syntax key to the internal property id. Keys outside the
/// snake_case table are taken verbatim (`contact: SMS`).
fn key_to_property(key: &str) -> &str {
    match key {
        KEY_DATA => props::HAS_DATA,
        KEY_PURPOSE => props::HAS_PURPOSE,
        KEY_PROCESSING => props::HAS_PROCESSING,
        KEY_RECIPIENT => props::HAS_RECIPIENT,
        KEY_STORAGE => props::HAS_STORAGE,
        KEY_LOCATION => props::HAS_LOCATION,
        KEY_DURATION => props::HAS_DURATION,
        KEY_DUTY => props::HAS_DUTY,
        KEY_LEGAL_BASIS => props::HAS_LEGAL_BASIS,
        other => other,
    }
}

fn unit_to_days(unit: &str) -> Option<u64> {
    match unit {
        "d" | "day" | "days" => Some(1),
        "w" | "week" | "weeks" => Some(7),
        "m" | "month" | "months" => Some(30),
        "y" | "year" | "years" => Some(365),
        _ => None,
    }
}

/// Parse a policy document of the given kind.
///
/// An interval with `lo > hi` is accepted here; the normalizer decides
/// emptiness. Duties or a legal basis under `kind = consent` are rejected.
pub fn parse_policy(text: &str, kind: PolicyKind) -> Result<FullPolicy, ParseError> {
    let mut ts = TokenStream::new(text)?;
    let mut disjuncts = Vec::new();
    if ts.eat(&Token::LBracket) {
        if ts.eat(&Token::RBracket) {
            return Err(ts.error("a policy union must contain at least one simple policy"));
        }
        loop {
            disjuncts.push(parse_simple(&mut ts, kind)?);
            if ts.eat(&Token::Comma) {
                continue;
            }
            ts.expect(&Token::RBracket)?;
            break;
        }
    } else {
        disjuncts.push(parse_simple(&mut ts, kind)?);
    }
    if !ts.at_end() {
        return Err(ts.error("trailing input after policy document"));
    }
    Ok(FullPolicy { kind, disjuncts })
}

fn parse_simple(ts: &mut TokenStream, kind: PolicyKind) -> Result<SimplePolicy, ParseError> {
    ts.expect(&Token::LBrace)?;
    let mut data = None;
    let mut purpose = None;
    let mut processing = None;
    let mut recipient = None;
    let mut storage = None;
    let mut duties: Vec<ClassExpr> = Vec::new();
    let mut legal_basis = None;

    if !ts.eat(&Token::RBrace) {
        loop {
            let key_pos = ts.pos();
            let key = ts.expect_name("an attribute key")?;
            ts.expect(&Token::Colon)?;
            let dup = |slot: &str| {
                ParseError::new(key_pos, alloc::format!("duplicate attribute '{slot}'"))
            };
            match key.as_str() {
                KEY_DATA => {
                    if data.replace(parse_class_expr(ts)?).is_some() {
                        return Err(dup(&key));
                    }
                }
                KEY_PURPOSE => {
                    if purpose.replace(parse_class_expr(ts)?).is_some() {
                        return Err(dup(&key));
                    }
                }
                KEY_PROCESSING => {
                    if processing.replace(parse_class_expr(ts)?).is_some() {
                        return Err(dup(&key));
                    }
                }
                KEY_RECIPIENT => {
                    if recipient.replace(parse_class_expr(ts)?).is_some() {
                        return Err(dup(&key));
                    }
                }
                KEY_STORAGE => {
                    if storage.replace(parse_storage(ts)?).is_some() {
                        return Err(dup(&key));
                    }
                }
                KEY_DUTY => {
                    if kind == PolicyKind::Consent {
                        return Err(ParseError::new(
                            key_pos,
                            "'has_duty' is not allowed in a consent policy",
                        ));
                    }
                    parse_duties(ts, &mut duties)?;
                }
                KEY_LEGAL_BASIS => {
                    if kind == PolicyKind::Consent {
                        return Err(ParseError::new(
                            key_pos,
                            "'has_legal_basis' is not allowed in a consent policy",
                        ));
                    }
                    if legal_basis.replace(parse_class_expr(ts)?).is_some() {
                        return Err(dup(&key));
                    }
                }
                other => {
                    return Err(ParseError::new(
                        key_pos,
                        alloc::format!("unknown attribute key '{other}'"),
                    ))
                }
            }
            if ts.eat(&Token::Comma) {
                continue;
            }
            ts.expect(&Token::RBrace)?;
            break;
        }
    }

    let missing = |slot: &str| {
        ParseError::new(
            crate::text::Pos { line: 1, col: 1 },
            alloc::format!("missing mandatory attribute '{slot}'"),
        )
    };
    Ok(SimplePolicy {
        data: data.ok_or_else(|| missing(KEY_DATA))?,
        purpose: purpose.ok_or_else(|| missing(KEY_PURPOSE))?,
        processing: processing.ok_or_else(|| missing(KEY_PROCESSING))?,
        recipient: recipient.ok_or_else(|| missing(KEY_RECIPIENT))?,
        storage: storage.ok_or_else(|| missing(KEY_STORAGE))?,
        duties,
        legal_basis,
    })
}

/// A class expression: a name, or a brace set of names and `prop: expr`
/// restrictions.
fn parse_class_expr(ts: &mut TokenStream) -> Result<ClassExpr, ParseError> {
    match ts.peek() {
        Some(Token::Word(_)) | Some(Token::Str(_)) => {
            let name = ts.expect_name("a class name")?;
            Ok(ClassExpr::Named(name))
        }
        Some(Token::LBrace) => {
            ts.advance();
            let mut members = Vec::new();
            if ts.eat(&Token::RBrace) {
                return Err(ts.error("empty intersection"));
            }
            loop {
                let name = ts.expect_name("a class name or property key")?;
                if ts.eat(&Token::Colon) {
                    let prop = key_to_property(&name).to_string();
                    let filler = if prop == props::HAS_DURATION {
                        match parse_duration(ts)? {
                            DurationExpr::Days(iv) => {
                                return finish_intersection_with_interval(ts, members, iv)
                            }
                            DurationExpr::Class(expr) => expr,
                        }
                    } else {
                        parse_class_expr(ts)?
                    };
                    members.push(ClassExpr::exists(prop, filler));
                } else {
                    members.push(ClassExpr::Named(name));
                }
                if ts.eat(&Token::Comma) {
                    continue;
                }
                ts.expect(&Token::RBrace)?;
                break;
            }
            if members.len() == 1 {
                Ok(members.pop().unwrap())
            } else {
                Ok(ClassExpr::Intersection(members))
            }
        }
        Some(Token::LBracket) => {
            Err(ts.error("an interval literal is only allowed as the value of 'has_duration'"))
        }
        Some(found) => {
            let found = found.clone();
            Err(ts.error(alloc::format!("expected a class expression, found {found}")))
        }
        None => Err(ts.error("expected a class expression, found end of input")),
    }
}

/// Continuation of a brace set after a numeric `has_duration` member: the
/// interval attaches as an `spl:durationInDays` restriction.
fn finish_intersection_with_interval(
    ts: &mut TokenStream,
    mut members: Vec<ClassExpr>,
    iv: Interval,
) -> Result<ClassExpr, ParseError> {
    members.push(ClassExpr::exists(
        props::DURATION_IN_DAYS,
        ClassExpr::Interval(iv),
    ));
    loop {
        if ts.eat(&Token::Comma) {
            let name = ts.expect_name("a class name or property key")?;
            if ts.eat(&Token::Colon) {
                let prop = key_to_property(&name).to_string();
                let filler = if prop == props::HAS_DURATION {
                    match parse_duration(ts)? {
                        DurationExpr::Days(iv2) => {
                            members.push(ClassExpr::exists(
                                props::DURATION_IN_DAYS,
                                ClassExpr::Interval(iv2),
                            ));
                            continue;
                        }
                        DurationExpr::Class(expr) => expr,
                    }
                } else {
                    parse_class_expr(ts)?
                };
                members.push(ClassExpr::exists(prop, filler));
            } else {
                members.push(ClassExpr::Named(name));
            }
            continue;
        }
        ts.expect(&Token::RBrace)?;
        break;
    }
    if members.len() == 1 {
        Ok(members.pop().unwrap())
    } else {
        Ok(ClassExpr::Intersection(members))
    }
}

fn parse_storage(ts: &mut TokenStream) -> Result<StorageExpr, ParseError> {
    match ts.peek() {
        Some(Token::Word(w)) if w == "Null" || w == "spl:Null" => {
            ts.advance();
            Ok(StorageExpr::Null)
        }
        Some(Token::Word(w)) if w == "AnyStorage" || w == "spl:AnyStorage" => {
            ts.advance();
            Ok(StorageExpr::any())
        }
        Some(Token::LBrace) => {
            ts.advance();
            let mut location = None;
            let mut duration = None;
            if !ts.eat(&Token::RBrace) {
                loop {
                    let key_pos = ts.pos();
                    let key = ts.expect_name("'has_location' or 'has_duration'")?;
                    ts.expect(&Token::Colon)?;
                    match key.as_str() {
                        KEY_LOCATION => {
                            if location.replace(parse_class_expr(ts)?).is_some() {
                                return Err(ParseError::new(
                                    key_pos,
                                    "duplicate attribute 'has_location'",
                                ));
                            }
                        }
                        KEY_DURATION => {
                            if duration.replace(parse_duration(ts)?).is_some() {
                                return Err(ParseError::new(
                                    key_pos,
                                    "duplicate attribute 'has_duration'",
                                ));
                            }
                        }
                        other => {
                            return Err(ParseError::new(
                                key_pos,
                                alloc::format!(
                                    "unknown storage attribute '{other}' (expected 'has_location' or 'has_duration')"
                                ),
                            ))
                        }
                    }
                    if ts.eat(&Token::Comma) {
                        continue;
                    }
                    ts.expect(&Token::RBrace)?;
                    break;
                }
            }
            Ok(StorageExpr::Block {
                location: location
                    .unwrap_or_else(|| ClassExpr::named(crate::vocab::classes::ANY_LOCATION)),
                duration: duration.unwrap_or(DurationExpr::Days(Interval::UNBOUNDED)),
            })
        }
        Some(found) => {
            let found = found.clone();
            Err(ts.error(alloc::format!(
                "storage must be 'Null', 'AnyStorage' or a '{{ ... }}' block, found {found}"
            )))
        }
        None => Err(ts.error("expected a storage expression, found end of input")),
    }
}

fn parse_duration(ts: &mut TokenStream) -> Result<DurationExpr, ParseError> {
    match ts.peek() {
        Some(Token::LBracket) => {
            ts.advance();
            let lo = parse_bound(ts, false)?;
            ts.expect(&Token::Comma)?;
            let hi = parse_bound(ts, true)?;
            ts.expect(&Token::RBracket)?;
            Ok(DurationExpr::Days(Interval::new(lo, hi)))
        }
        _ => Ok(DurationExpr::Class(parse_class_expr(ts)?)),
    }
}

fn parse_bound(ts: &mut TokenStream, upper: bool) -> Result<u64, ParseError> {
    let pos = ts.pos();
    match ts.advance() {
        Some(Token::Int(n)) => Ok(n),
        Some(Token::UnitInt(n, unit)) => match unit_to_days(&unit) {
            Some(per) => n
                .checked_mul(per)
                .ok_or_else(|| ParseError::new(pos, "duration bound overflows")),
            None => Err(ParseError::new(
                pos,
                alloc::format!("malformed interval: unknown duration unit '{unit}'"),
            )),
        },
        Some(Token::Star) if upper => Ok(Interval::INF),
        Some(Token::Star) => Err(ParseError::new(
            pos,
            "'*' is only allowed as the upper bound of an interval",
        )),
        Some(found) => Err(ParseError::new(
            pos,
            alloc::format!("malformed interval: expected an integer bound, found {found}"),
        )),
        None => Err(ParseError::new(pos, "unterminated interval")),
    }
}

fn parse_duties(ts: &mut TokenStream, duties: &mut Vec<ClassExpr>) -> Result<(), ParseError> {
    if ts.eat(&Token::LBracket) {
        if ts.eat(&Token::RBracket) {
            return Ok(());
        }
        loop {
            duties.push(parse_class_expr(ts)?);
            if ts.eat(&Token::Comma) {
                continue;
            }
            ts.expect(&Token::RBracket)?;
            break;
        }
    } else {
        duties.push(parse_class_expr(ts)?);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

fn word_safe(id: &str) -> bool {
    let chars: Vec<char> = id.chars().collect();
    match chars.first() {
        Some(&c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.iter().enumerate().skip(1).all(|(i, &c)| {
        if c == ':' {
            // A colon re-lexes as part of the word only before a word char.
            chars
                .get(i + 1)
                .map(|&n| n.is_ascii_alphanumeric() || matches!(n, '_' | '-' | '.'))
                .unwrap_or(false)
        } else {
            c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
        }
    })
}

fn write_name(out: &mut String, id: &str) {
    if word_safe(id) {
        out.push_str(id);
    } else {
        out.push('"');
        for c in id.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                '\t' => out.push_str("\\t"),
                other => out.push(other),
            }
        }
        out.push('"');
    }
}

/// Render the concrete-syntax key for a property id.
fn property_to_key(prop: &str) -> &str {
    match prop {
        props::HAS_DATA => KEY_DATA,
        props::HAS_PURPOSE => KEY_PURPOSE,
        props::HAS_PROCESSING => KEY_PROCESSING,
        props::HAS_RECIPIENT => KEY_RECIPIENT,
        props::HAS_STORAGE => KEY_STORAGE,
        props::HAS_LOCATION => KEY_LOCATION,
        props::HAS_DURATION => KEY_DURATION,
        props::HAS_DUTY => KEY_DUTY,
        props::HAS_LEGAL_BASIS => KEY_LEGAL_BASIS,
        other => other,
    }
}

fn write_class_expr(out: &mut String, expr: &ClassExpr) {
    match expr {
        ClassExpr::Named(id) => write_name(out, id),
        ClassExpr::Intersection(members) => {
            out.push_str("{ ");
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_member(out, m);
            }
            out.push_str(" }");
        }
        ClassExpr::Exists(..) => {
            out.push_str("{ ");
            write_member(out, expr);
            out.push_str(" }");
        }
        ClassExpr::Interval(iv) => {
            out.push_str(&alloc::format!("{iv}"));
        }
        // Rulebook-only constructs; they cannot occur in parsed policies but
        // are rendered for completeness (in the rulebook functional syntax).
        ClassExpr::Complement(id) => {
            out.push_str("complement(");
            write_name(out, id);
            out.push(')');
        }
        ClassExpr::Union(members) => {
            out.push_str("union(");
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_class_expr(out, m);
            }
            out.push(')');
        }
    }
}

fn write_member(out: &mut String, member: &ClassExpr) {
    match member {
        ClassExpr::Exists(prop, filler) => {
            if prop == props::DURATION_IN_DAYS {
                if let ClassExpr::Interval(iv) = filler.as_ref() {
                    out.push_str(KEY_DURATION);
                    out.push_str(": ");
                    out.push_str(&alloc::format!("{iv}"));
                    return;
                }
            }
            write_name(out, property_to_key(prop));
            out.push_str(": ");
            write_class_expr(out, filler);
        }
        other => write_class_expr(out, other),
    }
}

fn write_simple(out: &mut String, p: &SimplePolicy) {
    out.push_str("{ ");
    // Attributes render in lexicographic key order.
    out.push_str(KEY_DATA);
    out.push_str(": ");
    write_class_expr(out, &p.data);
    if !p.duties.is_empty() {
        out.push_str(", ");
        out.push_str(KEY_DUTY);
        out.push_str(": [");
        for (i, d) in p.duties.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_class_expr(out, d);
        }
        out.push(']');
    }
    if let Some(lb) = &p.legal_basis {
        out.push_str(", ");
        out.push_str(KEY_LEGAL_BASIS);
        out.push_str(": ");
        write_class_expr(out, lb);
    }
    out.push_str(", ");
    out.push_str(KEY_PROCESSING);
    out.push_str(": ");
    write_class_expr(out, &p.processing);
    out.push_str(", ");
    out.push_str(KEY_PURPOSE);
    out.push_str(": ");
    write_class_expr(out, &p.purpose);
    out.push_str(", ");
    out.push_str(KEY_RECIPIENT);
    out.push_str(": ");
    write_class_expr(out, &p.recipient);
    out.push_str(", ");
    out.push_str(KEY_STORAGE);
    out.push_str(": ");
    match &p.storage {
        StorageExpr::Null => out.push_str("Null"),
        StorageExpr::Block { location, duration } => {
            out.push_str("{ ");
            out.push_str(KEY_DURATION);
            out.push_str(": ");
            match duration {
                DurationExpr::Days(iv) => out.push_str(&alloc::format!("{iv}")),
                DurationExpr::Class(expr) => write_class_expr(out, expr),
            }
            out.push_str(", ");
            out.push_str(KEY_LOCATION);
            out.push_str(": ");
            write_class_expr(out, location);
            out.push_str(" }");
        }
    }
    out.push_str(" }");
}

/// Canonical rendering: lexicographic attribute order, durations in days,
/// one line per simple policy. `parse_policy(serialize_policy(p), p.kind)`
/// returns `p` for every valid policy.
pub fn serialize_policy(p: &FullPolicy) -> String {
    let mut out = String::new();
    if p.disjuncts.len() == 1 {
        write_simple(&mut out, &p.disjuncts[0]);
        out.push('\n');
    } else {
        out.push_str("[\n");
        for (i, d) in p.disjuncts.iter().enumerate() {
            out.push_str("  ");
            write_simple(&mut out, d);
            if i + 1 < p.disjuncts.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
    }
    out
}
