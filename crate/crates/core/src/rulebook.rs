//! Regulatory rulebooks: named defined classes whose bodies are boolean
//! combinations of slot requirements, plus the built-in partial GDPR
//! encoding and the regulatory compliance check (task T1).
//!
//! Rulebooks are data so that legal experts can extend them without touching
//! the reasoner. File format (`#` comments allowed):
//!
//! ```text
//! root GDPR_Compliance
//! def Art6_1_LegalBasis:
//!   requires(sbpl:hasLegalBasis, union(Art6_1_a_Consent, Art6_1_b_Contract))
//! def Chap9_Derogations: unmodeled
//! ```
//!
//! Node kinds: `union(...)`, `intersection(...)`, `requires(prop, expr)`,
//! `ref(Name)`, `complement-test(prop, Class)` and `unmodeled`. Filler
//! expressions inside `requires` additionally allow `complement(Class)`,
//! `exists(prop, expr)` and `interval(lo, hi)`. An `unmodeled` body records
//! a deliberately unencoded regulation fragment and always evaluates false.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{subsumes_policy_expr, ComplianceReport, EngineError, Failure, Verdict};
use crate::interval::Interval;
use crate::normalize::{normalize_full, NormalSimplePolicy};
use crate::policy::{ClassExpr, FullPolicy, PolicyKind};
use crate::text::{ParseError, Token, TokenStream};
use crate::vocab::VocabularyOntology;

/// Body of a defined class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleNode {
    Union(Vec<RuleNode>),
    Intersection(Vec<RuleNode>),
    /// The policy's `prop` slot must be subsumed by the expression.
    Requires(String, ClassExpr),
    /// Reference to another defined class.
    Ref(String),
    /// Shorthand for `requires(prop, complement(Class))`.
    ComplementTest(String, String),
    /// A regulation fragment this rulebook deliberately does not encode;
    /// evaluates false so printed fragments keep their outcomes.
    Unmodeled,
}

/// A validated rulebook: definition order is preserved for stable
/// serialization; the `Ref` graph is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegulatoryRulebook {
    pub definitions: Vec<(String, RuleNode)>,
    pub root: String,
}

pub const DEFAULT_ROOT: &str = "GDPR_Compliance";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RulebookError {
    Parse(ParseError),
    DuplicateDefinition(String),
    DanglingRef(String),
    CyclicRef(String),
    UndefinedRoot(String),
}

impl fmt::Display for RulebookError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RulebookError::Parse(e) => write!(f, "{e}"),
            RulebookError::DuplicateDefinition(name) => {
                write!(f, "definition '{name}' appears twice")
            }
            RulebookError::DanglingRef(name) => write!(f, "ref to undefined '{name}'"),
            RulebookError::CyclicRef(name) => {
                write!(f, "cyclic ref involving '{name}'")
            }
            RulebookError::UndefinedRoot(name) => write!(f, "root '{name}' is not defined"),
        }
    }
}

impl From<ParseError> for RulebookError {
    fn from(e: ParseError) -> Self {
        RulebookError::Parse(e)
    }
}

impl RegulatoryRulebook {
    pub fn definition(&self, name: &str) -> Option<&RuleNode> {
        self.definitions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, body)| body)
    }

    /// Check that every `Ref` target is defined, the graph is acyclic, and
    /// the root exists.
    pub fn validate(&self) -> Result<(), RulebookError> {
        let mut seen = alloc::collections::BTreeSet::new();
        for (name, _) in &self.definitions {
            if !seen.insert(name.clone()) {
                return Err(RulebookError::DuplicateDefinition(name.clone()));
            }
        }
        if self.definition(&self.root).is_none() {
            return Err(RulebookError::UndefinedRoot(self.root.clone()));
        }
        // Depth-first search with an explicit in-progress set.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            InProgress,
            Done,
        }
        let mut marks: alloc::collections::BTreeMap<String, Mark> = Default::default();
        fn visit(
            rb: &RegulatoryRulebook,
            name: &str,
            marks: &mut alloc::collections::BTreeMap<String, Mark>,
        ) -> Result<(), RulebookError> {
            match marks.get(name) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::InProgress) => return Err(RulebookError::CyclicRef(name.to_string())),
                None => {}
            }
            let body = rb
                .definition(name)
                .ok_or_else(|| RulebookError::DanglingRef(name.to_string()))?;
            marks.insert(name.to_string(), Mark::InProgress);
            visit_node(rb, body, marks)?;
            marks.insert(name.to_string(), Mark::Done);
            Ok(())
        }
        fn visit_node(
            rb: &RegulatoryRulebook,
            node: &RuleNode,
            marks: &mut alloc::collections::BTreeMap<String, Mark>,
        ) -> Result<(), RulebookError> {
            match node {
                RuleNode::Union(children) | RuleNode::Intersection(children) => {
                    for c in children {
                        visit_node(rb, c, marks)?;
                    }
                    Ok(())
                }
                RuleNode::Ref(name) => visit(rb, name, marks),
                _ => Ok(()),
            }
        }
        for (name, _) in &self.definitions {
            visit(self, name, &mut marks)?;
        }
        Ok(())
    }

    /// Inline the whole rulebook into a single class expression (refs
    /// substituted, `requires` turned into existential restrictions,
    /// `unmodeled` into the empty union). Used as an internal consistency
    /// check against direct evaluation.
    pub fn inline_expr(&self) -> ClassExpr {
        self.inline_node(self.definition(&self.root).unwrap_or(&RuleNode::Unmodeled))
    }

    fn inline_node(&self, node: &RuleNode) -> ClassExpr {
        match node {
            RuleNode::Union(children) => {
                ClassExpr::Union(children.iter().map(|c| self.inline_node(c)).collect())
            }
            RuleNode::Intersection(children) => {
                ClassExpr::Intersection(children.iter().map(|c| self.inline_node(c)).collect())
            }
            RuleNode::Requires(prop, expr) => {
                ClassExpr::Exists(prop.clone(), Box::new(expr.clone()))
            }
            RuleNode::ComplementTest(prop, class) => {
                ClassExpr::Exists(prop.clone(), Box::new(ClassExpr::Complement(class.clone())))
            }
            RuleNode::Ref(name) => {
                self.inline_node(self.definition(name).unwrap_or(&RuleNode::Unmodeled))
            }
            RuleNode::Unmodeled => ClassExpr::Union(Vec::new()),
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in partial GDPR encoding
// ---------------------------------------------------------------------------

/// The partial GDPR axiomatization: either the requirements of Chapters 2-5
/// are all satisfied, or a Chapter 9 derogation applies. Chapter 2 needs one
/// of the article conditions for non-sensitive, sensitive, or criminal data;
/// article bodies that the encoding does not cover are explicit `unmodeled`
/// stubs rather than silently invented law.
pub fn builtin_gdpr_rulebook() -> RegulatoryRulebook {
    use RuleNode::*;
    let basis =
        |names: &[&str]| ClassExpr::Union(names.iter().map(|n| ClassExpr::named(*n)).collect());
    let definitions = alloc::vec![
        (
            "GDPR_Compliance".to_string(),
            Union(alloc::vec![
                Intersection(alloc::vec![
                    Ref("Chap2_LawfulProcessing".into()),
                    Ref("Chap3_RightsOfDataSubjects".into()),
                    Ref("Chap4_ControllerAndProcessorObligations".into()),
                    Ref("Chap5_DataTransfer".into()),
                ]),
                Ref("Chap9_Derogations".into()),
            ]),
        ),
        (
            "Chap2_LawfulProcessing".to_string(),
            Union(alloc::vec![
                Ref("Art6_LawfulProcessing".into()),
                Ref("Art9_SensitiveData".into()),
                Ref("Art10_CriminalData".into()),
            ]),
        ),
        (
            "Art6_LawfulProcessing".to_string(),
            Intersection(alloc::vec![
                ComplementTest("spl:hasData".into(), "SensitiveData_as_per_Art9".into()),
                ComplementTest(
                    "spl:hasData".into(),
                    "CriminalConvictionData_as_per_Art10".into()
                ),
                Union(alloc::vec![
                    Ref("Art6_1_LegalBasis".into()),
                    Ref("Art6_4_CompatiblePurpose".into()),
                ]),
            ]),
        ),
        (
            "Art6_1_LegalBasis".to_string(),
            Requires(
                "sbpl:hasLegalBasis".into(),
                basis(&[
                    "Art6_1_a_Consent",
                    "Art6_1_b_Contract",
                    "Art6_1_c_LegalObligation",
                    "Art6_1_d_VitalInterest",
                    "Art6_1_e_PublicInterest",
                    "Art6_1_f_LegitimateInterest",
                ]),
            ),
        ),
        ("Art6_4_CompatiblePurpose".to_string(), Unmodeled),
        (
            "Art9_SensitiveData".to_string(),
            Union(alloc::vec![
                ComplementTest("spl:hasData".into(), "SensitiveData_as_per_Art9".into()),
                Requires(
                    "sbpl:hasLegalBasis".into(),
                    basis(&[
                        "Art9_2_a_Consent",
                        "Art9_2_b_EmploymentAndSocialSecurity",
                        "Art9_2_c_VitalInterest",
                        "Art9_2_d_LegitimateActivitiesOfAssociations",
                        "Art9_2_e_PublicData",
                        "Art9_2_f_Juducial",
                        "Art9_2_g_PublicInteres",
                        "Art9_2_h_PreventiveOrOccupationalMedicine",
                        "Art9_2_i_PublicHealth",
                        "Art9_2_j_ArchivingResearchStatistics",
                    ]),
                ),
            ]),
        ),
        ("Art10_CriminalData".to_string(), Unmodeled),
        (
            "Chap3_RightsOfDataSubjects".to_string(),
            Requires(
                "sbpl:hasDuty".into(),
                ClassExpr::named("Art12-22_SubjectRights"),
            ),
        ),
        (
            "Chap4_ControllerAndProcessorObligations".to_string(),
            Requires(
                "sbpl:hasDuty".into(),
                ClassExpr::named("Art32-37_Obligations"),
            ),
        ),
        (
            "Chap5_DataTransfer".to_string(),
            Union(alloc::vec![
                Ref("NoThirdCountryTransfer".into()),
                Ref("Art44-49_TransferSafeguards".into()),
            ]),
        ),
        (
            "NoThirdCountryTransfer".to_string(),
            Union(alloc::vec![
                Requires("spl:hasStorage".into(), ClassExpr::named("spl:Null")),
                Requires(
                    "spl:hasStorage".into(),
                    ClassExpr::exists("spl:hasLocation", ClassExpr::named("EEA")),
                ),
            ]),
        ),
        ("Art44-49_TransferSafeguards".to_string(), Unmodeled),
        ("Chap9_Derogations".to_string(), Unmodeled),
    ];
    RegulatoryRulebook {
        definitions,
        root: DEFAULT_ROOT.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// A failing evaluation trace. When several branches of a union fail, the
/// most substantive one is reported: `requires` leaves outrank
/// complement-tests, which outrank `unmodeled` stubs; deeper paths win ties.
#[derive(Debug, Clone)]
struct EvalFail {
    path: Vec<String>,
    detail: String,
    rank: u8,
    depth: usize,
}

impl EvalFail {
    fn beats(&self, other: &EvalFail) -> bool {
        (self.rank, self.depth) > (other.rank, other.depth)
    }
}

fn render_expr(expr: &ClassExpr) -> String {
    match expr {
        ClassExpr::Named(id) => id.clone(),
        ClassExpr::Intersection(members) => {
            let inner: Vec<String> = members.iter().map(render_expr).collect();
            alloc::format!("intersection({})", inner.join(", "))
        }
        ClassExpr::Union(members) => {
            let inner: Vec<String> = members.iter().map(render_expr).collect();
            alloc::format!("union({})", inner.join(", "))
        }
        ClassExpr::Complement(id) => alloc::format!("complement({id})"),
        ClassExpr::Exists(prop, filler) => {
            alloc::format!("exists({prop}, {})", render_expr(filler))
        }
        ClassExpr::Interval(iv) => {
            if iv.hi == Interval::INF {
                alloc::format!("interval({}, *)", iv.lo)
            } else {
                alloc::format!("interval({}, {})", iv.lo, iv.hi)
            }
        }
    }
}

fn eval_node(
    voc: &VocabularyOntology,
    rb: &RegulatoryRulebook,
    node: &RuleNode,
    policy: &NormalSimplePolicy,
) -> Result<Result<(), EvalFail>, EngineError> {
    match node {
        RuleNode::Union(children) => {
            let mut best: Option<EvalFail> = None;
            for c in children {
                match eval_node(voc, rb, c, policy)? {
                    Ok(()) => return Ok(Ok(())),
                    Err(fail) => {
                        if best.as_ref().map(|b| fail.beats(b)).unwrap_or(true) {
                            best = Some(fail);
                        }
                    }
                }
            }
            Ok(Err(best.unwrap_or(EvalFail {
                path: Vec::new(),
                detail: "empty union".to_string(),
                rank: 0,
                depth: 0,
            })))
        }
        RuleNode::Intersection(children) => {
            for c in children {
                if let Err(fail) = eval_node(voc, rb, c, policy)? {
                    return Ok(Err(fail));
                }
            }
            Ok(Ok(()))
        }
        RuleNode::Ref(name) => {
            let body = rb
                .definition(name)
                .ok_or_else(|| EngineError::UndeclaredClass(name.clone()))?;
            match eval_node(voc, rb, body, policy)? {
                Ok(()) => Ok(Ok(())),
                Err(mut fail) => {
                    fail.path.insert(0, name.clone());
                    fail.depth += 1;
                    Ok(Err(fail))
                }
            }
        }
        RuleNode::Requires(prop, expr) => {
            let holds = subsumes_policy_expr(
                voc,
                policy,
                &ClassExpr::Exists(prop.clone(), Box::new(expr.clone())),
            )?;
            if holds {
                Ok(Ok(()))
            } else {
                Ok(Err(EvalFail {
                    path: Vec::new(),
                    detail: alloc::format!(
                        "the '{prop}' filler is not among the required {}",
                        render_expr(expr)
                    ),
                    rank: 2,
                    depth: 0,
                }))
            }
        }
        RuleNode::ComplementTest(prop, class) => {
            let expr =
                ClassExpr::Exists(prop.clone(), Box::new(ClassExpr::Complement(class.clone())));
            if subsumes_policy_expr(voc, policy, &expr)? {
                Ok(Ok(()))
            } else {
                Ok(Err(EvalFail {
                    path: Vec::new(),
                    detail: alloc::format!("the '{prop}' filler is not provably outside '{class}'"),
                    rank: 1,
                    depth: 0,
                }))
            }
        }
        RuleNode::Unmodeled => Ok(Err(EvalFail {
            path: Vec::new(),
            detail: "unmodeled regulation fragment".to_string(),
            rank: 0,
            depth: 0,
        })),
    }
}

/// Evaluate one normalized disjunct against the rulebook root. Returns the
/// index of the covering top-level union branch, or the failure trace.
fn eval_root(
    voc: &VocabularyOntology,
    rb: &RegulatoryRulebook,
    policy: &NormalSimplePolicy,
) -> Result<Result<usize, EvalFail>, EngineError> {
    let body = rb
        .definition(&rb.root)
        .ok_or_else(|| EngineError::UndeclaredClass(rb.root.clone()))?;
    if let RuleNode::Union(children) = body {
        let mut best: Option<EvalFail> = None;
        for (i, c) in children.iter().enumerate() {
            match eval_node(voc, rb, c, policy)? {
                Ok(()) => return Ok(Ok(i)),
                Err(fail) => {
                    if best.as_ref().map(|b| fail.beats(b)).unwrap_or(true) {
                        best = Some(fail);
                    }
                }
            }
        }
        Ok(Err(best.expect("non-empty union")))
    } else {
        match eval_node(voc, rb, body, policy)? {
            Ok(()) => Ok(Ok(0)),
            Err(fail) => Ok(Err(fail)),
        }
    }
}

/// Check a business policy against a regulatory rulebook (task T1).
pub fn check_regulatory(
    voc: &VocabularyOntology,
    business: &FullPolicy,
    rb: &RegulatoryRulebook,
) -> Result<ComplianceReport, EngineError> {
    if business.kind != PolicyKind::Business {
        return Err(EngineError::Normalize(
            crate::normalize::NormalizeError::UnsupportedConstruct(
                "a consent policy in a regulatory check",
            ),
        ));
    }
    let normalized = normalize_full(voc, business)?;
    check_regulatory_normalized(voc, &normalized, rb)
}

/// `check_regulatory` over pre-normalized disjuncts.
pub fn check_regulatory_normalized(
    voc: &VocabularyOntology,
    business: &[NormalSimplePolicy],
    rb: &RegulatoryRulebook,
) -> Result<ComplianceReport, EngineError> {
    let mut cover = alloc::collections::BTreeMap::new();
    let mut vacuous = Vec::new();
    let mut failure = None;
    for (bi, bp) in business.iter().enumerate() {
        if !bp.satisfiable {
            vacuous.push(bi);
            continue;
        }
        match eval_root(voc, rb, bp)? {
            Ok(branch) => {
                cover.insert(bi, branch);
            }
            Err(fail) => {
                if failure.is_none() {
                    failure = Some(Failure::Rulebook {
                        business_disjunct: bi,
                        path: fail.path,
                        detail: fail.detail,
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

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------

/// Parse and validate a rulebook document.
pub fn load_rulebook(source: &str) -> Result<RegulatoryRulebook, RulebookError> {
    let mut ts = TokenStream::new(source)?;
    let mut definitions: Vec<(String, RuleNode)> = Vec::new();
    let mut root: Option<String> = None;
    while !ts.at_end() {
        let directive = ts.expect_name("'def' or 'root'")?;
        match directive.as_str() {
            "root" => {
                let name = ts.expect_name("a definition name")?;
                root = Some(name);
            }
            "def" => {
                let name = ts.expect_name("a definition name")?;
                ts.expect(&Token::Colon)?;
                let node = parse_node(&mut ts)?;
                if definitions.iter().any(|(n, _)| *n == name) {
                    return Err(RulebookError::DuplicateDefinition(name));
                }
                definitions.push((name, node));
            }
            other => {
                return Err(RulebookError::Parse(ts.error(alloc::format!(
                    "expected 'def' or 'root', found '{other}'"
                ))))
            }
        }
    }
    let rb = RegulatoryRulebook {
        definitions,
        root: root.unwrap_or_else(|| DEFAULT_ROOT.to_string()),
    };
    rb.validate()?;
    Ok(rb)
}

fn parse_node(ts: &mut TokenStream) -> Result<RuleNode, RulebookError> {
    let kind = ts.expect_name("a node kind")?;
    match kind.as_str() {
        "union" => Ok(RuleNode::Union(parse_node_list(ts)?)),
        "intersection" => Ok(RuleNode::Intersection(parse_node_list(ts)?)),
        "ref" => {
            ts.expect(&Token::LParen)?;
            let name = ts.expect_name("a definition name")?;
            ts.expect(&Token::RParen)?;
            Ok(RuleNode::Ref(name))
        }
        "requires" => {
            ts.expect(&Token::LParen)?;
            let prop = ts.expect_name("a property id")?;
            ts.expect(&Token::Comma)?;
            let expr = parse_expr(ts)?;
            ts.expect(&Token::RParen)?;
            Ok(RuleNode::Requires(prop, expr))
        }
        "complement-test" => {
            ts.expect(&Token::LParen)?;
            let prop = ts.expect_name("a property id")?;
            ts.expect(&Token::Comma)?;
            let class = ts.expect_name("a class id")?;
            ts.expect(&Token::RParen)?;
            Ok(RuleNode::ComplementTest(prop, class))
        }
        "unmodeled" => Ok(RuleNode::Unmodeled),
        other => Err(RulebookError::Parse(
            ts.error(alloc::format!("unknown node kind '{other}'")),
        )),
    }
}

fn parse_node_list(ts: &mut TokenStream) -> Result<Vec<RuleNode>, RulebookError> {
    ts.expect(&Token::LParen)?;
    let mut nodes = Vec::new();
    if ts.eat(&Token::RParen) {
        return Ok(nodes);
    }
    loop {
        nodes.push(parse_node(ts)?);
        if ts.eat(&Token::Comma) {
            continue;
        }
        ts.expect(&Token::RParen)?;
        break;
    }
    Ok(nodes)
}

fn parse_expr(ts: &mut TokenStream) -> Result<ClassExpr, RulebookError> {
    let head = ts.expect_name("a class expression")?;
    let followed_by_paren = ts.peek() == Some(&Token::LParen);
    match (head.as_str(), followed_by_paren) {
        ("union", true) => {
            let members = parse_expr_list(ts)?;
            Ok(ClassExpr::Union(members))
        }
        ("intersection", true) => {
            let members = parse_expr_list(ts)?;
            Ok(ClassExpr::Intersection(members))
        }
        ("complement", true) => {
            ts.expect(&Token::LParen)?;
            let name = ts.expect_name("a class id")?;
            ts.expect(&Token::RParen)?;
            Ok(ClassExpr::Complement(name))
        }
        ("exists", true) => {
            ts.expect(&Token::LParen)?;
            let prop = ts.expect_name("a property id")?;
            ts.expect(&Token::Comma)?;
            let filler = parse_expr(ts)?;
            ts.expect(&Token::RParen)?;
            Ok(ClassExpr::Exists(prop, Box::new(filler)))
        }
        ("interval", true) => {
            ts.expect(&Token::LParen)?;
            let lo = parse_interval_bound(ts, false)?;
            ts.expect(&Token::Comma)?;
            let hi = parse_interval_bound(ts, true)?;
            ts.expect(&Token::RParen)?;
            Ok(ClassExpr::Interval(Interval::new(lo, hi)))
        }
        _ => Ok(ClassExpr::Named(head)),
    }
}

fn parse_interval_bound(ts: &mut TokenStream, upper: bool) -> Result<u64, RulebookError> {
    match ts.advance() {
        Some(Token::Int(n)) => Ok(n),
        Some(Token::Star) if upper => Ok(Interval::INF),
        _ => Err(RulebookError::Parse(
            ts.error("expected an integer interval bound"),
        )),
    }
}

fn parse_expr_list(ts: &mut TokenStream) -> Result<Vec<ClassExpr>, RulebookError> {
    ts.expect(&Token::LParen)?;
    let mut members = Vec::new();
    if ts.eat(&Token::RParen) {
        return Ok(members);
    }
    loop {
        members.push(parse_expr(ts)?);
        if ts.eat(&Token::Comma) {
            continue;
        }
        ts.expect(&Token::RParen)?;
        break;
    }
    Ok(members)
}

fn write_node(out: &mut String, node: &RuleNode, indent: usize) {
    let pad = "  ".repeat(indent);
    match node {
        RuleNode::Union(children) | RuleNode::Intersection(children) => {
            let kind = if matches!(node, RuleNode::Union(_)) {
                "union"
            } else {
                "intersection"
            };
            out.push_str(kind);
            out.push_str("(\n");
            for (i, c) in children.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                write_node(out, c, indent + 1);
                if i + 1 < children.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(')');
        }
        RuleNode::Requires(prop, expr) => {
            out.push_str(&alloc::format!("requires({prop}, {})", render_expr(expr)));
        }
        RuleNode::Ref(name) => out.push_str(&alloc::format!("ref({name})")),
        RuleNode::ComplementTest(prop, class) => {
            out.push_str(&alloc::format!("complement-test({prop}, {class})"));
        }
        RuleNode::Unmodeled => out.push_str("unmodeled"),
    }
}

/// Stable text rendering; `load_rulebook(serialize_rulebook(rb))` equals `rb`.
pub fn serialize_rulebook(rb: &RegulatoryRulebook) -> String {
    let mut out = String::new();
    out.push_str(&alloc::format!("root {}\n", rb.root));
    for (name, node) in &rb.definitions {
        out.push('\n');
        out.push_str(&alloc::format!("def {name}:\n  "));
        write_node(&mut out, node, 1);
        out.push('\n');
    }
    out
}
