//! Identities, quasi-identities and semantic consequence over finite
//! implication tables.
//!
//! Terms are evaluated with set semantics: a variable denotes a singleton,
//! `0` denotes `{0}`, and `s -> t` denotes the union of `a -> b` over all
//! `a` in the value of `s` and `b` in the value of `t`. On single-valued
//! tables every value is a singleton. `s == t` holds when the two value sets
//! are equal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::implication::{ElementSet, ImplicationTable};
use crate::term::{parse_term, t, ParseError, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown suite `{0}` (expected th10, sec6, th4, def31 or def52)")]
    UnknownSuite(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("malformed identity `{line}`: {reason}")]
    MalformedIdentity { line: String, reason: String },
    #[error("empty model class")]
    EmptyModelClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        self.rhs.collect_vars(&mut v);
        v
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl QuasiIdentity {
    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.conclusion.vars();
        for p in &self.premises {
            v.extend(p.vars());
        }
        v
    }
}

impl From<Identity> for QuasiIdentity {
    fn from(conclusion: Identity) -> Self {
        QuasiIdentity { premises: Vec::new(), conclusion }
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
            write!(f, "{} => ", ps.join(", "))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

fn parse_identity_at(text: &str, offset: usize, line: &str) -> Result<Identity, LogicError> {
    let (sep, len) = match (text.find("=="), text.find('≈')) {
        (Some(i), _) => (i, 2),
        (None, Some(i)) => (i, '≈'.len_utf8()),
        (None, None) => {
            return Err(LogicError::MalformedIdentity { line: line.into(), reason: "missing `==`".into() })
        }
    };
    let shift = |e: ParseError, by: usize| ParseError { position: e.position + by, ..e };
    let lhs = parse_term(&text[..sep]).map_err(|e| shift(e, offset))?;
    let rhs = parse_term(&text[sep + len..]).map_err(|e| shift(e, offset + sep + len))?;
    Ok(Identity { lhs, rhs })
}

impl FromStr for Identity {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity_at(s, 0, s)
    }
}

/// `p1 == q1, ..., pk == qk => t1 == t2`, or a plain identity.
impl FromStr for QuasiIdentity {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(arrow) = s.find("=>") else {
            return Ok(parse_identity_at(s, 0, s)?.into());
        };
        let mut premises = Vec::new();
        let mut offset = 0;
        for part in s[..arrow].split(',') {
            premises.push(parse_identity_at(part, offset, s)?);
            offset += part.len() + 1;
        }
        let conclusion = parse_identity_at(&s[arrow + 2..], arrow + 2, s)?;
        Ok(QuasiIdentity { premises, conclusion })
    }
}

/// Parse an identity file: one (quasi-)identity per line; blank lines and
/// lines starting with `#` are skipped.
pub fn parse_identity_file(text: &str) -> Result<Vec<QuasiIdentity>, LogicError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(QuasiIdentity::from_str)
        .collect()
}

/// Evaluate `term` under a named assignment.
pub fn evaluate_term(
    term: &Term,
    table: &ImplicationTable,
    asg: &HashMap<String, usize>,
) -> Result<ElementSet, LogicError> {
    match term {
        Term::Zero => Ok(ElementSet::from([table.zero])),
        Term::Var(v) => asg
            .get(v)
            .map(|&x| ElementSet::from([x]))
            .ok_or_else(|| LogicError::UnboundVariable(v.clone())),
        Term::Imp(a, b) => {
            let a = evaluate_term(a, table, asg)?;
            let b = evaluate_term(b, table, asg)?;
            Ok(table.imp_sets(&a, &b))
        }
    }
}

/// A term with variables resolved to slots of an assignment vector.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Slot(usize),
    Zero,
    Imp(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(term: &Term, slots: &BTreeMap<String, usize>) -> Compiled {
        match term {
            Term::Var(v) => Compiled::Slot(slots[v]),
            Term::Zero => Compiled::Zero,
            Term::Imp(a, b) => Compiled::Imp(Box::new(Compiled::new(a, slots)), Box::new(Compiled::new(b, slots))),
        }
    }

    pub(crate) fn eval(&self, table: &ImplicationTable, asg: &[usize]) -> ElementSet {
        match self {
            Compiled::Slot(i) => ElementSet::from([asg[*i]]),
            Compiled::Zero => ElementSet::from([table.zero]),
            Compiled::Imp(a, b) => {
                let a = a.eval(table, asg);
                let b = b.eval(table, asg);
                if a.len() == 1 && b.len() == 1 {
                    table.entry(*a.first().unwrap(), *b.first().unwrap()).clone()
                } else {
                    table.imp_sets(&a, &b)
                }
            }
        }
    }
}

/// All assignments of `vars` elements out of `0..n`, in lexicographic order.
pub(crate) fn assignments(n: usize, vars: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(vars as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut k| {
        let mut a = vec![0; vars];
        for slot in a.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        a
    })
}

pub(crate) fn slot_map(vars: &BTreeSet<String>) -> BTreeMap<String, usize> {
    vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect()
}

/// A failing assignment with the values of both sides of the violated identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<usize>,
    pub assignment: Vec<(String, usize)>,
    pub lhs: ElementSet,
    pub rhs: ElementSet,
}

impl Countermodel {
    pub fn value_of(&self, var: &str) -> Option<usize> {
        self.assignment.iter().find(|(v, _)| v == var).map(|(_, x)| *x)
    }

    pub fn render(&self, names: Option<&[String]>) -> String {
        let lab = |x: usize| crate::report::label(x, names);
        let set = |s: &ElementSet| {
            let parts: Vec<String> = s.iter().map(|&x| lab(x)).collect();
            if parts.len() == 1 {
                parts[0].clone()
            } else {
                format!("{{{}}}", parts.join(", "))
            }
        };
        let asg: Vec<String> = self.assignment.iter().map(|(v, x)| format!("{}={}", v, lab(*x))).collect();
        let model = self.model.map(|m| format!("model {}: ", m)).unwrap_or_default();
        format!("{}{} (values {} vs {})", model, asg.join(", "), set(&self.lhs), set(&self.rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Countermodel(Countermodel),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Countermodel(c) => Some(c),
            Verdict::Holds => None,
        }
    }
}

struct CompiledQuasi {
    vars: Vec<String>,
    premises: Vec<(Compiled, Compiled)>,
    conclusion: (Compiled, Compiled),
}

impl CompiledQuasi {
    fn new(q: &QuasiIdentity) -> Self {
        let vars = q.vars();
        let slots = slot_map(&vars);
        let pair = |i: &Identity| (Compiled::new(&i.lhs, &slots), Compiled::new(&i.rhs, &slots));
        CompiledQuasi {
            vars: vars.into_iter().collect(),
            premises: q.premises.iter().map(pair).collect(),
            conclusion: pair(&q.conclusion),
        }
    }

    fn check(&self, table: &ImplicationTable, model: Option<usize>) -> Verdict {
        for asg in assignments(table.size, self.vars.len()) {
            if !self.premises.iter().all(|(l, r)| l.eval(table, &asg) == r.eval(table, &asg)) {
                continue;
            }
            let (l, r) = &self.conclusion;
            let (lv, rv) = (l.eval(table, &asg), r.eval(table, &asg));
            if lv != rv {
                return Verdict::Countermodel(Countermodel {
                    model,
                    assignment: self.vars.iter().cloned().zip(asg).collect(),
                    lhs: lv,
                    rhs: rv,
                });
            }
        }
        Verdict::Holds
    }
}

/// Decide an identity by exhaustive assignment; the countermodel is the
/// first failing assignment in lexicographic order.
pub fn check_identity(table: &ImplicationTable, id: &Identity) -> Verdict {
    CompiledQuasi::new(&id.clone().into()).check(table, None)
}

pub fn check_quasiidentity(table: &ImplicationTable, q: &QuasiIdentity) -> Verdict {
    CompiledQuasi::new(q).check(table, None)
}

/// `sigma |= goal` over the class `models`.
pub fn semantic_consequence(
    models: &[ImplicationTable],
    sigma: &[Identity],
    goal: &Identity,
) -> Result<Verdict, LogicError> {
    if models.is_empty() {
        return Err(LogicError::EmptyModelClass);
    }
    let q = CompiledQuasi::new(&QuasiIdentity { premises: sigma.to_vec(), conclusion: goal.clone() });
    for (i, m) in models.iter().enumerate() {
        if let v @ Verdict::Countermodel(_) = q.check(m, Some(i)) {
            return Ok(v);
        }
    }
    Ok(Verdict::Holds)
}

/// How a formula is turned into an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Translation {
    /// `phi == 1`
    EqualsOne,
    /// `phi -> phi == phi`
    SelfImplication,
}

pub fn translate(phi: &Term, tr: Translation) -> Identity {
    match tr {
        Translation::EqualsOne => Identity::new(phi.clone(), Term::one()),
        Translation::SelfImplication => Identity::new(Term::imp(phi.clone(), phi.clone()), phi.clone()),
    }
}

/// Built-in lists of identities and quasi-identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuiteName {
    Th10,
    Sec6,
    Th4,
    Def31,
    Def52,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] = [SuiteName::Th10, SuiteName::Sec6, SuiteName::Th4, SuiteName::Def31, SuiteName::Def52];
}

impl FromStr for SuiteName {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "th10" => Ok(SuiteName::Th10),
            "sec6" => Ok(SuiteName::Sec6),
            "th4" => Ok(SuiteName::Th4),
            "def31" => Ok(SuiteName::Def31),
            "def52" => Ok(SuiteName::Def52),
            _ => Err(LogicError::UnknownSuite(s.to_string())),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteName::Th10 => "th10",
            SuiteName::Sec6 => "sec6",
            SuiteName::Th4 => "th4",
            SuiteName::Def31 => "def31",
            SuiteName::Def52 => "def52",
        };
        f.write_str(s)
    }
}

/// One numbered item of a suite. Items stated as a conjunction (such as
/// `x -> x'' == 1 and x'' -> x == 1`) carry several parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub label: String,
    pub parts: Vec<QuasiIdentity>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suite {
    pub name: SuiteName,
    pub entries: Vec<SuiteEntry>,
}

impl Suite {
    pub fn quasi_identities(&self) -> impl Iterator<Item = &QuasiIdentity> {
        self.entries.iter().flat_map(|e| e.parts.iter())
    }

    pub fn entry(&self, label: &str) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    /// Check every entry on `table`; one result per entry.
    pub fn run(&self, table: &ImplicationTable) -> Vec<(String, Verdict)> {
        self.entries
            .iter()
            .map(|e| {
                let v = e
                    .parts
                    .iter()
                    .map(|q| check_quasiidentity(table, q))
                    .find(|v| !v.holds())
                    .unwrap_or(Verdict::Holds);
                (e.label.clone(), v)
            })
            .collect()
    }
}

fn q(text: &str) -> QuasiIdentity {
    text.parse().unwrap_or_else(|e| panic!("built-in identity `{}`: {}", text, e))
}

fn entry(label: &str, parts: &[&str]) -> SuiteEntry {
    SuiteEntry { label: label.to_string(), parts: parts.iter().map(|p| q(p)).collect() }
}

const X_BICONDITIONAL: [&str; 6] = [
    "x -> y' == 1, (x' -> y) -> z' == 1 => y -> z' == 1",
    "x -> y' == 1, (x' -> y) -> z' == 1 => x -> (y' -> z)' == 1",
    "y -> z' == 1, x -> (y' -> z)' == 1 => x -> y' == 1",
    "y -> z' == 1, x -> (y' -> z)' == 1 => (x' -> y) -> z' == 1",
    "x -> y' == 1, (x' -> y) -> z' == 1 => (x' -> y)' -> z == x' -> (y' -> z)",
    "y -> z' == 1, x -> (y' -> z)' == 1 => (x' -> y)' -> z == x' -> (y' -> z)",
];

fn quasivariety_common() -> Vec<SuiteEntry> {
    vec![
        entry("(3)", &["0 -> x == 1"]),
        entry("(4)", &["x -> x == 1"]),
        entry("(5)", &["x == 1, x -> y == 1 => y == 1"]),
        entry("(6)", &["x -> y == 1 => (y -> z) -> (x -> z) == 1"]),
        entry("(7)", &["x -> y == 1 => (x' -> y') -> (y -> x) == 1"]),
        entry("(8)", &["x -> y == 1, y -> x == 1 => x == y"]),
        entry("(9)", &["x -> y' == 1, (x' -> y) -> z' == 1 => ((x' -> y)' -> z) -> (x' -> (y' -> z)) == 1"]),
    ]
}

fn order_clauses() -> Vec<SuiteEntry> {
    vec![
        entry("(i)", &["0 -> x == 1", "x -> x == 1", "x -> 1 == 1"]),
        entry("(ii)", &["x -> y == 1, y -> x == 1 => x == y"]),
        entry("(iii)", &["x -> y == 1, y -> z == 1 => x -> z == 1"]),
        entry("(iv)", &["x -> y == 1 => y' -> x' == 1"]),
        entry("(v)", &["x'' == x"]),
    ]
}

/// The transcribed suite `name`.
pub fn builtin_suite(name: SuiteName) -> Suite {
    let entries = match name {
        SuiteName::Th10 => {
            let mut e = vec![
                entry("(1)", &["x -> (y -> x) == 1"]),
                entry("(2)", &["((x -> y) -> y) -> ((y -> x) -> x) == 1"]),
            ];
            e.extend(quasivariety_common());
            e
        }
        SuiteName::Sec6 => {
            let mut e = vec![
                entry("(1)", &["x -> (y -> x) == 1"]),
                entry("(2)", &["x -> x'' == 1", "x'' -> x == 1"]),
            ];
            e.extend(quasivariety_common());
            e.push(entry("(10)", &["x -> y == 1 => (y -> x) -> x == y"]));
            e
        }
        SuiteName::Th4 => vec![
            entry("(i)", &["x -> 0 == x'"]),
            entry("(ii)", &["1 -> x == x"]),
            entry("(iii)", &["x -> (y -> x) == 1"]),
            entry("(iv)", &["(x -> y) -> y == x \\/ y"]),
            entry("(v)", &["((x -> y) -> y) -> y == x -> y"]),
            entry("(vi)", &["x -> ((x -> y) -> y) == 1"]),
            entry("(vii)", &["y -> ((x -> y) -> y) == 1"]),
            entry("(viii)", &["y' -> ((x -> y) -> y)' == x -> y"]),
        ],
        SuiteName::Def31 => {
            let mut e = order_clauses();
            e.extend([
                entry("(vi)", &["x -> ((x -> y) -> y) == 1"]),
                entry("(vii)", &["y -> ((x -> y) -> y) == 1"]),
                entry("(viii)", &["x -> z == 1, y -> z == 1 => ((x -> y) -> y) -> z == 1"]),
                entry("(ix)", &["x -> y == 1 => y -> x == x' -> y'"]),
                entry("(x)", &X_BICONDITIONAL),
                entry("(xi)", &["y' -> ((x -> y) -> y)' == x -> y"]),
                entry("(xii)", &["x -> (y -> x) == 1"]),
            ]);
            e
        }
        SuiteName::Def52 => {
            let mut e = order_clauses();
            e.extend([
                entry("(vi)", &["x -> y == 1 => y -> x == x' -> y'"]),
                entry("(vii)", &X_BICONDITIONAL),
                entry("(viii)", &["x -> (y -> x) == 1"]),
            ]);
            e
        }
    };
    Suite { name, entries }
}

/// Look up a suite by its command-line name.
pub fn suite_by_name(name: &str) -> Result<Suite, LogicError> {
    Ok(builtin_suite(name.parse()?))
}

/// `p -> p == 1`, the identity that makes the two translations agree.
pub fn self_implication_is_one() -> Identity {
    Identity::new(t("p -> p"), Term::one())
}
