//! Hilbert-style derivations for the two implication calculi.
//!
//! System A has axioms A1-A3, system B has B1-B4; both use the rules MP,
//! Sf, WPf, R1 and R2. Schemas are written over the variables `phi`, `psi`
//! and `chi`. Line numbers and hypothesis indices are 1-based.
//!
//! Checking never unifies: every axiom and rule line carries the
//! substitution that instantiates its schema. [`Builder`] and
//! [`search_proof`] compute those substitutions by matching.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::implication::ImplicationTable;
use crate::logic::{assignments, slot_map, Compiled, Identity, QuasiIdentity};
use crate::report::{Clause, Report, Witness};
use crate::term::{match_term, t, Substitution, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    A,
    B,
}

impl System {
    pub fn axioms(self) -> &'static [Schema] {
        match self {
            System::A => &[Schema::A1, Schema::A2, Schema::A3],
            System::B => &[Schema::B1, Schema::B2, Schema::B3, Schema::B4],
        }
    }
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(System::A),
            "B" | "b" => Ok(System::B),
            _ => Err(format!("unknown system `{}` (expected A or B)", s)),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Schema {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    B4,
}

impl Schema {
    pub const ALL: [Schema; 7] = [Schema::A1, Schema::A2, Schema::A3, Schema::B1, Schema::B2, Schema::B3, Schema::B4];

    pub fn system(self) -> System {
        match self {
            Schema::A1 | Schema::A2 | Schema::A3 => System::A,
            _ => System::B,
        }
    }

    /// The schema formulas. B3 is a biconditional and yields both directions.
    pub fn templates(self) -> Vec<Term> {
        match self {
            Schema::A1 | Schema::B1 => vec![t("phi -> (psi -> phi)")],
            Schema::A2 => vec![t("((phi -> psi) -> psi) -> ((psi -> phi) -> phi)")],
            Schema::A3 | Schema::B4 => vec![t("0 -> phi")],
            Schema::B2 => vec![t("phi -> phi")],
            Schema::B3 => vec![t("phi -> ((phi -> 0) -> 0)"), t("((phi -> 0) -> 0) -> phi")],
        }
    }

    /// `phi == 1` for each template; these must hold in every model.
    pub fn identities(self) -> Vec<Identity> {
        self.templates().into_iter().map(|f| Identity::new(f, Term::one())).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    MP,
    Sf,
    WPf,
    R1,
    R2,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::MP, Rule::Sf, Rule::WPf, Rule::R1, Rule::R2];

    pub fn premises(self) -> Vec<Term> {
        match self {
            Rule::MP => vec![t("phi"), t("phi -> psi")],
            Rule::Sf | Rule::R1 => vec![t("phi -> psi")],
            Rule::WPf => vec![t("phi -> psi"), t("psi -> phi")],
            Rule::R2 => vec![t("phi -> ~psi"), t("(~phi -> psi) -> ~chi")],
        }
    }

    pub fn conclusion(self) -> Term {
        match self {
            Rule::MP => t("psi"),
            Rule::Sf => t("(psi -> chi) -> (phi -> chi)"),
            Rule::WPf => t("(chi -> phi) -> (chi -> psi)"),
            Rule::R1 => t("(~phi -> ~psi) -> (psi -> phi)"),
            Rule::R2 => t("(~(~phi -> psi) -> chi) -> (~phi -> (~psi -> chi))"),
        }
    }

    pub fn schema_vars(self) -> &'static [&'static str] {
        match self {
            Rule::MP | Rule::R1 => &["phi", "psi"],
            _ => &["phi", "psi", "chi"],
        }
    }

    /// `premise == 1, ... => conclusion == 1`
    pub fn quasi_identity(self) -> QuasiIdentity {
        QuasiIdentity {
            premises: self.premises().into_iter().map(|p| Identity::new(p, Term::one())).collect(),
            conclusion: Identity::new(self.conclusion(), Term::one()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Justification {
    Hypothesis {
        index: usize,
    },
    Axiom {
        schema: Schema,
        subst: Substitution,
    },
    Rule {
        rule: Rule,
        premises: Vec<usize>,
        subst: Substitution,
    },
    Lemma {
        fixture: String,
        #[serde(default)]
        subst: Substitution,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLine {
    pub formula: Term,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub system: System,
    #[serde(default)]
    pub hypotheses: Vec<Term>,
    pub lines: Vec<ProofLine>,
    pub conclusion: Term,
}

impl Derivation {
    pub fn uses_lemmas(&self) -> bool {
        self.lines.iter().any(|l| matches!(l.just, Justification::Lemma { .. }))
    }

    pub fn lemma_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self
            .lines
            .iter()
            .filter_map(|l| match &l.just {
                Justification::Lemma { fixture, .. } => Some(fixture.as_str()),
                _ => None,
            })
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hyps: Vec<String> = self.hypotheses.iter().map(|h| h.to_string()).collect();
        if hyps.is_empty() {
            writeln!(f, "system {}: |- {}", self.system, self.conclusion)?;
        } else {
            writeln!(f, "system {}: {} |- {}", self.system, hyps.join(", "), self.conclusion)?;
        }
        for (i, line) in self.lines.iter().enumerate() {
            let just = match &line.just {
                Justification::Hypothesis { index } => format!("hyp {}", index),
                Justification::Axiom { schema, .. } => format!("{:?}", schema),
                Justification::Rule { rule, premises, .. } => {
                    let ps: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
                    format!("{:?} {}", rule, ps.join(","))
                }
                Justification::Lemma { fixture, .. } => format!("lemma {}", fixture),
            };
            writeln!(f, "{:>3}. {:<50} {}", i + 1, line.formula.to_string(), just)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProofError {
    #[error("substitution misses schema variable `{0}`")]
    MissingSchemaVariable(String),
    #[error("premise {index} does not match the rule")]
    PremiseMismatch { index: usize },
    #[error("expected {expected} premises, found {found}")]
    WrongPremiseCount { expected: usize, found: usize },
    #[error("formula does not match the stated justification")]
    NoMatch,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

/// Instantiate `schema`; every schema variable must be covered.
pub fn instantiate_schema(schema: Schema, subst: &Substitution) -> Result<Vec<Term>, ProofError> {
    let templates = schema.templates();
    for tpl in &templates {
        if let Some(v) = tpl.vars().into_iter().find(|v| !subst.contains_key(v)) {
            return Err(ProofError::MissingSchemaVariable(v));
        }
    }
    Ok(templates.iter().map(|tpl| tpl.substitute(subst)).collect())
}

/// Conclude by `rule` from `premises`. Variables missing from `subst` are
/// read off the premises; `chi` of Sf and WPf occurs only in the conclusion
/// and must be given.
pub fn apply_rule(rule: Rule, premises: &[Term], subst: &Substitution) -> Result<Term, ProofError> {
    let schemas = rule.premises();
    if premises.len() != schemas.len() {
        return Err(ProofError::WrongPremiseCount { expected: schemas.len(), found: premises.len() });
    }
    let mut s = subst.clone();
    for (i, (schema, premise)) in schemas.iter().zip(premises).enumerate() {
        if !match_term(schema, premise, &mut s) {
            return Err(ProofError::PremiseMismatch { index: i + 1 });
        }
    }
    if let Some(v) = rule.schema_vars().iter().find(|v| !s.contains_key(**v)) {
        return Err(ProofError::MissingSchemaVariable(v.to_string()));
    }
    Ok(rule.conclusion().substitute(&s))
}

/// Why a line failed to check.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineError {
    #[error("derivation has no lines")]
    Empty,
    #[error("hypothesis {0} does not exist")]
    NoSuchHypothesis(usize),
    #[error("formula differs from the cited hypothesis")]
    HypothesisMismatch,
    #[error("axiom {0:?} does not belong to system {1}")]
    ForeignAxiom(Schema, System),
    #[error("substitution misses schema variable `{0}`")]
    MissingSchemaVariable(String),
    #[error("formula is not the stated instance; expected {0}")]
    FormulaMismatch(String),
    #[error("premise line {0} is not an earlier line")]
    PremiseNotEarlier(usize),
    #[error("expected {expected} premises, found {found}")]
    WrongPremiseCount { expected: usize, found: usize },
    #[error("premise {index} does not match the rule")]
    PremiseMismatch { index: usize },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture `{0}` has hypotheses")]
    LemmaWithHypotheses(String),
    #[error("fixture `{0}` belongs to another system")]
    LemmaWrongSystem(String),
    #[error("fixture `{0}` does not verify")]
    LemmaNotVerified(String),
    #[error("fixture `{0}` depends on itself")]
    LemmaCycle(String),
    #[error("conclusion differs from the last line")]
    ConclusionMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckResult {
    Verified,
    Invalid { line: usize, reason: LineError },
}

impl CheckResult {
    pub fn is_verified(&self) -> bool {
        matches!(self, CheckResult::Verified)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Verified => f.write_str("Verified"),
            CheckResult::Invalid { line, reason } => write!(f, "Invalid at line {}: {}", line, reason),
        }
    }
}

/// Named derivations available to `Lemma` lines.
#[derive(Clone, Debug, Default)]
pub struct FixtureLibrary {
    fixtures: BTreeMap<String, Derivation>,
}

impl FixtureLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: &str, mut d: Derivation) {
        d.id = Some(id.to_string());
        self.fixtures.insert(id.to_string(), d);
    }

    pub fn get(&self, id: &str) -> Option<&Derivation> {
        self.fixtures.get(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.fixtures.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Derivation)> {
        self.fixtures.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.fixtures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixtures.is_empty()
    }
}

struct Checker<'a> {
    lib: &'a FixtureLibrary,
    verified: RefCell<HashMap<String, bool>>,
    active: RefCell<HashSet<String>>,
}

impl<'a> Checker<'a> {
    fn lemma_ok(&self, id: &str, system: System) -> Result<&'a Derivation, LineError> {
        let fixture = self.lib.get(id).ok_or_else(|| LineError::UnknownFixture(id.to_string()))?;
        if !fixture.hypotheses.is_empty() {
            return Err(LineError::LemmaWithHypotheses(id.to_string()));
        }
        if fixture.system != system {
            return Err(LineError::LemmaWrongSystem(id.to_string()));
        }
        if let Some(&ok) = self.verified.borrow().get(id) {
            return if ok { Ok(fixture) } else { Err(LineError::LemmaNotVerified(id.to_string())) };
        }
        if !self.active.borrow_mut().insert(id.to_string()) {
            return Err(LineError::LemmaCycle(id.to_string()));
        }
        let result = self.check(fixture);
        self.active.borrow_mut().remove(id);
        if let CheckResult::Invalid { reason: LineError::LemmaCycle(c), .. } = &result {
            return Err(LineError::LemmaCycle(c.clone()));
        }
        let ok = result.is_verified();
        self.verified.borrow_mut().insert(id.to_string(), ok);
        if ok {
            Ok(fixture)
        } else {
            Err(LineError::LemmaNotVerified(id.to_string()))
        }
    }

    fn check_line(&self, d: &Derivation, k: usize) -> Result<(), LineError> {
        let line = &d.lines[k];
        let mismatch = |expected: &Term| LineError::FormulaMismatch(expected.to_string());
        match &line.just {
            Justification::Hypothesis { index } => {
                let h = index
                    .checked_sub(1)
                    .and_then(|i| d.hypotheses.get(i))
                    .ok_or(LineError::NoSuchHypothesis(*index))?;
                if *h != line.formula {
                    return Err(LineError::HypothesisMismatch);
                }
            }
            Justification::Axiom { schema, subst } => {
                if schema.system() != d.system {
                    return Err(LineError::ForeignAxiom(*schema, d.system));
                }
                let instances = instantiate_schema(*schema, subst).map_err(|e| match e {
                    ProofError::MissingSchemaVariable(v) => LineError::MissingSchemaVariable(v),
                    _ => unreachable!(),
                })?;
                if !instances.contains(&line.formula) {
                    return Err(mismatch(&instances[0]));
                }
            }
            Justification::Rule { rule, premises, subst } => {
                let expected = rule.premises().len();
                if premises.len() != expected {
                    return Err(LineError::WrongPremiseCount { expected, found: premises.len() });
                }
                if let Some(v) = rule.schema_vars().iter().find(|v| !subst.contains_key(**v)) {
                    return Err(LineError::MissingSchemaVariable(v.to_string()));
                }
                for (i, &p) in premises.iter().enumerate() {
                    if p == 0 || p > k {
                        return Err(LineError::PremiseNotEarlier(p));
                    }
                    if rule.premises()[i].substitute(subst) != d.lines[p - 1].formula {
                        return Err(LineError::PremiseMismatch { index: i + 1 });
                    }
                }
                let concl = rule.conclusion().substitute(subst);
                if concl != line.formula {
                    return Err(mismatch(&concl));
                }
            }
            Justification::Lemma { fixture, subst } => {
                let f = self.lemma_ok(fixture, d.system)?;
                let concl = f.conclusion.substitute(subst);
                if concl != line.formula {
                    return Err(mismatch(&concl));
                }
            }
        }
        Ok(())
    }

    fn check(&self, d: &Derivation) -> CheckResult {
        if d.lines.is_empty() {
            return CheckResult::Invalid { line: 0, reason: LineError::Empty };
        }
        for k in 0..d.lines.len() {
            if let Err(reason) = self.check_line(d, k) {
                return CheckResult::Invalid { line: k + 1, reason };
            }
        }
        if d.lines.last().map(|l| &l.formula) != Some(&d.conclusion) {
            return CheckResult::Invalid { line: d.lines.len(), reason: LineError::ConclusionMismatch };
        }
        CheckResult::Verified
    }
}

/// Check every line of `d`. Lemma lines cite hypothesis-free fixtures of
/// the same system from `lib`, which are checked in turn.
pub fn check_derivation(d: &Derivation, lib: &FixtureLibrary) -> CheckResult {
    let checker = Checker { lib, verified: RefCell::new(HashMap::new()), active: RefCell::new(HashSet::new()) };
    if let Some(id) = &d.id {
        checker.active.borrow_mut().insert(id.clone());
    }
    checker.check(d)
}

/// `outer` after `inner`: the substitution sending `v` to `inner(v)` with
/// `outer` applied, keeping `outer` on variables `inner` leaves alone.
fn compose(inner: &Substitution, outer: &Substitution, keep_outer: bool) -> Substitution {
    let mut out: Substitution = inner.iter().map(|(k, v)| (k.clone(), v.substitute(outer))).collect();
    if keep_outer {
        for (k, v) in outer {
            out.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    out
}

fn embed(
    target: &mut Vec<ProofLine>,
    fixture: &Derivation,
    subst: &Substitution,
    hyp_lines: &[usize],
    lib: Option<&FixtureLibrary>,
) -> Result<usize, ProofError> {
    let mut map = Vec::with_capacity(fixture.lines.len());
    for line in &fixture.lines {
        let formula = line.formula.substitute(subst);
        let number = match &line.just {
            Justification::Hypothesis { index } => {
                *hyp_lines.get(index.wrapping_sub(1)).ok_or(ProofError::NoMatch)?
            }
            Justification::Lemma { fixture: id, subst: s } if lib.is_some() => {
                let inner = lib.unwrap().get(id).ok_or_else(|| ProofError::UnknownFixture(id.clone()))?;
                embed(target, inner, &compose(s, subst, true), &[], lib)?
            }
            just => {
                let just = match just {
                    Justification::Axiom { schema, subst: s } => {
                        Justification::Axiom { schema: *schema, subst: compose(s, subst, false) }
                    }
                    Justification::Rule { rule, premises, subst: s } => Justification::Rule {
                        rule: *rule,
                        premises: premises.iter().map(|p| map[p - 1]).collect(),
                        subst: compose(s, subst, false),
                    },
                    Justification::Lemma { fixture, subst: s } => {
                        Justification::Lemma { fixture: fixture.clone(), subst: compose(s, subst, true) }
                    }
                    Justification::Hypothesis { .. } => unreachable!(),
                };
                target.push(ProofLine { formula, just });
                target.len()
            }
        };
        map.push(number);
    }
    Ok(*map.last().ok_or(ProofError::NoMatch)?)
}

/// Replace every Lemma line by the cited fixture's lines under the lemma's
/// substitution, recursively. The result uses axioms and rules only.
pub fn inline_lemmas(d: &Derivation, lib: &FixtureLibrary) -> Result<Derivation, ProofError> {
    let mut lines = Vec::new();
    let hyp_lines: Vec<usize> = Vec::new();
    let mut map = Vec::new();
    for line in &d.lines {
        let n = match &line.just {
            Justification::Lemma { fixture, subst } => {
                let f = lib.get(fixture).ok_or_else(|| ProofError::UnknownFixture(fixture.clone()))?;
                embed(&mut lines, f, subst, &hyp_lines, Some(lib))?
            }
            Justification::Rule { rule, premises, subst } => {
                lines.push(ProofLine {
                    formula: line.formula.clone(),
                    just: Justification::Rule {
                        rule: *rule,
                        premises: premises.iter().map(|p| map[p - 1]).collect(),
                        subst: subst.clone(),
                    },
                });
                lines.len()
            }
            _ => {
                lines.push(line.clone());
                lines.len()
            }
        };
        map.push(n);
    }
    Ok(Derivation { id: d.id.clone(), system: d.system, hypotheses: d.hypotheses.clone(), lines, conclusion: d.conclusion.clone() })
}

/// Incremental construction of derivations; substitutions are computed by
/// matching the stated formulas against the schemas.
pub struct Builder<'a> {
    lib: &'a FixtureLibrary,
    d: Derivation,
}

fn parse(text: &str) -> Result<Term, ProofError> {
    text.parse().map_err(|_| ProofError::NoMatch)
}

impl<'a> Builder<'a> {
    pub fn new(lib: &'a FixtureLibrary, system: System, hypotheses: &[&str]) -> Result<Self, ProofError> {
        let hypotheses = hypotheses.iter().map(|h| parse(h)).collect::<Result<_, _>>()?;
        Ok(Builder { lib, d: Derivation { id: None, system, hypotheses, lines: Vec::new(), conclusion: Term::Zero } })
    }

    fn push(&mut self, formula: Term, just: Justification) -> usize {
        self.d.lines.push(ProofLine { formula, just });
        self.d.lines.len()
    }

    pub fn hyp(&mut self, index: usize) -> Result<usize, ProofError> {
        let h = self.d.hypotheses.get(index.wrapping_sub(1)).cloned().ok_or(ProofError::NoMatch)?;
        Ok(self.push(h, Justification::Hypothesis { index }))
    }

    pub fn axiom(&mut self, schema: Schema, formula: &str) -> Result<usize, ProofError> {
        let formula = parse(formula)?;
        for tpl in schema.templates() {
            let mut s = Substitution::new();
            if match_term(&tpl, &formula, &mut s) {
                return Ok(self.push(formula, Justification::Axiom { schema, subst: s }));
            }
        }
        Err(ProofError::NoMatch)
    }

    /// Rule line; when `formula` is `None` the conclusion is computed from
    /// the premises (impossible for Sf and WPf, whose `chi` is free).
    pub fn rule(&mut self, rule: Rule, premises: &[usize], formula: Option<&str>) -> Result<usize, ProofError> {
        let mut s = Substitution::new();
        if let Some(text) = formula {
            if !match_term(&rule.conclusion(), &parse(text)?, &mut s) {
                return Err(ProofError::NoMatch);
            }
        }
        let prem: Vec<Term> = premises
            .iter()
            .map(|&p| self.d.lines.get(p.wrapping_sub(1)).map(|l| l.formula.clone()).ok_or(ProofError::NoMatch))
            .collect::<Result<_, _>>()?;
        let concl = apply_rule(rule, &prem, &s)?;
        for (i, schema) in rule.premises().iter().enumerate() {
            match_term(schema, &prem[i], &mut s);
        }
        Ok(self.push(concl, Justification::Rule { rule, premises: premises.to_vec(), subst: s }))
    }

    pub fn lemma(&mut self, fixture: &str, formula: &str) -> Result<usize, ProofError> {
        let f = self.lib.get(fixture).ok_or_else(|| ProofError::UnknownFixture(fixture.to_string()))?;
        let formula = parse(formula)?;
        let mut s = Substitution::new();
        if !match_term(&f.conclusion, &formula, &mut s) {
            return Err(ProofError::NoMatch);
        }
        s.retain(|k, v| *v != Term::Var(k.clone()));
        Ok(self.push(formula, Justification::Lemma { fixture: fixture.to_string(), subst: s }))
    }

    /// Copy the lines of a fixture with hypotheses, discharging its
    /// hypotheses with the given earlier lines.
    pub fn splice(&mut self, fixture: &str, subst: &[(&str, &str)], hyp_lines: &[usize]) -> Result<usize, ProofError> {
        let f = self.lib.get(fixture).ok_or_else(|| ProofError::UnknownFixture(fixture.to_string()))?;
        let s: Substitution = subst.iter().map(|(k, v)| Ok((k.to_string(), parse(v)?))).collect::<Result<_, _>>()?;
        for (i, &l) in hyp_lines.iter().enumerate() {
            let expected = f.hypotheses.get(i).ok_or(ProofError::NoMatch)?.substitute(&s);
            if self.d.lines.get(l.wrapping_sub(1)).map(|x| &x.formula) != Some(&expected) {
                return Err(ProofError::PremiseMismatch { index: i + 1 });
            }
        }
        embed(&mut self.d.lines, f, &s, hyp_lines, None)
    }

    pub fn finish(mut self) -> Derivation {
        if let Some(last) = self.d.lines.last() {
            self.d.conclusion = last.formula.clone();
        }
        self.d
    }
}

/// Evaluate every line of `d` in every model. Wherever all hypotheses
/// evaluate to `{1}`, each line must evaluate to `{1}` as well.
pub fn soundness_audit(d: &Derivation, models: &[ImplicationTable]) -> Report {
    let mut vars = std::collections::BTreeSet::new();
    for f in d.hypotheses.iter().chain(d.lines.iter().map(|l| &l.formula)) {
        vars.extend(f.vars());
    }
    let slots = slot_map(&vars);
    let hyps: Vec<Compiled> = d.hypotheses.iter().map(|h| Compiled::new(h, &slots)).collect();
    let lines: Vec<Compiled> = d.lines.iter().map(|l| Compiled::new(&l.formula, &slots)).collect();
    let names: Vec<&String> = vars.iter().collect();
    let mut report = Report::new(format!("soundness of {}", d.id.as_deref().unwrap_or("derivation")));
    for (m, table) in models.iter().enumerate() {
        let one = std::collections::BTreeSet::from([table.one()]);
        let mut clause = Clause::new(format!("model {}", m));
        for asg in assignments(table.size, vars.len()) {
            if !hyps.iter().all(|h| h.eval(table, &asg) == one) {
                continue;
            }
            let bad = lines.iter().position(|l| l.eval(table, &asg) != one);
            clause.check(bad.is_none(), || {
                let k = bad.unwrap();
                let value = lines[k].eval(table, &asg);
                let mut bindings: Vec<(String, usize)> = vec![("model".to_string(), m)];
                bindings.extend(names.iter().map(|v| v.to_string()).zip(asg.iter().copied()));
                Witness { bindings, detail: format!("line {} evaluates to {:?}", k + 1, value) }
            });
            if !clause.passed() {
                break;
            }
        }
        report.push(clause);
    }
    report
}

/// Resource limits for [`search_proof`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    pub max_lines: usize,
    pub max_depth: usize,
    /// Cap on goal expansions, so that unprovable goals terminate quickly.
    pub max_expansions: usize,
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound { max_lines: 30, max_depth: 8, max_expansions: 200_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("no derivation within {max_lines} lines and formula depth {max_depth}")]
    NotFoundWithinBound { max_lines: usize, max_depth: usize },
}

#[derive(Clone, Debug)]
enum Step {
    Hyp(usize),
    Axiom(Schema, Substitution),
    Rule(Rule, Substitution, Vec<Node>),
}

#[derive(Clone, Debug)]
struct Node {
    formula: Term,
    step: Step,
    size: usize,
}

struct Searcher<'a> {
    system: System,
    hyps: &'a [Term],
    bound: SearchBound,
    failed: HashMap<Term, usize>,
    stack: Vec<Term>,
    expansions: usize,
}

impl Searcher<'_> {
    fn leaf(&self, goal: &Term) -> Option<Node> {
        if let Some(i) = self.hyps.iter().position(|h| h == goal) {
            return Some(Node { formula: goal.clone(), step: Step::Hyp(i + 1), size: 1 });
        }
        for &schema in self.system.axioms() {
            for tpl in schema.templates() {
                let mut s = Substitution::new();
                if match_term(&tpl, goal, &mut s) {
                    return Some(Node { formula: goal.clone(), step: Step::Axiom(schema, s), size: 1 });
                }
            }
        }
        None
    }

    fn mp_candidates(&self, goal: &Term) -> Vec<Term> {
        let mut c: Vec<Term> = goal.subterms().into_iter().collect();
        for h in self.hyps {
            c.extend(h.subterms());
            if let Some((a, b)) = h.as_imp() {
                if b == goal {
                    c.push(a.clone());
                }
            }
        }
        c.push(Term::Zero);
        c.push(Term::one());
        if let Some((_, y)) = goal.as_imp() {
            c.push(y.clone());
        }
        let mut s = Substitution::new();
        if match_term(&t("(psi -> phi) -> phi"), goal, &mut s) {
            c.push(t("(phi -> psi) -> psi").substitute(&s));
        }
        if self.system == System::B {
            c.push(Term::neg(Term::neg(goal.clone())));
        }
        c.retain(|a| a != goal);
        c.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        c.dedup();
        c
    }

    fn prove_all(&mut self, goals: &[Term], budget: usize) -> Option<Vec<Node>> {
        let Some((first, rest)) = goals.split_first() else {
            return Some(Vec::new());
        };
        let reserve = rest.len();
        if budget < reserve + 1 {
            return None;
        }
        for b in 1..=budget - reserve {
            if let Some(n) = self.prove(first, b) {
                if let Some(mut others) = self.prove_all(rest, budget - n.size) {
                    others.insert(0, n);
                    return Some(others);
                }
                return None;
            }
        }
        None
    }

    fn prove(&mut self, goal: &Term, budget: usize) -> Option<Node> {
        if budget == 0 || goal.depth() > self.bound.max_depth || self.expansions >= self.bound.max_expansions {
            return None;
        }
        if let Some(n) = self.leaf(goal) {
            return Some(n);
        }
        if budget == 1 || self.failed.get(goal).is_some_and(|&b| b >= budget) || self.stack.contains(goal) {
            return None;
        }
        self.expansions += 1;
        self.stack.push(goal.clone());
        let found = self.expand(goal, budget);
        self.stack.pop();
        if found.is_none() {
            let e = self.failed.entry(goal.clone()).or_insert(0);
            *e = (*e).max(budget);
        }
        found
    }

    fn expand(&mut self, goal: &Term, budget: usize) -> Option<Node> {
        for rule in [Rule::Sf, Rule::R1, Rule::WPf, Rule::R2] {
            let mut s = Substitution::new();
            if !match_term(&rule.conclusion(), goal, &mut s) {
                continue;
            }
            let premises: Vec<Term> = rule.premises().iter().map(|p| p.substitute(&s)).collect();
            if let Some(children) = self.prove_all(&premises, budget - 1) {
                let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
                return Some(Node { formula: goal.clone(), step: Step::Rule(rule, s, children), size });
            }
        }
        for a in self.mp_candidates(goal) {
            let imp = Term::imp(a.clone(), goal.clone());
            if imp.depth() > self.bound.max_depth {
                continue;
            }
            if let Some(children) = self.prove_all(&[a.clone(), imp], budget - 1) {
                let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
                let s = Substitution::from([("phi".to_string(), a), ("psi".to_string(), goal.clone())]);
                return Some(Node { formula: goal.clone(), step: Step::Rule(Rule::MP, s, children), size });
            }
        }
        None
    }
}

fn linearize(node: &Node, lines: &mut Vec<ProofLine>, seen: &mut HashMap<Term, usize>) -> usize {
    if let Some(&n) = seen.get(&node.formula) {
        return n;
    }
    let just = match &node.step {
        Step::Hyp(i) => Justification::Hypothesis { index: *i },
        Step::Axiom(schema, s) => Justification::Axiom { schema: *schema, subst: s.clone() },
        Step::Rule(rule, s, children) => {
            let premises = children.iter().map(|c| linearize(c, lines, seen)).collect();
            Justification::Rule { rule: *rule, premises, subst: s.clone() }
        }
    };
    lines.push(ProofLine { formula: node.formula.clone(), just });
    seen.insert(node.formula.clone(), lines.len());
    lines.len()
}

/// Iterative deepening on the number of lines, working backwards from the
/// goal through the rules and matching axiom schemas. Failure only means
/// nothing was found within `bound`.
pub fn search_proof(
    system: System,
    hypotheses: &[Term],
    goal: &Term,
    bound: SearchBound,
) -> Result<Derivation, SearchError> {
    let mut searcher =
        Searcher { system, hyps: hypotheses, bound, failed: HashMap::new(), stack: Vec::new(), expansions: 0 };
    for budget in 1..=bound.max_lines {
        if let Some(node) = searcher.prove(goal, budget) {
            let mut lines = Vec::new();
            linearize(&node, &mut lines, &mut HashMap::new());
            let d = Derivation {
                id: None,
                system,
                hypotheses: hypotheses.to_vec(),
                lines,
                conclusion: goal.clone(),
            };
            if d.lines.len() <= bound.max_lines && check_derivation(&d, &FixtureLibrary::new()).is_verified() {
                return Ok(d);
            }
        }
        if searcher.expansions >= bound.max_expansions {
            break;
        }
    }
    Err(SearchError::NotFoundWithinBound { max_lines: bound.max_lines, max_depth: bound.max_depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::transforms::effect_to_implication;

    fn subst(pairs: &[(&str, &str)]) -> Substitution {
        pairs.iter().map(|(k, v)| (k.to_string(), t(v))).collect()
    }

    #[test]
    fn schema_instances() {
        assert_eq!(instantiate_schema(Schema::A1, &subst(&[("phi", "p"), ("psi", "q")])).unwrap(), vec![t("p -> (q -> p)")]);
        assert_eq!(instantiate_schema(Schema::A3, &subst(&[("phi", "p")])).unwrap(), vec![t("0 -> p")]);
        assert_eq!(instantiate_schema(Schema::B2, &subst(&[("phi", "q -> 0")])).unwrap(), vec![t("(q -> 0) -> (q -> 0)")]);
        assert_eq!(instantiate_schema(Schema::B3, &subst(&[("phi", "p")])).unwrap().len(), 2);
        assert_eq!(
            instantiate_schema(Schema::A2, &subst(&[("phi", "p")])),
            Err(ProofError::MissingSchemaVariable("psi".into()))
        );
    }

    #[test]
    fn rule_applications() {
        let none = Substitution::new();
        assert_eq!(apply_rule(Rule::MP, &[t("p"), t("p -> q")], &none).unwrap(), t("q"));
        assert_eq!(apply_rule(Rule::Sf, &[t("p -> q")], &subst(&[("chi", "r")])).unwrap(), t("(q -> r) -> (p -> r)"));
        assert_eq!(apply_rule(Rule::R1, &[t("p -> q")], &none).unwrap(), t("((p -> 0) -> (q -> 0)) -> (q -> p)"));
        assert_eq!(
            apply_rule(Rule::WPf, &[t("p -> q"), t("q -> p")], &subst(&[("chi", "r")])).unwrap(),
            t("(r -> p) -> (r -> q)")
        );
        assert_eq!(
            apply_rule(Rule::R2, &[t("p -> ~q"), t("(~p -> q) -> ~r")], &none).unwrap(),
            t("(~(~p -> q) -> r) -> (~p -> (~q -> r))")
        );
        assert_eq!(apply_rule(Rule::MP, &[t("p"), t("r -> q")], &none), Err(ProofError::PremiseMismatch { index: 2 }));
        assert_eq!(apply_rule(Rule::WPf, &[t("p -> q"), t("r -> p")], &subst(&[("chi", "r")])), Err(ProofError::PremiseMismatch { index: 2 }));
        assert_eq!(apply_rule(Rule::MP, &[t("p")], &none), Err(ProofError::WrongPremiseCount { expected: 2, found: 1 }));
        assert_eq!(apply_rule(Rule::Sf, &[t("p -> q")], &none), Err(ProofError::MissingSchemaVariable("chi".into())));
    }

    #[test]
    fn one_line_axiom_derivation() {
        let lib = FixtureLibrary::new();
        let mut b = Builder::new(&lib, System::A, &[]).unwrap();
        b.axiom(Schema::A1, "p -> (q -> p)").unwrap();
        assert_eq!(check_derivation(&b.finish(), &lib), CheckResult::Verified);
    }

    #[test]
    fn mp_with_one_premise_is_rejected() {
        let d = Derivation {
            id: None,
            system: System::A,
            hypotheses: vec![t("p")],
            lines: vec![
                ProofLine { formula: t("p"), just: Justification::Hypothesis { index: 1 } },
                ProofLine {
                    formula: t("q"),
                    just: Justification::Rule { rule: Rule::MP, premises: vec![1], subst: subst(&[("phi", "p"), ("psi", "q")]) },
                },
            ],
            conclusion: t("q"),
        };
        assert_eq!(
            check_derivation(&d, &FixtureLibrary::new()),
            CheckResult::Invalid { line: 2, reason: LineError::WrongPremiseCount { expected: 2, found: 1 } }
        );
    }

    #[test]
    fn checker_rejects_bad_lines() {
        let lib = FixtureLibrary::new();
        let mut b = Builder::new(&lib, System::A, &[]).unwrap();
        b.axiom(Schema::A3, "0 -> 0").unwrap();
        let good = b.finish();
        let mut d = good.clone();
        d.lines[0].just = Justification::Axiom { schema: Schema::B4, subst: subst(&[("phi", "0")]) };
        assert_eq!(
            check_derivation(&d, &lib),
            CheckResult::Invalid { line: 1, reason: LineError::ForeignAxiom(Schema::B4, System::A) }
        );
        let mut d = good.clone();
        d.conclusion = t("p");
        assert_eq!(check_derivation(&d, &lib), CheckResult::Invalid { line: 1, reason: LineError::ConclusionMismatch });
        let mut d = good;
        d.lines.push(ProofLine {
            formula: t("0"),
            just: Justification::Rule { rule: Rule::MP, premises: vec![1, 2], subst: subst(&[("phi", "1"), ("psi", "0")]) },
        });
        d.conclusion = t("0");
        assert_eq!(check_derivation(&d, &lib), CheckResult::Invalid { line: 2, reason: LineError::PremiseNotEarlier(2) });
    }

    #[test]
    fn search_finds_short_proofs() {
        let bound = SearchBound::default();
        let d = search_proof(System::A, &[], &t("p -> (q -> p)"), bound).unwrap();
        assert_eq!(d.lines.len(), 1);
        let d = search_proof(System::A, &[], &t("1"), bound).unwrap();
        assert_eq!(d.lines.len(), 1);
        assert!(matches!(d.lines[0].just, Justification::Axiom { schema: Schema::A3, .. }));
        let d = search_proof(System::B, &[], &t("p -> 1"), bound).unwrap();
        assert!(d.lines.len() <= 3);
        let d = search_proof(System::A, &[t("p -> q"), t("q -> r")], &t("p -> r"), bound).unwrap();
        assert!(check_derivation(&d, &FixtureLibrary::new()).is_verified());
    }

    #[test]
    fn search_gives_up_on_non_theorems() {
        let bound = SearchBound { max_lines: 6, max_depth: 5, max_expansions: 20_000 };
        assert!(search_proof(System::A, &[], &t("p"), bound).is_err());
    }

    #[test]
    fn audit_catches_unsound_step() {
        let d = Derivation {
            id: None,
            system: System::A,
            hypotheses: vec![t("p")],
            lines: vec![
                ProofLine { formula: t("p"), just: Justification::Hypothesis { index: 1 } },
                ProofLine { formula: t("q"), just: Justification::Hypothesis { index: 1 } },
            ],
            conclusion: t("q"),
        };
        let e2 = effect_to_implication(&models::e2());
        let report = soundness_audit(&d, &[e2]);
        assert!(report.has_failure("model 0", &[("model", 0), ("p", 1), ("q", 0)]));
    }
}
