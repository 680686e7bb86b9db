//! Clause-by-clause check reports shared by the validators and law checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A concrete assignment of elements to the variables of a clause, plus a
/// short description of what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub bindings: Vec<(String, usize)>,
    pub detail: String,
}

impl Witness {
    pub fn new(bindings: &[(&str, usize)], detail: impl Into<String>) -> Self {
        Witness {
            bindings: bindings.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            detail: detail.into(),
        }
    }

    /// Value bound to `var`, if any.
    pub fn get(&self, var: &str) -> Option<usize> {
        self.bindings.iter().find(|(k, _)| k == var).map(|(_, v)| *v)
    }

    /// True when every `(var, value)` pair in `expected` appears in the bindings.
    pub fn binds(&self, expected: &[(&str, usize)]) -> bool {
        expected.iter().all(|(k, v)| self.get(k) == Some(*v))
    }

    pub fn render(&self, names: Option<&[String]>) -> String {
        let parts: Vec<String> = self
            .bindings
            .iter()
            .map(|(k, v)| format!("{}={}", k, label(*v, names)))
            .collect();
        if self.detail.is_empty() {
            parts.join(", ")
        } else {
            format!("{} ({})", parts.join(", "), self.detail)
        }
    }
}

/// Display label for an element: its name when the model provides one.
pub fn label(x: usize, names: Option<&[String]>) -> String {
    match names.and_then(|n| n.get(x)) {
        Some(name) => name.clone(),
        None => x.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub tag: String,
    pub instances: usize,
    pub failures: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Clause {
    pub fn new(tag: impl Into<String>) -> Self {
        Clause { tag: tag.into(), instances: 0, failures: Vec::new(), note: None }
    }

    /// A clause that holds for a structural reason and is not enumerated.
    pub fn vacuous(tag: impl Into<String>, note: impl Into<String>) -> Self {
        Clause { tag: tag.into(), instances: 0, failures: Vec::new(), note: Some(note.into()) }
    }

    /// Record one checked instance; the witness is only built on failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.instances += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), clauses: Vec::new() }
    }

    pub fn push(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(Clause::passed)
    }

    pub fn clause(&self, tag: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.tag == tag)
    }

    pub fn failed_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed())
    }

    /// True when clause `tag` failed with a witness binding all of `expected`.
    pub fn has_failure(&self, tag: &str, expected: &[(&str, usize)]) -> bool {
        self.clause(tag)
            .map(|c| c.failures.iter().any(|w| w.binds(expected)))
            .unwrap_or(false)
    }

    pub fn render(&self, names: Option<&[String]>) -> String {
        let mut out = format!("{}: {}\n", self.title, if self.passed() { "pass" } else { "FAIL" });
        for c in &self.clauses {
            if c.passed() {
                match &c.note {
                    Some(note) => out.push_str(&format!("  {}: pass ({})\n", c.tag, note)),
                    None => out.push_str(&format!("  {}: pass ({} instances)\n", c.tag, c.instances)),
                }
            } else {
                out.push_str(&format!(
                    "  {}: FAIL ({} of {} instances)\n",
                    c.tag,
                    c.failures.len(),
                    c.instances
                ));
                for w in c.failures.iter().take(5) {
                    out.push_str(&format!("    witness: {}\n", w.render(names)));
                }
                if c.failures.len() > 5 {
                    out.push_str(&format!("    ... {} more\n", c.failures.len() - 5));
                }
            }
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}
