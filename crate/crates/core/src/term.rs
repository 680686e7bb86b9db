//! Terms of the `{->, 0}` language.
//!
//! Surface syntax (sugar is expanded while parsing):
//!
//! ```text
//! term    := join ( "->" term )?          right-associative, lowest precedence
//! join    := unary ( "\/" unary )*        s \/ t  means  (s -> t) -> t
//! unary   := "~" unary | postfix          ~t      means  t -> 0
//! postfix := atom "'"*                    t'      means  t -> 0
//! atom    := identifier | "0" | "1" | "(" term ")"       1 means 0 -> 0
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    Imp(Box<Term>, Box<Term>),
}

/// Simultaneous substitution of terms for variables.
pub type Substitution = BTreeMap<String, Term>;

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    pub fn one() -> Term {
        Term::imp(Term::Zero, Term::Zero)
    }

    pub fn neg(a: Term) -> Term {
        Term::imp(a, Term::Zero)
    }

    /// `a \/ b = (a -> b) -> b`
    pub fn join(a: Term, b: Term) -> Term {
        Term::imp(Term::imp(a, b.clone()), b)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero => {}
            Term::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Nesting depth of `->`; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Imp(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Imp(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Replace every variable bound in `s`; unbound variables stay.
    pub fn substitute(&self, s: &Substitution) -> Term {
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Zero => Term::Zero,
            Term::Imp(a, b) => Term::imp(a.substitute(s), b.substitute(s)),
        }
    }

    /// All distinct subterms, including the term itself.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if out.insert(t.clone()) {
                if let Term::Imp(a, b) = t {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    pub fn as_imp(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, Term::Imp(a, b) if **a == Term::Zero && **b == Term::Zero)
    }

    fn negated(&self) -> Option<&Term> {
        match self {
            Term::Imp(a, b) if **b == Term::Zero => Some(a),
            _ => None,
        }
    }

    fn join_parts(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Imp(l, r) => match &**l {
                Term::Imp(a, b) if b == r => Some((a, b)),
                _ => None,
            },
            _ => None,
        }
    }
}

/// One-way matching: find `s` with `pattern.substitute(s) == target`,
/// extending the bindings already in `s`. Every variable of the pattern is
/// a pattern variable.
pub fn match_term(pattern: &Term, target: &Term, s: &mut Substitution) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                s.insert(v.clone(), target.clone());
                true
            }
        },
        (Term::Zero, Term::Zero) => true,
        (Term::Imp(a, b), Term::Imp(c, d)) => match_term(a, c, s) && match_term(b, d, s),
        _ => false,
    }
}

// Printing precedence levels: 0 = implication, 1 = join, 2 = prefix/atom.
fn write_term(t: &Term, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = |needed: bool, f: &mut fmt::Formatter<'_>, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        if needed {
            f.write_str("(")?;
            body(f)?;
            f.write_str(")")
        } else {
            body(f)
        }
    };
    match t {
        Term::Var(v) => f.write_str(v),
        Term::Zero => f.write_str("0"),
        _ if t.is_one() => f.write_str("1"),
        _ => {
            if let Some(a) = t.negated() {
                f.write_str("~")?;
                return write_term(a, 2, f);
            }
            if let Some((a, b)) = t.join_parts() {
                return paren(level > 1, f, &|f| {
                    write_term(a, 1, f)?;
                    f.write_str(" \\/ ")?;
                    write_term(b, 2, f)
                });
            }
            let (a, b) = t.as_imp().expect("implication");
            paren(level > 0, f, &|f| {
                write_term(a, 1, f)?;
                f.write_str(" -> ")?;
                write_term(b, 0, f)
            })
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Arrow,
    Join,
    Tilde,
    Prime,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{}`", s),
            Tok::Zero => f.write_str("`0`"),
            Tok::One => f.write_str("`1`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Join => f.write_str("`\\/`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '~' | '¬' => Tok::Tilde,
            '\'' => Tok::Prime,
            '→' => Tok::Arrow,
            '∨' => Tok::Join,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some((_, '>')) => Tok::Arrow,
                    _ => {
                        return Err(ParseError {
                            position: i + 1,
                            expected: vec!["`>`".into()],
                            found: chars.peek().map(|(_, c)| format!("`{}`", c)).unwrap_or("end of input".into()),
                        })
                    }
                }
            }
            '\\' => {
                chars.next();
                match chars.peek() {
                    Some((_, '/')) => Tok::Join,
                    _ => {
                        return Err(ParseError {
                            position: i + 1,
                            expected: vec!["`/`".into()],
                            found: chars.peek().map(|(_, c)| format!("`{}`", c)).unwrap_or("end of input".into()),
                        })
                    }
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                match s.as_str() {
                    "0" => out.push((i, Tok::Zero)),
                    "1" => out.push((i, Tok::One)),
                    _ => {
                        return Err(ParseError {
                            position: i,
                            expected: vec!["`0`".into(), "`1`".into(), "identifier".into()],
                            found: format!("`{}`", s),
                        })
                    }
                }
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((i, Tok::Ident(s)));
                continue;
            }
            other => {
                return Err(ParseError {
                    position: i,
                    expected: vec!["term".into()],
                    found: format!("`{}`", other),
                })
            }
        };
        chars.next();
        out.push((i, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.to_string(),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let left = self.join()?;
        if *self.peek() == Tok::Arrow {
            self.pos += 1;
            let right = self.term()?;
            return Ok(Term::imp(left, right));
        }
        Ok(left)
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Join {
            self.pos += 1;
            let right = self.unary()?;
            left = Term::join(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.pos += 1;
            return Ok(Term::neg(self.unary()?));
        }
        let mut t = self.atom()?;
        while *self.peek() == Tok::Prime {
            self.pos += 1;
            t = Term::neg(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let t = match self.peek().clone() {
            Tok::Ident(s) => Term::Var(s),
            Tok::Zero => Term::Zero,
            Tok::One => Term::one(),
            Tok::LParen => {
                self.pos += 1;
                let inner = self.term()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "`->`", "`\\/`"]));
                }
                inner
            }
            _ => return Err(self.error(&["identifier", "`0`", "`1`", "`~`", "`(`"])),
        };
        self.pos += 1;
        Ok(t)
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`->`", "`\\/`", "`'`", "end of input"]));
    }
    Ok(t)
}

impl FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

/// Terms serialize as their printed form.
impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_term(&text).map_err(serde::de::Error::custom)
    }
}

/// Parse a term known to be well formed (built-in tables and fixtures).
pub fn t(text: &str) -> Term {
    parse_term(text).unwrap_or_else(|e| panic!("built-in term `{}`: {}", text, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(t("p -> (q -> p)"), Term::imp(v("p"), Term::imp(v("q"), v("p"))));
        assert_eq!(t("p -> q -> p"), t("p -> (q -> p)"));
    }

    #[test]
    fn sugar_expands() {
        assert_eq!(t("~p"), Term::imp(v("p"), Term::Zero));
        assert_eq!(t("p'"), t("~p"));
        assert_eq!(t("1"), Term::imp(Term::Zero, Term::Zero));
        assert_eq!(t("p \\/ q"), Term::imp(Term::imp(v("p"), v("q")), v("q")));
        assert_eq!(t("p \\/ q -> r"), Term::imp(t("p \\/ q"), v("r")));
        assert_eq!(t("x''"), t("(x -> 0) -> 0"));
    }

    #[test]
    fn parse_errors_report_position() {
        let e = parse_term("p -> ").unwrap_err();
        assert_eq!(e.position, 5);
        assert!(e.expected.iter().any(|s| s == "identifier"));
        let e = parse_term("(p -> q").unwrap_err();
        assert_eq!(e.position, 7);
        assert!(e.expected.contains(&"`)`".to_string()));
        let e = parse_term("p q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_term("p - q").is_err());
        assert!(parse_term("2").is_err());
    }

    #[test]
    fn printing_uses_sugar() {
        assert_eq!(t("(p -> 0) -> 0").to_string(), "~~p");
        assert_eq!(t("0 -> 0").to_string(), "1");
        assert_eq!(t("(p -> q) -> q").to_string(), "p \\/ q");
        assert_eq!(t("(p -> q) -> r").to_string(), "(p -> q) -> r");
    }

    #[test]
    fn matching() {
        let mut s = Substitution::new();
        assert!(match_term(&t("phi -> (psi -> phi)"), &t("p -> ((q -> r) -> p)"), &mut s));
        assert_eq!(s["psi"], t("q -> r"));
        let mut s = Substitution::new();
        assert!(!match_term(&t("phi -> (psi -> phi)"), &t("p -> (q -> r)"), &mut s));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::Zero),
            prop::sample::select(vec!["p", "q", "r", "x1"]).prop_map(Term::var),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Term::imp(a, b)))
    }

    proptest! {
        #[test]
        fn printed_terms_reparse(term in arb_term()) {
            let printed = term.to_string();
            prop_assert_eq!(parse_term(&printed).unwrap(), term);
        }

        #[test]
        fn substitution_then_match_recovers_binding(a in arb_term(), b in arb_term()) {
            let pattern = t("phi -> (psi -> phi)");
            let s: Substitution = [("phi".to_string(), a), ("psi".to_string(), b)].into();
            let inst = pattern.substitute(&s);
            let mut found = Substitution::new();
            prop_assert!(match_term(&pattern, &inst, &mut found));
            prop_assert_eq!(found, s);
        }
    }
}
