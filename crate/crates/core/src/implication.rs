//! Implication operations on finite effect algebras.
//!
//! Three tables can be built from an effect algebra:
//!
//! * the natural implication `x -> y = y + (x v y)'` (lattice-ordered only),
//! * the Sasaki implication `x -> y = x' + (x ^ y)` (lattice-ordered only,
//!   kept for comparison),
//! * the set-valued implication `x -> y = y + Max L(x', y')`, defined on every
//!   finite effect algebra and agreeing with the natural one on lattices.
//!
//! Cells are sets of elements kept sorted by index.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{induced_order, max_lower_cone, EffectAlgebra};
use crate::report::{Clause, Report, Witness};

pub type ElementSet = BTreeSet<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicationKind {
    NaturalLattice,
    Sasaki,
    SetValued,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImplicationError {
    #[error("the effect algebra is not lattice-ordered")]
    NotLattice,
    #[error("empty argument set")]
    EmptyArgument,
    #[error("no law suite for tables of kind {0:?}")]
    KindMismatch(ImplicationKind),
    #[error("malformed implication table: {0}")]
    Malformed(String),
}

/// A total binary operation whose cells are non-empty element sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationTable {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub zero: usize,
    pub kind: ImplicationKind,
    imp: Vec<Vec<ElementSet>>,
}

impl ImplicationTable {
    /// Check shape and cell invariants: every cell non-empty and in range,
    /// single-valued kinds hold singletons, and `x -> 0` is always a
    /// singleton (it is the complement of `x`).
    pub fn new(
        zero: usize,
        kind: ImplicationKind,
        imp: Vec<Vec<ElementSet>>,
        names: Option<Vec<String>>,
    ) -> Result<Self, ImplicationError> {
        let t = ImplicationTable { size: imp.len(), names, zero, kind, imp };
        t.check()?;
        Ok(t)
    }

    /// A single-valued table from plain element entries.
    pub fn single_valued(zero: usize, kind: ImplicationKind, imp: &[Vec<usize>]) -> Result<Self, ImplicationError> {
        let cells = imp
            .iter()
            .map(|row| row.iter().map(|&v| ElementSet::from([v])).collect())
            .collect();
        Self::new(zero, kind, cells, None)
    }

    pub(crate) fn check(&self) -> Result<(), ImplicationError> {
        let n = self.size;
        let bad = |m: String| Err(ImplicationError::Malformed(m));
        if n == 0 || self.zero >= n {
            return bad("empty table or zero out of range".into());
        }
        if self.imp.len() != n {
            return bad(format!("imp has {} rows, expected {}", self.imp.len(), n));
        }
        for (x, row) in self.imp.iter().enumerate() {
            if row.len() != n {
                return bad(format!("imp row {} has {} cells, expected {}", x, row.len(), n));
            }
            for (y, cell) in row.iter().enumerate() {
                if cell.is_empty() {
                    return bad(format!("cell ({}, {}) is empty", x, y));
                }
                if cell.iter().any(|&v| v >= n) {
                    return bad(format!("cell ({}, {}) out of range", x, y));
                }
                if self.kind != ImplicationKind::SetValued && cell.len() != 1 {
                    return bad(format!("cell ({}, {}) of a {:?} table is not a singleton", x, y, self.kind));
                }
            }
            if row[self.zero].len() != 1 {
                return bad(format!("cell ({}, 0) must be a singleton", x));
            }
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                return bad("names length".into());
            }
        }
        Ok(())
    }

    pub fn entry(&self, x: usize, y: usize) -> &ElementSet {
        &self.imp[x][y]
    }

    pub fn cells(&self) -> &[Vec<ElementSet>] {
        &self.imp
    }

    /// The cell's element when it is a singleton.
    pub fn single(&self, x: usize, y: usize) -> Option<usize> {
        let cell = &self.imp[x][y];
        if cell.len() == 1 {
            cell.first().copied()
        } else {
            None
        }
    }

    /// `x' = x -> 0`.
    pub fn comp(&self, x: usize) -> usize {
        self.single(x, self.zero).expect("x -> 0 is a singleton")
    }

    /// `1 = 0 -> 0`.
    pub fn one(&self) -> usize {
        self.comp(self.zero)
    }

    pub fn is_single_valued(&self) -> bool {
        self.imp.iter().flatten().all(|c| c.len() == 1)
    }

    pub fn max_cell_cardinality(&self) -> usize {
        self.imp.iter().flatten().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// `A -> B`, the union of `a -> b` over both argument sets.
    pub fn imp_sets(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        let mut out = ElementSet::new();
        for &x in a {
            for &y in b {
                out.extend(self.imp[x][y].iter().copied());
            }
        }
        out
    }

    /// Same cells, different kind tag. Fails if the cells break the new
    /// kind's invariants.
    pub fn with_kind(mut self, kind: ImplicationKind) -> Result<Self, ImplicationError> {
        self.kind = kind;
        self.check()?;
        Ok(self)
    }

    /// Overwrite one cell (for building controls and hand-edited tables).
    pub fn set_entry(&mut self, x: usize, y: usize, cell: ElementSet) -> Result<(), ImplicationError> {
        let old = std::mem::replace(&mut self.imp[x][y], cell);
        if let Err(e) = self.check() {
            self.imp[x][y] = old;
            return Err(e);
        }
        Ok(())
    }

    /// Cells where the two tables differ.
    pub fn diff(&self, other: &ImplicationTable) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size.min(other.size) {
            for y in 0..self.size.min(other.size) {
                if self.imp[x][y] != other.imp[x][y] {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn same_cells(&self, other: &ImplicationTable) -> bool {
        self.size == other.size && self.zero == other.zero && self.imp == other.imp
    }
}

/// Natural implication `x -> y = y + (x v y)'`.
pub fn natural_implication_table(e: &EffectAlgebra) -> Result<ImplicationTable, ImplicationError> {
    let order = induced_order(e);
    if !order.is_lattice {
        return Err(ImplicationError::NotLattice);
    }
    let cells = e
        .elements()
        .map(|x| {
            e.elements()
                .map(|y| {
                    let j = order.join(x, y).expect("lattice");
                    let v = e.sum(y, e.comp(j)).expect("(x v y)' <= y' so the sum is defined");
                    ElementSet::from([v])
                })
                .collect()
        })
        .collect();
    ImplicationTable::new(e.zero(), ImplicationKind::NaturalLattice, cells, e.names().map(<[_]>::to_vec))
}

/// Sasaki implication `x -> y = x' + (x ^ y)`.
pub fn sasaki_implication_table(e: &EffectAlgebra) -> Result<ImplicationTable, ImplicationError> {
    let order = induced_order(e);
    if !order.is_lattice {
        return Err(ImplicationError::NotLattice);
    }
    let cells = e
        .elements()
        .map(|x| {
            e.elements()
                .map(|y| {
                    let m = order.meet(x, y).expect("lattice");
                    let v = e.sum(e.comp(x), m).expect("x ^ y <= x = x'' so the sum is defined");
                    ElementSet::from([v])
                })
                .collect()
        })
        .collect();
    ImplicationTable::new(e.zero(), ImplicationKind::Sasaki, cells, e.names().map(<[_]>::to_vec))
}

/// Set-valued implication `x -> y = y + Max L(x', y')`.
pub fn set_implication_table(e: &EffectAlgebra) -> ImplicationTable {
    let cells = e
        .elements()
        .map(|x| {
            e.elements()
                .map(|y| {
                    max_lower_cone(e, e.comp(x), e.comp(y))
                        .into_iter()
                        .map(|m| e.sum(y, m).expect("m <= y' so y + m is defined"))
                        .collect()
                })
                .collect()
        })
        .collect();
    ImplicationTable::new(e.zero(), ImplicationKind::SetValued, cells, e.names().map(<[_]>::to_vec))
        .expect("set-valued table satisfies its invariants")
}

/// `a -> A`, the union of `a -> x` over `x` in `A`.
pub fn lift_to_sets(t: &ImplicationTable, a: usize, set: &ElementSet) -> Result<ElementSet, ImplicationError> {
    if set.is_empty() {
        return Err(ImplicationError::EmptyArgument);
    }
    Ok(t.imp_sets(&ElementSet::from([a]), set))
}

/// Check the implication laws appropriate to the table's kind over all
/// elements of `e`: the lattice laws (natural kind) or the set-valued laws.
/// Every failure is reported, not just the first.
pub fn check_implication_laws(e: &EffectAlgebra, t: &ImplicationTable) -> Result<Report, ImplicationError> {
    match t.kind {
        ImplicationKind::NaturalLattice => Ok(lattice_laws(e, t)),
        ImplicationKind::SetValued => Ok(set_valued_laws(e, t)),
        ImplicationKind::Sasaki => Err(ImplicationError::KindMismatch(ImplicationKind::Sasaki)),
    }
}

fn lattice_laws(e: &EffectAlgebra, t: &ImplicationTable) -> Report {
    let order = induced_order(e);
    let one = e.one();
    let c = |x: usize| e.comp(x);
    // Out-of-lattice or set-valued cells show up as failures, not panics.
    let imp = |x: usize, y: usize| t.single(x, y);
    let imp2 = |x: Option<usize>, y: Option<usize>| match (x, y) {
        (Some(x), Some(y)) => t.single(x, y),
        _ => None,
    };
    let join = |x: usize, y: usize| order.join(x, y);
    let n = e.size();
    let mut r = Report::new("natural implication laws");

    let mut c1 = Clause::new("th3 (i)");
    let mut c2 = Clause::new("th3 (ii)");
    let mut c3 = Clause::new("th3 (iii)");
    let mut c4 = Clause::new("th3 (iv)");
    let mut c5 = Clause::new("th3 (v)");
    for a in 0..n {
        for b in 0..n {
            c1.check((imp(a, b) == Some(one)) == e.leq(a, b), || {
                Witness::new(&[("a", a), ("b", b)], "a -> b = 1 differs from a <= b")
            });
            if e.leq(a, c(b)) {
                c2.check(e.sum(a, b) == imp(c(a), b), || Witness::new(&[("a", a), ("b", b)], "a + b != a' -> b"));
            }
            if e.leq(b, a) {
                c3.check(imp(a, b) == e.sum(c(a), b), || Witness::new(&[("a", a), ("b", b)], "a -> b != a' + b"));
                c4.check(imp(a, b) == imp(c(b), c(a)), || Witness::new(&[("a", a), ("b", b)], "a -> b != b' -> a'"));
            }
            if e.leq(a, b) {
                for d in 0..n {
                    let ok = matches!((imp(b, d), imp(a, d)), (Some(u), Some(v)) if e.leq(u, v));
                    c5.check(ok, || Witness::new(&[("a", a), ("b", b), ("c", d)], "b -> c not <= a -> c"));
                }
            }
        }
    }
    for cl in [c1, c2, c3, c4, c5] {
        r.push(cl);
    }

    let mut i = Clause::new("th4 (i)");
    let mut ii = Clause::new("th4 (ii)");
    for x in 0..n {
        i.check(imp(x, e.zero()) == Some(c(x)), || Witness::new(&[("x", x)], "x -> 0 != x'"));
        ii.check(imp(one, x) == Some(x), || Witness::new(&[("x", x)], "1 -> x != x"));
    }
    let mut iii = Clause::new("th4 (iii)");
    let mut iv = Clause::new("th4 (iv)");
    let mut v = Clause::new("th4 (v)");
    let mut vi = Clause::new("th4 (vi)");
    let mut vii = Clause::new("th4 (vii)");
    let mut viii = Clause::new("th4 (viii)");
    for x in 0..n {
        for y in 0..n {
            let w = || Witness::new(&[("x", x), ("y", y)], "");
            let xy = imp(x, y);
            let jxy = imp2(xy, Some(y)); // (x -> y) -> y
            iii.check(imp2(Some(x), imp(y, x)) == Some(one), w);
            iv.check(jxy.is_some() && jxy == join(x, y), w);
            v.check(imp2(jxy, Some(y)) == xy, w);
            vi.check(imp2(Some(x), jxy) == Some(one), w);
            vii.check(imp2(Some(y), jxy) == Some(one), w);
            viii.check(imp2(Some(c(y)), jxy.map(c)) == xy, w);
        }
    }
    for cl in [i, ii, iii, iv, v, vi, vii, viii] {
        r.push(cl);
    }
    r
}

fn set_valued_laws(e: &EffectAlgebra, t: &ImplicationTable) -> Report {
    let one = ElementSet::from([e.one()]);
    let c = |x: usize| e.comp(x);
    let single = |x: Option<usize>| x.map(|v| ElementSet::from([v]));
    let n = e.size();
    let mut r = Report::new("set-valued implication laws");
    let mut cl: Vec<Clause> = ["(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)"]
        .iter()
        .map(|s| Clause::new(format!("th5 {}", s)))
        .collect();
    for a in 0..n {
        cl[4].check(single(Some(c(a))).as_ref() == Some(t.entry(a, e.zero())), || Witness::new(&[("a", a)], "a -> 0 != a'"));
        cl[5].check(t.entry(e.one(), a) == &ElementSet::from([a]), || Witness::new(&[("a", a)], "1 -> a != a"));
        for b in 0..n {
            let ab = t.entry(a, b);
            let w = || Witness::new(&[("a", a), ("b", b)], "");
            cl[0].check((ab == &one) == e.leq(a, b), w);
            if e.leq(a, c(b)) {
                cl[1].check(single(e.sum(a, b)).as_ref() == Some(t.entry(c(a), b)), w);
            }
            if e.leq(b, a) {
                cl[2].check(single(e.sum(c(a), b)).as_ref() == Some(ab), w);
                cl[3].check(ab == t.entry(c(b), c(a)), w);
            }
            let cone = max_lower_cone(e, c(a), c(b));
            let lifted = lift_to_sets(t, c(b), &cone).expect("lower cone is non-empty");
            cl[6].check(&lifted == ab, || {
                Witness::new(&[("a", a), ("b", b)], format!("b' -> Max L(a',b') = {:?}, a -> b = {:?}", lifted, ab))
            });
        }
    }
    for c in cl {
        r.push(c);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn cell(t: &ImplicationTable, x: usize, y: usize) -> usize {
        t.single(x, y).unwrap()
    }

    #[test]
    fn classical_table_on_two_elements() {
        let t = natural_implication_table(&models::e2()).unwrap();
        assert_eq!([cell(&t, 0, 0), cell(&t, 0, 1), cell(&t, 1, 0), cell(&t, 1, 1)], [1, 1, 0, 1]);
        let s = sasaki_implication_table(&models::e2()).unwrap();
        assert!(t.diff(&s).is_empty());
    }

    #[test]
    fn natural_table_on_three_chain() {
        let t = natural_implication_table(&models::c3()).unwrap();
        let expected = [[2, 2, 2], [1, 2, 2], [0, 1, 2]];
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(cell(&t, x, y), expected[x][y], "cell ({x},{y})");
            }
        }
    }

    #[test]
    fn sasaki_cells_on_three_chain() {
        let t = sasaki_implication_table(&models::c3()).unwrap();
        assert_eq!(cell(&t, 1, 0), 1);
        assert_eq!(cell(&t, 2, 1), 1);
    }

    #[test]
    fn natural_cell_on_boolean_square() {
        let t = natural_implication_table(&models::b4()).unwrap();
        assert_eq!(cell(&t, 1, 2), 2);
    }

    #[test]
    fn set_valued_agrees_with_natural_on_lattices() {
        for e in [models::e2(), models::c3(), models::b4(), models::hs(), models::c4()] {
            let nat = natural_implication_table(&e).unwrap();
            let set = set_implication_table(&e);
            assert!(nat.diff(&set).is_empty());
            assert_eq!(set.max_cell_cardinality(), 1);
            for x in e.elements() {
                assert_eq!(set.entry(x, x), &ElementSet::from([e.one()]));
            }
        }
        assert_eq!(set_implication_table(&models::c3()).entry(1, 0), &ElementSet::from([1]));
    }

    #[test]
    fn lifting() {
        let t = natural_implication_table(&models::e2()).unwrap();
        assert_eq!(lift_to_sets(&t, 1, &ElementSet::from([0, 1])).unwrap(), ElementSet::from([0, 1]));
        assert_eq!(lift_to_sets(&t, 0, &ElementSet::from([1])).unwrap(), t.entry(0, 1).clone());
        assert_eq!(lift_to_sets(&t, 0, &ElementSet::new()), Err(ImplicationError::EmptyArgument));
        let c3 = natural_implication_table(&models::c3()).unwrap();
        assert_eq!(lift_to_sets(&c3, 2, &ElementSet::from([0, 1])).unwrap(), ElementSet::from([0, 1]));
    }

    #[test]
    fn laws_hold_on_small_models() {
        for e in [models::e2(), models::c3(), models::b4(), models::hs(), models::c4()] {
            let nat = natural_implication_table(&e).unwrap();
            let r = check_implication_laws(&e, &nat).unwrap();
            assert!(r.passed(), "{r}");
            let set = set_implication_table(&e);
            let r = check_implication_laws(&e, &set).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn join_law_instance_on_three_chain() {
        // (x -> y) -> y = x v y at x = a, y = 0 gives a
        let t = natural_implication_table(&models::c3()).unwrap();
        let xy = cell(&t, 1, 0);
        assert_eq!(cell(&t, xy, 0), 1);
    }

    #[test]
    fn sasaki_has_no_suite() {
        let e = models::c3();
        let s = sasaki_implication_table(&e).unwrap();
        assert_eq!(check_implication_laws(&e, &s), Err(ImplicationError::KindMismatch(ImplicationKind::Sasaki)));
    }

    #[test]
    fn broken_natural_table_is_reported() {
        let e = models::c3();
        let mut t = natural_implication_table(&e).unwrap();
        t.set_entry(1, 0, ElementSet::from([2])).unwrap();
        let r = check_implication_laws(&e, &t).unwrap();
        assert!(r.has_failure("th3 (i)", &[("a", 1), ("b", 0)]));
        assert!(r.has_failure("th4 (i)", &[("x", 1)]));
    }

    #[test]
    fn malformed_tables_rejected() {
        let empty = vec![vec![ElementSet::new()]];
        assert!(ImplicationTable::new(0, ImplicationKind::SetValued, empty, None).is_err());
        let two = vec![
            vec![ElementSet::from([1]), ElementSet::from([0, 1])],
            vec![ElementSet::from([0]), ElementSet::from([1])],
        ];
        assert!(ImplicationTable::new(0, ImplicationKind::NaturalLattice, two.clone(), None).is_err());
        assert!(ImplicationTable::new(0, ImplicationKind::SetValued, two, None).is_ok());
    }
}
