//! Passing between effect algebras and implication algebras.
//!
//! `effect_to_implication` builds the natural table of a lattice-ordered
//! algebra or the set-valued table otherwise; `implication_to_effect`
//! recovers `+`, `'`, `0`, `1` from an implication table by
//!
//! ```text
//! x' = x -> 0,   1 = 0 -> 0,   x + y = x' -> y  defined iff  x -> y' = 1.
//! ```
//!
//! Transforms never permute indices, so round trips compare tables literally.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, EffectAlgebra, EffectTables, ValidationReport};
use crate::implication::{
    lift_to_sets, natural_implication_table, set_implication_table, ElementSet, ImplicationKind,
    ImplicationTable,
};
use crate::report::{Clause, Report, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("not an implication algebra: the derived structure violates the effect axioms\n{report}{diagnosis}")]
    NotAnImplicationAlgebra { report: ValidationReport, diagnosis: String },
    #[error("set-valued table cannot be converted: cell ({0}, {1}) consulted by the sum is not a singleton")]
    SetValuedNotRoundTrippable(usize, usize),
    #[error("table is not single-valued at cell ({0}, {1})")]
    NotSingleValued(usize, usize),
    #[error("validation mode {0:?} needs a single-valued table")]
    KindMismatch(AxiomMode),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A single-valued implication algebra `(I, ->, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationAlgebra {
    pub zero: usize,
    pub imp: Vec<Vec<usize>>,
}

impl ImplicationAlgebra {
    pub fn size(&self) -> usize {
        self.imp.len()
    }

    pub fn comp(&self, x: usize) -> usize {
        self.imp[x][self.zero]
    }

    pub fn one(&self) -> usize {
        self.comp(self.zero)
    }

    pub fn to_table(&self, kind: ImplicationKind) -> Result<ImplicationTable, crate::implication::ImplicationError> {
        ImplicationTable::single_valued(self.zero, kind, &self.imp)
    }
}

impl TryFrom<&ImplicationTable> for ImplicationAlgebra {
    type Error = TransformError;

    fn try_from(t: &ImplicationTable) -> Result<Self, Self::Error> {
        let mut imp = vec![vec![0; t.size]; t.size];
        for x in t.elements() {
            for y in t.elements() {
                imp[x][y] = t.single(x, y).ok_or(TransformError::NotSingleValued(x, y))?;
            }
        }
        Ok(ImplicationAlgebra { zero: t.zero, imp })
    }
}

/// IL(E) for lattice-ordered `e`, I(E) otherwise.
pub fn effect_to_implication(e: &EffectAlgebra) -> ImplicationTable {
    match natural_implication_table(e) {
        Ok(t) => t,
        Err(_) => set_implication_table(e),
    }
}

fn derived_tables(size: usize, zero: usize, comp: Vec<usize>, one: usize, plus: Vec<Vec<Option<usize>>>) -> EffectTables {
    EffectTables { size, names: None, zero, one, comp, plus }
}

fn finish(tables: EffectTables, diagnosis: impl FnOnce() -> String) -> Result<EffectAlgebra, TransformError> {
    match EffectAlgebra::new(tables) {
        Ok(e) => Ok(e),
        Err(AlgebraError::Invalid(report)) => {
            Err(TransformError::NotAnImplicationAlgebra { report, diagnosis: diagnosis() })
        }
        Err(e) => Err(e.into()),
    }
}

/// EL(I) / E(I) for a single-valued implication algebra.
pub fn implication_to_effect(i: &ImplicationAlgebra) -> Result<EffectAlgebra, TransformError> {
    let n = i.size();
    let one = i.one();
    let comp: Vec<usize> = (0..n).map(|x| i.comp(x)).collect();
    let plus = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| (i.imp[x][comp[y]] == one).then(|| i.imp[comp[x]][y]))
                .collect()
        })
        .collect();
    finish(derived_tables(n, i.zero, comp, one, plus), || {
        match i.to_table(ImplicationKind::NaturalLattice) {
            Ok(t) => diagnose(&t),
            Err(e) => format!("{e}\n"),
        }
    })
}

/// E(T) for a possibly set-valued table. Only the cells `x -> 0` and
/// `x' -> y` (for `x -> y' = 1`) are consulted; those must be singletons.
pub fn table_to_effect(t: &ImplicationTable) -> Result<EffectAlgebra, TransformError> {
    let n = t.size;
    let one = t.one();
    let comp: Vec<usize> = t.elements().map(|x| t.comp(x)).collect();
    let one_set = ElementSet::from([one]);
    let mut plus = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            if t.entry(x, comp[y]) == &one_set {
                let v = t.single(comp[x], y).ok_or(TransformError::SetValuedNotRoundTrippable(comp[x], y))?;
                plus[x][y] = Some(v);
            }
        }
    }
    let mut tables = derived_tables(n, t.zero, comp, one, plus);
    tables.names = t.names.clone();
    finish(tables, || diagnose(t))
}

fn diagnose(t: &ImplicationTable) -> String {
    let mode = if t.is_single_valued() { AxiomMode::Leia } else { AxiomMode::Eia };
    match validate_implication_axioms(t, mode) {
        Ok(r) if !r.passed() => {
            let tags: Vec<&str> = r.failed_clauses().map(|c| c.tag.as_str()).collect();
            format!("failing implication-algebra clauses ({:?}): {}\n", mode, tags.join(", "))
        }
        _ => String::new(),
    }
}

/// Which axiom list to check: the lattice list (twelve clauses) or the
/// general list (eight clauses plus the chain condition).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomMode {
    Leia,
    Eia,
}

/// Set-lifted evaluation helpers over a table.
struct Lifted<'a> {
    t: &'a ImplicationTable,
    zero: ElementSet,
    one: ElementSet,
}

impl<'a> Lifted<'a> {
    fn new(t: &'a ImplicationTable) -> Self {
        Lifted { t, zero: ElementSet::from([t.zero]), one: ElementSet::from([t.one()]) }
    }

    fn el(&self, x: usize) -> ElementSet {
        ElementSet::from([x])
    }

    fn imp(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        self.t.imp_sets(a, b)
    }

    fn prime(&self, a: &ElementSet) -> ElementSet {
        self.t.imp_sets(a, &self.zero)
    }

    fn is_one(&self, a: &ElementSet) -> bool {
        a == &self.one
    }
}

/// Clause-by-clause validation of an implication table against the lattice
/// (`Leia`, twelve clauses) or general (`Eia`, eight clauses) axiom list.
///
/// Set-valued tables are read through set lifting: `= 1` means the value set
/// is `{1}` and equalities are set equalities. Biconditional clauses are
/// checked in both directions, and their "in this case" equality on every
/// triple where either side's hypothesis holds.
pub fn validate_implication_axioms(t: &ImplicationTable, mode: AxiomMode) -> Result<Report, TransformError> {
    if mode == AxiomMode::Leia && !t.is_single_valued() {
        return Err(TransformError::KindMismatch(mode));
    }
    let l = Lifted::new(t);
    let n = t.size;
    let title = match mode {
        AxiomMode::Leia => "lattice effect implication algebra axioms",
        AxiomMode::Eia => "effect implication algebra axioms",
    };
    let mut r = Report::new(title);

    let mut c_i = Clause::new("(i)");
    let mut c_ii = Clause::new("(ii)");
    let mut c_iii = Clause::new("(iii)");
    let mut c_iv = Clause::new("(iv)");
    let mut c_v = Clause::new("(v)");
    let mut c_vi = Clause::new("(vi)");
    let mut c_vii = Clause::new("(vii)");
    let mut c_viii = Clause::new("(viii)");
    let mut c_ix = Clause::new("(ix)");
    let mut c_x = Clause::new("(x)");
    let mut c_xi = Clause::new("(xi)");
    let mut c_xii = Clause::new("(xii)");

    for x in 0..n {
        let xs = l.el(x);
        c_i.check(l.is_one(&l.imp(&l.zero, &xs)), || Witness::new(&[("x", x)], "0 -> x != 1"));
        c_i.check(l.is_one(&l.imp(&xs, &xs)), || Witness::new(&[("x", x)], "x -> x != 1"));
        c_i.check(l.is_one(&l.imp(&xs, &l.one)), || Witness::new(&[("x", x)], "x -> 1 != 1"));
        c_v.check(l.prime(&l.prime(&xs)) == xs, || Witness::new(&[("x", x)], "x'' != x"));
        for y in 0..n {
            let ys = l.el(y);
            let xy = l.imp(&xs, &ys);
            let yx = l.imp(&ys, &xs);
            let w2 = |d: &str| Witness::new(&[("x", x), ("y", y)], d);
            if l.is_one(&xy) && l.is_one(&yx) {
                c_ii.check(x == y, || w2("x -> y = y -> x = 1 but x != y"));
            }
            if l.is_one(&xy) {
                c_iv.check(l.is_one(&l.imp(&l.prime(&ys), &l.prime(&xs))), || w2("y' -> x' != 1"));
                c_ix.check(yx == l.imp(&l.prime(&xs), &l.prime(&ys)), || w2("y -> x != x' -> y'"));
            }
            let join = l.imp(&xy, &ys); // (x -> y) -> y
            c_vi.check(l.is_one(&l.imp(&xs, &join)), || w2("x -> ((x -> y) -> y) != 1"));
            c_vii.check(l.is_one(&l.imp(&ys, &join)), || w2("y -> ((x -> y) -> y) != 1"));
            c_xi.check(l.imp(&l.prime(&ys), &l.prime(&join)) == xy, || w2("y' -> ((x -> y) -> y)' != x -> y"));
            c_xii.check(l.is_one(&l.imp(&xs, &yx)), || w2("x -> (y -> x) != 1"));
            for z in 0..n {
                let zs = l.el(z);
                let w3 = |d: &str| Witness::new(&[("x", x), ("y", y), ("z", z)], d);
                let xz = l.imp(&xs, &zs);
                let yz = l.imp(&ys, &zs);
                if l.is_one(&xy) && l.is_one(&yz) {
                    c_iii.check(l.is_one(&xz), || w3("x -> y = y -> z = 1 but x -> z != 1"));
                }
                if l.is_one(&xz) && l.is_one(&yz) {
                    c_viii.check(l.is_one(&l.imp(&join, &zs)), || w3("((x -> y) -> y) -> z != 1"));
                }
                // x -> y' = (x' -> y) -> z' = 1  iff  y -> z' = x -> (y' -> z)' = 1
                let xpy = l.imp(&l.prime(&xs), &ys);
                let ypz = l.imp(&l.prime(&ys), &zs);
                let left = l.is_one(&l.imp(&xs, &l.prime(&ys))) && l.is_one(&l.imp(&xpy, &l.prime(&zs)));
                let right = l.is_one(&l.imp(&ys, &l.prime(&zs))) && l.is_one(&l.imp(&xs, &l.prime(&ypz)));
                if left || right {
                    c_x.check(left == right, || {
                        w3(if left { "left side holds, right side fails" } else { "right side holds, left side fails" })
                    });
                    let lhs = l.imp(&l.prime(&xpy), &zs);
                    let rhs = l.imp(&l.prime(&xs), &ypz);
                    c_x.check(lhs == rhs, || w3("(x' -> y)' -> z != x' -> (y' -> z)"));
                }
            }
        }
    }

    match mode {
        AxiomMode::Leia => {
            for c in [c_i, c_ii, c_iii, c_iv, c_v, c_vi, c_vii, c_viii, c_ix, c_x, c_xi, c_xii] {
                r.push(c);
            }
        }
        AxiomMode::Eia => {
            // The general list renumbers: (vi) = lattice (ix), (vii) = lattice (x),
            // (viii) = lattice (xii).
            let rename = |mut c: Clause, tag: &str| {
                c.tag = tag.into();
                c
            };
            for c in [c_i, c_ii, c_iii, c_iv, c_v] {
                r.push(c);
            }
            r.push(rename(c_ix, "(vi)"));
            r.push(rename(c_x, "(vii)"));
            r.push(rename(c_xii, "(viii)"));
            r.push(Clause::vacuous("chain", "finite carrier: no infinite sequence of distinct elements"));
        }
    }
    Ok(r)
}

/// Identity `x -> y = y' -> Max L(x', y')` on I(E), for all `x`, `y`.
pub fn check_identity_11(e: &EffectAlgebra) -> Report {
    let t = effect_to_implication(e);
    let mut r = Report::new("identity x -> y = y' -> Max L(x', y')");
    let mut c = Clause::new("(11)");
    for x in e.elements() {
        for y in e.elements() {
            let cone = crate::algebra::max_lower_cone(e, e.comp(x), e.comp(y));
            let lifted = lift_to_sets(&t, e.comp(y), &cone).expect("cone is non-empty");
            c.check(&lifted == t.entry(x, y), || {
                Witness::new(&[("x", x), ("y", y)], format!("{:?} vs {:?}", lifted, t.entry(x, y)))
            });
        }
    }
    r.push(c);
    r
}

/// The same identity, with `<=` and `'` read off the table itself
/// (`x <= y` iff `x -> y = 1`).
pub fn check_identity_11_table(t: &ImplicationTable) -> Report {
    let l = Lifted::new(t);
    let n = t.size;
    let leq = |x: usize, y: usize| l.is_one(t.entry(x, y));
    let mut r = Report::new("identity x -> y = y' -> Max L(x', y')");
    let mut c = Clause::new("(11)");
    for x in 0..n {
        for y in 0..n {
            let (a, b) = (t.comp(x), t.comp(y));
            let cone: Vec<usize> = (0..n).filter(|&z| leq(z, a) && leq(z, b)).collect();
            let max: ElementSet = cone
                .iter()
                .copied()
                .filter(|&z| !cone.iter().any(|&w| w != z && leq(z, w)))
                .collect();
            let lifted = if max.is_empty() { ElementSet::new() } else { l.imp(&l.el(b), &max) };
            c.check(&lifted == t.entry(x, y), || Witness::new(&[("x", x), ("y", y)], ""));
        }
    }
    r.push(c);
    r
}

/// Input to [`round_trip_check`].
#[derive(Clone, Debug)]
pub enum RoundTripInput {
    Effect(EffectAlgebra),
    Implication(ImplicationTable),
}

/// E -> I(E) -> E(I(E)) compared with E, or I -> E(I) -> I(E(I)) compared
/// with I. For an effect algebra whose table is set-valued the implication
/// direction is also run on I(E).
pub fn round_trip_check(input: &RoundTripInput) -> Result<Report, TransformError> {
    match input {
        RoundTripInput::Effect(e) => {
            let t = effect_to_implication(e);
            let back = table_to_effect(&t)?;
            let mut r = Report::new("round trip E -> I(E) -> E");
            r.push(compare_effect(e, &back));
            let again = effect_to_implication(&back);
            let mut c = Clause::new("I(E(I(E))) = I(E)");
            for (x, y) in t.diff(&again) {
                c.failures.push(Witness::new(&[("x", x), ("y", y)], "cell differs"));
            }
            c.instances = t.size * t.size;
            r.push(c);
            Ok(r)
        }
        RoundTripInput::Implication(t) => {
            let e = table_to_effect(t)?;
            let again = effect_to_implication(&e);
            let mut r = Report::new("round trip I -> E(I) -> I");
            let mut c = Clause::new("I(E(I)) = I");
            c.instances = t.size * t.size;
            for (x, y) in t.diff(&again) {
                c.failures.push(Witness::new(
                    &[("x", x), ("y", y)],
                    format!("{:?} vs {:?}", t.entry(x, y), again.entry(x, y)),
                ));
            }
            r.push(c);
            Ok(r)
        }
    }
}

fn compare_effect(a: &EffectAlgebra, b: &EffectAlgebra) -> Clause {
    let mut c = Clause::new("E(I(E)) = E");
    c.check(a.zero() == b.zero() && a.one() == b.one(), || Witness::new(&[], "constants differ"));
    for x in a.elements() {
        c.check(a.comp(x) == b.comp(x), || Witness::new(&[("x", x)], "complement differs"));
        for y in a.elements() {
            c.check(a.sum(x, y) == b.sum(x, y), || Witness::new(&[("x", x), ("y", y)], "sum differs"));
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn classical() -> ImplicationTable {
        ImplicationTable::single_valued(0, ImplicationKind::NaturalLattice, &[vec![1, 1], vec![0, 1]]).unwrap()
    }

    #[test]
    fn classical_table_gives_two_element_algebra() {
        let i = ImplicationAlgebra::try_from(&classical()).unwrap();
        let e = implication_to_effect(&i).unwrap();
        assert!(e.same_tables(&models::e2()));
    }

    #[test]
    fn round_trips_of_small_models() {
        for e in [models::e2(), models::c3(), models::b4(), models::hs(), models::c4()] {
            let t = effect_to_implication(&e);
            assert_eq!(t.kind, ImplicationKind::NaturalLattice);
            let i = ImplicationAlgebra::try_from(&t).unwrap();
            assert!(implication_to_effect(&i).unwrap().same_tables(&e));
            let r = round_trip_check(&RoundTripInput::Effect(e.clone())).unwrap();
            assert!(r.passed(), "{r}");
            let r = round_trip_check(&RoundTripInput::Implication(t)).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn lattice_axioms_hold_for_small_models() {
        for e in [models::e2(), models::c3(), models::b4(), models::hs(), models::c4()] {
            let t = effect_to_implication(&e);
            let r = validate_implication_axioms(&t, AxiomMode::Leia).unwrap();
            assert!(r.passed(), "{r}");
            let r = validate_implication_axioms(&t, AxiomMode::Eia).unwrap();
            assert!(r.passed(), "{r}");
            assert!(check_identity_11(&e).passed());
            assert!(check_identity_11_table(&t).passed());
        }
    }

    #[test]
    fn clause_xi_instance_on_three_chain() {
        // x = 1, y = a: a' -> ((1 -> a) -> a)' = a -> 1' = a -> 0 = a = 1 -> a
        let t = effect_to_implication(&models::c3());
        let s = |x, y| t.single(x, y).unwrap();
        let (a, one) = (1, 2);
        let join = s(s(one, a), a);
        assert_eq!(s(t.comp(a), t.comp(join)), a);
        assert_eq!(s(one, a), a);
    }

    #[test]
    fn antisymmetry_break_is_localized() {
        let mut t = classical();
        t.set_entry(1, 0, ElementSet::from([1])).unwrap();
        let r = validate_implication_axioms(&t, AxiomMode::Leia).unwrap();
        assert!(r.has_failure("(ii)", &[("x", 1), ("y", 0)]), "{r}");
        let i = ImplicationAlgebra::try_from(&t).unwrap();
        assert!(matches!(implication_to_effect(&i), Err(TransformError::NotAnImplicationAlgebra { .. })));
    }

    #[test]
    fn set_valued_table_rejected_in_lattice_mode() {
        let cells = vec![
            vec![ElementSet::from([1]), ElementSet::from([1])],
            vec![ElementSet::from([0]), ElementSet::from([0, 1])],
        ];
        let t = ImplicationTable::new(0, ImplicationKind::SetValued, cells, None).unwrap();
        assert_eq!(validate_implication_axioms(&t, AxiomMode::Leia), Err(TransformError::KindMismatch(AxiomMode::Leia)));
        assert!(validate_implication_axioms(&t, AxiomMode::Eia).is_ok());
    }
}
