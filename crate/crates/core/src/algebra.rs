//! Finite effect algebras as explicit tables.
//!
//! An [`EffectTables`] value is an unchecked candidate (what a model file
//! holds); an [`EffectAlgebra`] is a candidate that passed
//! [`validate_effect_axioms`]. Elements are indices `0..size`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{Clause, Report, Witness};

/// Raw tables of a candidate effect algebra. `None` in `plus` marks an
/// undefined sum and serializes as `null`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectTables {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub zero: usize,
    pub one: usize,
    pub comp: Vec<usize>,
    pub plus: Vec<Vec<Option<usize>>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("not an effect algebra:\n{0}")]
    Invalid(ValidationReport),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// The axiom or derived law a [`Violation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    E1,
    E2,
    E3,
    E4,
    /// x'' = x
    Involution,
    /// 0' = 1
    ZeroComplement,
    /// 0 = 1
    Degenerate,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::E1 => "E1 (commutativity)",
            Axiom::E2 => "E2 (associativity)",
            Axiom::E3 => "E3 (x+y=1 iff y=x')",
            Axiom::E4 => "E4 (1+x defined only for x=0)",
            Axiom::Involution => "x''=x",
            Axiom::ZeroComplement => "0'=1",
            Axiom::Degenerate => "degenerate algebra (0=1)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when some violation of `axiom` has exactly `witness` as its tuple.
    pub fn contains(&self, axiom: Axiom, witness: &[usize]) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom && v.witness == witness)
    }

    pub fn axioms(&self) -> BTreeSet<Axiom> {
        self.violations.iter().map(|v| v.axiom).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return writeln!(f, "E1-E4: pass");
        }
        for v in &self.violations {
            writeln!(f, "{}: witness {:?}: {}", v.axiom, v.witness, v.detail)?;
        }
        Ok(())
    }
}

fn show(v: Option<usize>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "undefined".into(),
    }
}

/// Shape checks: every row has `size` entries and every index is in range.
pub fn check_shape(t: &EffectTables) -> Result<(), AlgebraError> {
    let n = t.size;
    let bad = |msg: String| Err(AlgebraError::MalformedTable(msg));
    if n == 0 {
        return bad("size must be positive".into());
    }
    if t.plus.len() != n {
        return bad(format!("plus has {} rows, expected {}", t.plus.len(), n));
    }
    for (i, row) in t.plus.iter().enumerate() {
        if row.len() != n {
            return bad(format!("plus row {} has {} entries, expected {}", i, row.len(), n));
        }
        if let Some(j) = row.iter().position(|e| matches!(e, Some(v) if *v >= n)) {
            return bad(format!("plus[{}][{}] out of range", i, j));
        }
    }
    if t.comp.len() != n {
        return bad(format!("comp has {} entries, expected {}", t.comp.len(), n));
    }
    if let Some(i) = t.comp.iter().position(|&c| c >= n) {
        return bad(format!("comp[{}] out of range", i));
    }
    if t.zero >= n || t.one >= n {
        return bad("zero/one out of range".into());
    }
    if let Some(names) = &t.names {
        if names.len() != n {
            return bad(format!("names has {} entries, expected {}", names.len(), n));
        }
    }
    Ok(())
}

/// Check E1-E4 plus the involution laws and non-degeneracy, enumerating
/// every pair and triple. Composite sums are undefined whenever an inner
/// sum is.
pub fn validate_effect_axioms(t: &EffectTables) -> Result<ValidationReport, AlgebraError> {
    check_shape(t)?;
    let n = t.size;
    let p = &t.plus;
    let mut violations = Vec::new();
    let mut push = |axiom, witness: Vec<usize>, detail: String| {
        violations.push(Violation { axiom, witness, detail })
    };

    if t.zero == t.one {
        push(Axiom::Degenerate, vec![t.zero], "zero and one coincide".into());
    }
    for x in 0..n {
        for y in x..n {
            if p[x][y] != p[y][x] {
                push(
                    Axiom::E1,
                    vec![x, y],
                    format!("{}+{} = {} but {}+{} = {}", x, y, show(p[x][y]), y, x, show(p[y][x])),
                );
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let left = p[x][y].and_then(|s| p[s][z]);
                let right = p[y][z].and_then(|s| p[x][s]);
                if left != right {
                    push(
                        Axiom::E2,
                        vec![x, y, z],
                        format!("({}+{})+{} = {} but {}+({}+{}) = {}", x, y, z, show(left), x, y, z, show(right)),
                    );
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let sums_to_one = p[x][y] == Some(t.one);
            if sums_to_one != (y == t.comp[x]) {
                let detail = if sums_to_one {
                    format!("{}+{} = 1 but {}' = {}", x, y, x, t.comp[x])
                } else {
                    format!("{}' = {} but {}+{} = {}", x, y, x, y, show(p[x][y]))
                };
                push(Axiom::E3, vec![x, y], detail);
            }
        }
    }
    for x in 0..n {
        if x != t.zero && p[t.one][x].is_some() {
            push(Axiom::E4, vec![x], format!("1+{} = {} is defined", x, show(p[t.one][x])));
        }
    }
    for x in 0..n {
        if t.comp[t.comp[x]] != x {
            push(Axiom::Involution, vec![x], format!("{}'' = {}", x, t.comp[t.comp[x]]));
        }
    }
    if t.comp[t.zero] != t.one {
        push(Axiom::ZeroComplement, vec![t.zero], format!("0' = {}", t.comp[t.zero]));
    }
    Ok(ValidationReport { violations })
}

/// A validated finite effect algebra. Immutable; the induced order is
/// computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectAlgebra {
    tables: EffectTables,
    leq: Vec<Vec<bool>>,
}

impl EffectAlgebra {
    pub fn new(tables: EffectTables) -> Result<Self, AlgebraError> {
        let report = validate_effect_axioms(&tables)?;
        if !report.is_ok() {
            return Err(AlgebraError::Invalid(report));
        }
        let leq = leq_matrix(&tables);
        Ok(EffectAlgebra { tables, leq })
    }

    pub fn size(&self) -> usize {
        self.tables.size
    }

    pub fn zero(&self) -> usize {
        self.tables.zero
    }

    pub fn one(&self) -> usize {
        self.tables.one
    }

    pub fn comp(&self, x: usize) -> usize {
        self.tables.comp[x]
    }

    pub fn sum(&self, x: usize, y: usize) -> Option<usize> {
        self.tables.plus[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.tables.names.as_deref()
    }

    pub fn tables(&self) -> &EffectTables {
        &self.tables
    }

    pub fn into_tables(self) -> EffectTables {
        self.tables
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.tables.size
    }

    /// Same algebra with display names attached.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, AlgebraError> {
        if names.len() != self.size() {
            return Err(AlgebraError::MalformedTable("names length".into()));
        }
        self.tables.names = Some(names);
        Ok(self)
    }

    /// Table equality on definedness and values (names are ignored).
    pub fn same_tables(&self, other: &EffectAlgebra) -> bool {
        let (a, b) = (&self.tables, &other.tables);
        a.size == b.size && a.zero == b.zero && a.one == b.one && a.comp == b.comp && a.plus == b.plus
    }

    /// Lattice-ordered iff every pair has a join and a meet.
    pub fn is_lattice(&self) -> bool {
        induced_order(self).is_lattice
    }
}

/// `leq[x][y]` iff `x + z = y` for some `z`.
fn leq_matrix(t: &EffectTables) -> Vec<Vec<bool>> {
    let n = t.size;
    let mut leq = vec![vec![false; n]; n];
    for x in 0..n {
        for s in t.plus[x].iter().flatten() {
            leq[x][*s] = true;
        }
    }
    leq
}

/// The induced order, with join and meet tables when it is a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStructure {
    pub leq: Vec<Vec<bool>>,
    pub is_lattice: bool,
    pub join: Option<Vec<Vec<usize>>>,
    pub meet: Option<Vec<Vec<usize>>>,
}

impl OrderStructure {
    pub fn from_leq(leq: Vec<Vec<bool>>) -> Self {
        let n = leq.len();
        let bound = |x: usize, y: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&z| if upper { leq[x][z] && leq[y][z] } else { leq[z][x] && leq[z][y] })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&w| if upper { leq[c][w] } else { leq[w][c] }))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        let mut is_lattice = true;
        'outer: for x in 0..n {
            for y in 0..n {
                match (bound(x, y, true), bound(x, y, false)) {
                    (Some(j), Some(m)) => {
                        join[x][y] = j;
                        meet[x][y] = m;
                    }
                    _ => {
                        is_lattice = false;
                        break 'outer;
                    }
                }
            }
        }
        OrderStructure {
            leq,
            is_lattice,
            join: is_lattice.then_some(join),
            meet: is_lattice.then_some(meet),
        }
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        self.join.as_ref().map(|j| j[x][y])
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.meet.as_ref().map(|m| m[x][y])
    }
}

pub fn induced_order(e: &EffectAlgebra) -> OrderStructure {
    OrderStructure::from_leq(e.leq.clone())
}

/// Maximal elements of the lower cone `L(x, y)`. Never empty: 0 is a
/// common lower bound.
pub fn max_lower_cone(e: &EffectAlgebra, x: usize, y: usize) -> BTreeSet<usize> {
    let cone: Vec<usize> = e.elements().filter(|&z| e.leq(z, x) && e.leq(z, y)).collect();
    cone.iter()
        .copied()
        .filter(|&z| !cone.iter().any(|&w| w != z && e.leq(z, w)))
        .collect()
}

/// Check each clause of the basic lemma on effect algebras over every
/// applicable tuple. Works on raw tables so that it can be cross-checked
/// against [`validate_effect_axioms`]; the order used is the one induced by
/// the `plus` table.
pub fn check_basic_laws(t: &EffectTables) -> Result<Report, AlgebraError> {
    check_shape(t)?;
    let n = t.size;
    let p = &t.plus;
    let c = &t.comp;
    let leq = leq_matrix(t);
    let le = |a: Option<usize>, b: Option<usize>| matches!((a, b), (Some(a), Some(b)) if leq[a][b]);
    let mut report = Report::new("basic effect-algebra laws");

    let mut poset = Clause::new("order");
    for a in 0..n {
        poset.check(leq[a][a], || Witness::new(&[("a", a)], "not reflexive"));
        poset.check(leq[t.zero][a] && leq[a][t.one], || Witness::new(&[("a", a)], "0 <= a <= 1 fails"));
        for b in 0..n {
            if a != b {
                poset.check(!(leq[a][b] && leq[b][a]), || Witness::new(&[("a", a), ("b", b)], "not antisymmetric"));
            }
            for d in 0..n {
                if leq[a][b] && leq[b][d] {
                    poset.check(leq[a][d], || Witness::new(&[("a", a), ("b", b), ("c", d)], "not transitive"));
                }
            }
        }
    }
    report.push(poset);

    let mut i = Clause::new("(i)");
    for a in 0..n {
        for b in 0..n {
            if leq[a][b] {
                i.check(leq[c[b]][c[a]], || Witness::new(&[("a", a), ("b", b)], "a<=b but b' not <= a'"));
            }
        }
    }
    report.push(i);

    let mut ii = Clause::new("(ii)");
    for a in 0..n {
        ii.check(c[c[a]] == a, || Witness::new(&[("a", a)], format!("a'' = {}", c[c[a]])));
    }
    report.push(ii);

    let mut iii = Clause::new("(iii)");
    for a in 0..n {
        for b in 0..n {
            iii.check(p[a][b].is_some() == leq[a][c[b]], || {
                Witness::new(&[("a", a), ("b", b)], "a+b defined differs from a <= b'")
            });
        }
    }
    report.push(iii);

    let mut iv = Clause::new("(iv)");
    for a in 0..n {
        for b in 0..n {
            if !leq[a][b] {
                continue;
            }
            for d in 0..n {
                if p[b][d].is_some() {
                    iv.check(p[a][d].is_some() && le(p[a][d], p[b][d]), || {
                        Witness::new(&[("a", a), ("b", b), ("c", d)], "a+c undefined or not <= b+c")
                    });
                }
            }
        }
    }
    report.push(iv);

    let mut v = Clause::new("(v)");
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                if p[a][d].is_some() && p[b][d].is_some() {
                    v.check(le(p[a][d], p[b][d]) == leq[a][b], || {
                        Witness::new(&[("a", a), ("b", b), ("c", d)], "a+c <= b+c differs from a <= b")
                    });
                }
            }
        }
    }
    report.push(v);

    let mut vi = Clause::new("(vi)");
    for a in 0..n {
        for b in 0..n {
            if !leq[a][b] {
                continue;
            }
            let first = p[a][c[b]].and_then(|s| p[a][c[s]]);
            let second = p[c[b]][a].and_then(|s| p[c[b]][c[s]]).map(|r| c[r]);
            vi.check(first == Some(b) && second == Some(a), || {
                Witness::new(&[("a", a), ("b", b)], format!("a+(a+b')' = {}, (b'+(b'+a)')' = {}", show(first), show(second)))
            });
        }
    }
    report.push(vi);

    let mut vii = Clause::new("(vii)");
    for a in 0..n {
        vii.check(p[a][t.zero] == Some(a), || Witness::new(&[("a", a)], format!("a+0 = {}", show(p[a][t.zero]))));
    }
    report.push(vii);

    let mut viii = Clause::new("(viii)");
    viii.check(c[t.zero] == t.one && c[t.one] == t.zero, || Witness::new(&[], "0' != 1 or 1' != 0"));
    report.push(viii);

    Ok(report)
}

/// A structure-preserving bijection between two effect algebras.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub map: Vec<usize>,
}

impl Isomorphism {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }
}

/// Per-element invariants preserved by every isomorphism.
fn signature(e: &EffectAlgebra, x: usize) -> (bool, usize, usize, usize) {
    let defined = e.elements().filter(|&y| e.sum(x, y).is_some()).count();
    let below = e.elements().filter(|&y| e.leq(y, x)).count();
    let self_sum = e.sum(x, x).is_some();
    (e.comp(x) == x, defined, below, usize::from(self_sum))
}

/// Exact isomorphism search: 0 and 1 are fixed, the other elements are
/// assigned by backtracking, pruned on element signatures and on the
/// partial map's consistency with `plus` and `comp`.
pub fn find_isomorphism(a: &EffectAlgebra, b: &EffectAlgebra) -> Result<Option<Isomorphism>, AlgebraError> {
    if a.size() != b.size() {
        return Err(AlgebraError::SizeMismatch(a.size(), b.size()));
    }
    let n = a.size();
    let sig_a: Vec<_> = a.elements().map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = b.elements().map(|x| signature(b, x)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.zero()] = b.zero();
    map[a.one()] = b.one();
    used[b.zero()] = true;
    used[b.one()] = true;
    if sig_a[a.zero()] != sig_b[b.zero()] || sig_a[a.one()] != sig_b[b.one()] {
        return Ok(None);
    }
    let order: Vec<usize> = a.elements().filter(|&x| x != a.zero() && x != a.one()).collect();

    fn consistent(a: &EffectAlgebra, b: &EffectAlgebra, map: &[usize], x: usize) -> bool {
        let fx = map[x];
        let cx = a.comp(x);
        if map[cx] != usize::MAX && b.comp(fx) != map[cx] {
            return false;
        }
        for y in a.elements() {
            let fy = map[y];
            if fy == usize::MAX {
                continue;
            }
            for (s, t) in [(a.sum(x, y), b.sum(fx, fy)), (a.sum(y, x), b.sum(fy, fx))] {
                match (s, t) {
                    (None, None) => {}
                    (Some(s), Some(t)) => {
                        if map[s] != usize::MAX && map[s] != t {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    fn full_check(a: &EffectAlgebra, b: &EffectAlgebra, map: &[usize]) -> bool {
        a.elements().all(|x| {
            b.comp(map[x]) == map[a.comp(x)]
                && a.elements().all(|y| b.sum(map[x], map[y]) == a.sum(x, y).map(|s| map[s]))
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        a: &EffectAlgebra,
        b: &EffectAlgebra,
        order: &[usize],
        k: usize,
        sig_a: &[(bool, usize, usize, usize)],
        sig_b: &[(bool, usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return full_check(a, b, map);
        }
        let x = order[k];
        for t in b.elements() {
            if used[t] || sig_a[x] != sig_b[t] {
                continue;
            }
            map[x] = t;
            used[t] = true;
            if consistent(a, b, map, x) && go(a, b, order, k + 1, sig_a, sig_b, map, used) {
                return true;
            }
            used[t] = false;
            map[x] = usize::MAX;
        }
        false
    }

    // 0 and 1 must also be consistent with each other before the search starts.
    if !consistent(a, b, &map, a.zero()) || !consistent(a, b, &map, a.one()) {
        return Ok(None);
    }
    if go(a, b, &order, 0, &sig_a, &sig_b, &mut map, &mut used) {
        Ok(Some(Isomorphism { map }))
    } else {
        Ok(None)
    }
}

/// Relabel tables along the bijection `perm` (element `x` becomes
/// `perm[x]`). Names move with their elements.
pub fn relabel(t: &EffectTables, perm: &[usize]) -> EffectTables {
    let n = t.size;
    let mut plus = vec![vec![None; n]; n];
    let mut comp = vec![0; n];
    for x in 0..n {
        comp[perm[x]] = perm[t.comp[x]];
        for y in 0..n {
            plus[perm[x]][perm[y]] = t.plus[x][y].map(|s| perm[s]);
        }
    }
    let names = t.names.as_ref().map(|names| {
        let mut out = vec![String::new(); n];
        for x in 0..n {
            out[perm[x]] = names[x].clone();
        }
        out
    });
    EffectTables { size: n, names, zero: perm[t.zero], one: perm[t.one], comp, plus }
}
