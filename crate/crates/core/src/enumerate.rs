//! Exhaustive generation of finite effect algebras up to isomorphism.
//!
//! Two independent strategies are available. [`Strategy::ComplementFirst`]
//! fixes the orthosupplement as an involution and fills the remaining sums;
//! [`Strategy::RowsFirst`] fills the partial sum table directly and reads
//! the orthosupplement off it. Both prune with associativity on the
//! partially filled table and accept only tables that pass
//! [`validate_effect_axioms`]. Isomorphic copies are merged through
//! [`canonicalize`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{validate_effect_axioms, relabel, EffectAlgebra, EffectTables};
use crate::implication::set_implication_table;

pub const DEFAULT_CAP: usize = 6;

const UNDEFINED: u8 = 0xFF;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("size {size} is outside 2..={cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("encoding is malformed")]
    BadEncoding,
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    ComplementFirst,
    RowsFirst,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub cap: usize,
    pub jobs: usize,
    pub strategy: Strategy,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { cap: DEFAULT_CAP, jobs: 1, strategy: Strategy::ComplementFirst }
    }
}

/// Canonical byte encoding: the size, the sum table row by row (0xFF for
/// undefined) and the orthosupplement, minimized over all relabellings that
/// send zero to 0 and one to `size - 1`.
pub fn canonicalize(e: &EffectAlgebra) -> Vec<u8> {
    canonical_encoding(e.tables())
}

fn encode(t: &EffectTables) -> Vec<u8> {
    let n = t.size;
    let mut out = Vec::with_capacity(1 + n * n + n);
    out.push(n as u8);
    for row in &t.plus {
        out.extend(row.iter().map(|c| c.map_or(UNDEFINED, |v| v as u8)));
    }
    out.extend(t.comp.iter().map(|&c| c as u8));
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub(crate) fn canonical_encoding(t: &EffectTables) -> Vec<u8> {
    let n = t.size;
    let middle: Vec<usize> = (0..n).filter(|&x| x != t.zero && x != t.one).collect();
    let targets: Vec<usize> = (1..n - 1).collect();
    let mut best: Option<Vec<u8>> = None;
    for image in permutations(&targets) {
        let mut perm = vec![0; n];
        perm[t.zero] = 0;
        perm[t.one] = n - 1;
        for (&x, &y) in middle.iter().zip(&image) {
            perm[x] = y;
        }
        let mut relabelled = relabel(t, &perm);
        relabelled.names = None;
        let code = encode(&relabelled);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.expect("at least one relabelling")
}

/// Rebuild the tables from an encoding produced by [`canonicalize`].
pub fn decode(code: &[u8]) -> Result<EffectTables, EnumerateError> {
    let n = *code.first().ok_or(EnumerateError::BadEncoding)? as usize;
    if n < 2 || code.len() != 1 + n * n + n {
        return Err(EnumerateError::BadEncoding);
    }
    let cell = |b: u8| -> Result<Option<usize>, EnumerateError> {
        match b {
            UNDEFINED => Ok(None),
            v if (v as usize) < n => Ok(Some(v as usize)),
            _ => Err(EnumerateError::BadEncoding),
        }
    };
    let plus = (0..n)
        .map(|i| (0..n).map(|j| cell(code[1 + i * n + j])).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let comp = code[1 + n * n..]
        .iter()
        .map(|&c| cell(c)?.ok_or(EnumerateError::BadEncoding))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EffectTables { size: n, names: None, zero: 0, one: n - 1, comp, plus })
}

/// Short content hash of an encoding, used for file names.
pub fn encoding_hash(code: &[u8]) -> String {
    let digest = Sha256::digest(code);
    digest.iter().take(6).map(|b| format!("{:02x}", b)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Unknown,
    Undef,
    Val(usize),
}

struct Partial {
    n: usize,
    cells: Vec<Vec<Cell>>,
}

impl Partial {
    fn new(n: usize) -> Self {
        let mut cells = vec![vec![Cell::Unknown; n]; n];
        for x in 0..n {
            cells[0][x] = Cell::Val(x);
            cells[x][0] = Cell::Val(x);
        }
        for x in 1..n {
            cells[n - 1][x] = Cell::Undef;
            cells[x][n - 1] = Cell::Undef;
        }
        Partial { n, cells }
    }

    fn set(&mut self, i: usize, j: usize, c: Cell) {
        self.cells[i][j] = c;
        self.cells[j][i] = c;
    }

    fn assoc_ok(&self, x: usize, y: usize, z: usize) -> bool {
        use Cell::*;
        let c = &self.cells;
        match (c[x][y], c[y][z]) {
            (Unknown, _) | (_, Unknown) | (Undef, Undef) => true,
            (Undef, Val(u)) => !matches!(c[x][u], Val(_)),
            (Val(s), Undef) => !matches!(c[s][z], Val(_)),
            (Val(s), Val(u)) => match (c[s][z], c[x][u]) {
                (Unknown, _) | (_, Unknown) => true,
                (a, b) => a == b,
            },
        }
    }

    /// Associativity on every triple whose cells are known, and no row
    /// repeating a defined value.
    fn consistent(&self) -> bool {
        let n = self.n;
        for x in 1..n {
            let mut seen = vec![false; n];
            for y in 0..n {
                if let Cell::Val(v) = self.cells[x][y] {
                    if seen[v] {
                        return false;
                    }
                    seen[v] = true;
                }
            }
        }
        (1..n - 1).all(|x| (1..n - 1).all(|y| (1..n - 1).all(|z| self.assoc_ok(x, y, z))))
    }

    fn to_tables(&self, comp: Vec<usize>) -> EffectTables {
        let plus = self
            .cells
            .iter()
            .map(|row| row.iter().map(|c| if let Cell::Val(v) = c { Some(*v) } else { None }).collect())
            .collect();
        EffectTables { size: self.n, names: None, zero: 0, one: self.n - 1, comp, plus }
    }
}

fn involutions_of_middle(n: usize) -> Vec<Vec<usize>> {
    fn go(free: &[usize], comp: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&x, rest)) = free.split_first() else {
            out.push(comp.clone());
            return;
        };
        comp[x] = x;
        go(rest, comp, out);
        for (k, &y) in rest.iter().enumerate() {
            comp[x] = y;
            comp[y] = x;
            let mut others = rest.to_vec();
            others.remove(k);
            go(&others, comp, out);
        }
    }
    let mut comp = vec![0; n];
    comp[0] = n - 1;
    comp[n - 1] = 0;
    let middle: Vec<usize> = (1..n - 1).collect();
    let mut out = Vec::new();
    go(&middle, &mut comp, &mut out);
    out
}

fn fill(p: &mut Partial, free: &[(usize, usize)], options: &dyn Fn(&Partial, usize, usize) -> Vec<Cell>, done: &mut dyn FnMut(&Partial)) {
    let Some((&(i, j), rest)) = free.split_first() else {
        done(p);
        return;
    };
    for c in options(p, i, j) {
        p.set(i, j, c);
        if p.consistent() {
            fill(p, rest, options, done);
        }
    }
    p.set(i, j, Cell::Unknown);
}

fn complement_first(n: usize, comp: &[usize]) -> Vec<Vec<u8>> {
    let mut p = Partial::new(n);
    for x in 1..n - 1 {
        p.set(x, comp[x], Cell::Val(n - 1));
    }
    let mut free = Vec::new();
    for i in 1..n - 1 {
        for j in i..n - 1 {
            if j != comp[i] {
                free.push((i, j));
            }
        }
    }
    // a sum of non-zero elements is never 0, never 1 off the complement
    // pairs, and never one of its summands
    let options = |_: &Partial, i: usize, j: usize| {
        let mut v = vec![Cell::Undef];
        v.extend((1..n - 1).filter(|&s| s != i && s != j).map(Cell::Val));
        v
    };
    let mut found = Vec::new();
    fill(&mut p, &free, &options, &mut |p| {
        let t = p.to_tables(comp.to_vec());
        if validate_effect_axioms(&t).map(|r| r.is_ok()).unwrap_or(false) {
            found.push(canonical_encoding(&t));
        }
    });
    found
}

fn rows_first(n: usize, first_row_value: Option<Cell>) -> Vec<Vec<u8>> {
    let mut p = Partial::new(n);
    let mut free = Vec::new();
    for i in 1..n - 1 {
        for j in i..n - 1 {
            free.push((i, j));
        }
    }
    let options = |_: &Partial, _: usize, _: usize| {
        let mut v = vec![Cell::Undef];
        v.extend((1..n).map(Cell::Val));
        v
    };
    let mut found = Vec::new();
    let mut done = |p: &Partial| {
        let mut comp = vec![0; n];
        for (x, c) in comp.iter_mut().enumerate() {
            let ones: Vec<usize> = (0..n).filter(|&y| p.cells[x][y] == Cell::Val(n - 1)).collect();
            match ones[..] {
                [y] => *c = y,
                _ => return,
            }
        }
        let t = p.to_tables(comp);
        if validate_effect_axioms(&t).map(|r| r.is_ok()).unwrap_or(false) {
            found.push(canonical_encoding(&t));
        }
    };
    match (first_row_value, free.split_first()) {
        (Some(c), Some((&(i, j), rest))) => {
            p.set(i, j, c);
            if p.consistent() {
                fill(&mut p, rest, &options, &mut done);
            }
        }
        _ => fill(&mut p, &free, &options, &mut done),
    }
    found
}

fn check_size(n: usize, cap: usize) -> Result<(), EnumerateError> {
    if n < 2 || n > cap {
        return Err(EnumerateError::CapExceeded { size: n, cap });
    }
    Ok(())
}

/// Canonical encodings of all effect algebras on `n` elements, sorted.
pub fn canonical_forms(n: usize, opts: &EnumerateOptions) -> Result<BTreeSet<Vec<u8>>, EnumerateError> {
    check_size(n, opts.cap)?;
    let run = || -> BTreeSet<Vec<u8>> {
        match opts.strategy {
            Strategy::ComplementFirst => involutions_of_middle(n)
                .par_iter()
                .flat_map_iter(|comp| complement_first(n, comp))
                .collect(),
            Strategy::RowsFirst if n == 2 => rows_first(n, None).into_iter().collect(),
            Strategy::RowsFirst => {
                let mut seeds = vec![Cell::Undef];
                seeds.extend((1..n).map(Cell::Val));
                seeds.par_iter().flat_map_iter(|&c| rows_first(n, Some(c))).collect()
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build().expect("thread pool");
    Ok(pool.install(run))
}

/// All effect algebras on `n` elements up to isomorphism, in canonical
/// order, with the default options.
pub fn enumerate_effect_algebras(n: usize) -> Result<Vec<EffectAlgebra>, EnumerateError> {
    enumerate_with(n, &EnumerateOptions::default())
}

pub fn enumerate_with(n: usize, opts: &EnumerateOptions) -> Result<Vec<EffectAlgebra>, EnumerateError> {
    canonical_forms(n, opts)?
        .iter()
        .map(|code| {
            let t = decode(code)?;
            Ok(EffectAlgebra::new(t).expect("enumerated tables are valid"))
        })
        .collect()
}

/// All algebras of every size from 2 to `max_size`.
pub fn enumerate_up_to(max_size: usize, opts: &EnumerateOptions) -> Result<Vec<EffectAlgebra>, EnumerateError> {
    let mut out = Vec::new();
    for n in 2..=max_size {
        out.extend(enumerate_with(n, opts)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCensus {
    pub size: usize,
    pub total: usize,
    pub lattice: usize,
    pub non_lattice: usize,
    pub max_cell_cardinality: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalNonLattice {
    Size(usize),
    NotFoundUpToCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub sizes: Vec<SizeCensus>,
    pub minimal_non_lattice_size: MinimalNonLattice,
    pub cap: usize,
}

impl CensusReport {
    pub fn size(&self, n: usize) -> Option<&SizeCensus> {
        self.sizes.iter().find(|s| s.size == n)
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "effect algebras up to isomorphism (computed by exhaustive search)")?;
        writeln!(f, "{:>4} {:>6} {:>8} {:>12} {:>10}", "size", "total", "lattice", "non-lattice", "max |x->y|")?;
        for s in &self.sizes {
            writeln!(f, "{:>4} {:>6} {:>8} {:>12} {:>10}", s.size, s.total, s.lattice, s.non_lattice, s.max_cell_cardinality)?;
        }
        match self.minimal_non_lattice_size {
            MinimalNonLattice::Size(n) => write!(f, "smallest non-lattice size: {}", n),
            MinimalNonLattice::NotFoundUpToCap => write!(f, "no non-lattice algebra up to size {}", self.cap),
        }
    }
}

pub fn census_entry(n: usize, algebras: &[EffectAlgebra]) -> SizeCensus {
    let lattice = algebras.iter().filter(|e| e.is_lattice()).count();
    let max_cell_cardinality = algebras
        .iter()
        .map(|e| set_implication_table(e).max_cell_cardinality())
        .max()
        .unwrap_or(0);
    SizeCensus { size: n, total: algebras.len(), lattice, non_lattice: algebras.len() - lattice, max_cell_cardinality }
}

/// Census of all sizes from 2 to `max_size`.
pub fn census(max_size: usize) -> Result<CensusReport, EnumerateError> {
    census_with(max_size, &EnumerateOptions::default())
}

pub fn census_with(max_size: usize, opts: &EnumerateOptions) -> Result<CensusReport, EnumerateError> {
    check_size(max_size, opts.cap)?;
    let mut sizes = Vec::new();
    for n in 2..=max_size {
        sizes.push(census_entry(n, &enumerate_with(n, opts)?));
    }
    let minimal_non_lattice_size = sizes
        .iter()
        .find(|s| s.non_lattice > 0)
        .map_or(MinimalNonLattice::NotFoundUpToCap, |s| MinimalNonLattice::Size(s.size));
    Ok(CensusReport { sizes, minimal_non_lattice_size, cap: max_size })
}

/// File name used for an enumerated algebra: `n{size}-{hash}.ea.json`.
pub fn file_name(e: &EffectAlgebra) -> String {
    format!("n{}-{}.ea.json", e.size(), encoding_hash(&canonicalize(e)))
}

/// Write each algebra to `dir` and return the paths written.
pub fn write_directory(dir: &Path, algebras: &[EffectAlgebra]) -> Result<Vec<PathBuf>, EnumerateError> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for e in algebras {
        let path = dir.join(file_name(e));
        std::fs::write(&path, crate::io::effect_to_json(e.tables()))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Group algebras by size.
pub fn by_size(algebras: &[EffectAlgebra]) -> BTreeMap<usize, Vec<&EffectAlgebra>> {
    let mut out: BTreeMap<usize, Vec<&EffectAlgebra>> = BTreeMap::new();
    for e in algebras {
        out.entry(e.size()).or_default().push(e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::find_isomorphism;
    use crate::models;

    #[test]
    fn smallest_sizes() {
        let two = enumerate_effect_algebras(2).unwrap();
        assert_eq!(two.len(), 1);
        assert!(find_isomorphism(&two[0], &models::e2()).unwrap().is_some());
        let three = enumerate_effect_algebras(3).unwrap();
        assert_eq!(three.len(), 1);
        assert!(find_isomorphism(&three[0], &models::c3()).unwrap().is_some());
    }

    #[test]
    fn size_four_contains_named_models() {
        let four = enumerate_effect_algebras(4).unwrap();
        let codes: BTreeSet<Vec<u8>> = four.iter().map(canonicalize).collect();
        for m in [models::b4(), models::hs(), models::c4()] {
            assert!(codes.contains(&canonicalize(&m)));
        }
        assert_ne!(canonicalize(&models::b4()), canonicalize(&models::hs()));
    }

    #[test]
    fn canonical_form_ignores_storage_order() {
        let e = models::c4();
        let moved = EffectAlgebra::new(relabel(e.tables(), &[3, 1, 0, 2])).unwrap();
        assert_eq!(canonicalize(&e), canonicalize(&moved));
        let code = canonicalize(&e);
        let back = EffectAlgebra::new(decode(&code).unwrap()).unwrap();
        assert_eq!(canonicalize(&back), code);
    }

    #[test]
    fn strategies_agree_up_to_five() {
        for n in 2..=5 {
            let a = canonical_forms(n, &EnumerateOptions::default()).unwrap();
            let b = canonical_forms(n, &EnumerateOptions { strategy: Strategy::RowsFirst, ..Default::default() }).unwrap();
            assert_eq!(a, b, "size {n}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_effect_algebras(7), Err(EnumerateError::CapExceeded { .. })));
        assert!(matches!(census(1), Err(EnumerateError::CapExceeded { .. })));
    }

    #[test]
    fn census_of_three() {
        let c = census(3).unwrap();
        assert_eq!(c.sizes.iter().map(|s| (s.size, s.total, s.non_lattice)).collect::<Vec<_>>(), vec![(2, 1, 0), (3, 1, 0)]);
        assert!(c.sizes.iter().all(|s| s.max_cell_cardinality == 1));
        assert_eq!(c.minimal_non_lattice_size, MinimalNonLattice::NotFoundUpToCap);
    }
}
