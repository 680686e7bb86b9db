//! Oracles shared by the integration tests. Nothing here calls into the
//! library's validators, enumerator or canonical forms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use effect_workbench::implication::ImplicationTable;
use effect_workbench::logic::{evaluate_term, QuasiIdentity};

pub type Plus = Vec<Vec<Option<usize>>>;

/// E1-E4 read literally, plus the complement being the unique partner of E3.
pub fn is_effect_algebra(zero: usize, one: usize, comp: &[usize], plus: &Plus) -> bool {
    let n = comp.len();
    if zero == one {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            if plus[x][y] != plus[y][x] {
                return false;
            }
            for z in 0..n {
                let left = plus[x][y].and_then(|s| plus[s][z]);
                let right = plus[y][z].and_then(|s| plus[x][s]);
                if left != right {
                    return false;
                }
            }
        }
        let partners: Vec<usize> = (0..n).filter(|&y| plus[x][y] == Some(one)).collect();
        if partners != [comp[x]] {
            return false;
        }
        if x != zero && plus[one][x].is_some() {
            return false;
        }
    }
    true
}

pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Smallest relabelled sum table over all bijections fixing `zero` and `one`.
pub fn iso_key(zero: usize, one: usize, plus: &Plus) -> Vec<Option<usize>> {
    let n = plus.len();
    let inner: Vec<usize> = (0..n).filter(|&x| x != zero && x != one).collect();
    let mut best: Option<Vec<Option<usize>>> = None;
    for p in permutations(&inner) {
        // map[old] = new, with zero -> 0 and one -> n-1
        let mut map = vec![0; n];
        map[zero] = 0;
        map[one] = n - 1;
        for (k, &old) in p.iter().enumerate() {
            map[old] = k + 1;
        }
        let mut t = vec![vec![None; n]; n];
        for x in 0..n {
            for y in 0..n {
                t[map[x]][map[y]] = plus[x][y].map(|s| map[s]);
            }
        }
        let flat: Vec<Option<usize>> = t.into_iter().flatten().collect();
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    }
    best.unwrap()
}

/// Partner of `x` under E3, if unique.
pub fn e3_complement(one: usize, plus: &Plus, x: usize) -> Option<usize> {
    let partners: Vec<usize> = (0..plus.len()).filter(|&y| plus[x][y] == Some(one)).collect();
    (partners.len() == 1).then(|| partners[0])
}

/// Every partial table on `n` elements with zero 0 and one n-1; the
/// complement is read off the table by E3.
pub fn brute_force_all_tables(n: usize) -> Vec<(Vec<usize>, Plus)> {
    let cells = n * n;
    let mut out = Vec::new();
    let mut digits = vec![0usize; cells];
    loop {
        let plus: Plus = (0..n)
            .map(|x| (0..n).map(|y| digits[x * n + y].checked_sub(1)).collect())
            .collect();
        let comp: Option<Vec<usize>> = (0..n).map(|x| e3_complement(n - 1, &plus, x)).collect();
        if let Some(comp) = comp {
            if is_effect_algebra(0, n - 1, &comp, &plus) {
                out.push((comp, plus));
            }
        }
        let mut i = 0;
        loop {
            if i == cells {
                return out;
            }
            digits[i] += 1;
            if digits[i] <= n {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Symmetric tables whose zero row is the identity and whose one row is
/// undefined off zero; the free cells are the upper triangle of the middle.
pub fn brute_force_reduced(n: usize) -> Vec<(Vec<usize>, Plus)> {
    let mid: Vec<usize> = (1..n - 1).collect();
    let mut free = Vec::new();
    for (i, &x) in mid.iter().enumerate() {
        for &y in &mid[i..] {
            free.push((x, y));
        }
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut plus: Plus = vec![vec![None; n]; n];
        for x in 0..n {
            plus[0][x] = Some(x);
            plus[x][0] = Some(x);
        }
        for (k, &(x, y)) in free.iter().enumerate() {
            let v = digits[k].checked_sub(1);
            plus[x][y] = v;
            plus[y][x] = v;
        }
        let comp: Option<Vec<usize>> = (0..n).map(|x| e3_complement(n - 1, &plus, x)).collect();
        if let Some(comp) = comp {
            if is_effect_algebra(0, n - 1, &comp, &plus) {
                out.push((comp, plus));
            }
        }
        let mut i = 0;
        loop {
            if i == free.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] <= n {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

pub fn class_count(tables: &[(Vec<usize>, Plus)]) -> usize {
    let n = |p: &Plus| p.len();
    tables
        .iter()
        .map(|(_, p)| iso_key(0, n(p) - 1, p))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Does `q` fail at exactly this assignment?
pub fn instance_fails(q: &QuasiIdentity, table: &ImplicationTable, bindings: &[(String, usize)]) -> bool {
    let asg: HashMap<String, usize> = bindings.iter().cloned().collect();
    let eq = |l, r| -> bool {
        let a = evaluate_term(l, table, &asg).expect("bound");
        let b = evaluate_term(r, table, &asg).expect("bound");
        a == b
    };
    q.premises.iter().all(|p| eq(&p.lhs, &p.rhs)) && !eq(&q.conclusion.lhs, &q.conclusion.rhs)
}
