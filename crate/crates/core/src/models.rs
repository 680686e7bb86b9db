//! Small named effect algebras used throughout the examples and tests.
//!
//! Every model uses index 0 for the zero and `size - 1` for the unit.

use crate::algebra::{EffectAlgebra, EffectTables};

/// Build tables from the sums of non-zero elements. `0 + x = x` is added
/// automatically and every listed sum is mirrored.
pub fn from_sums(names: &[&str], comp: &[usize], sums: &[(usize, usize, usize)]) -> EffectTables {
    let n = names.len();
    let mut plus = vec![vec![None; n]; n];
    for x in 0..n {
        plus[0][x] = Some(x);
        plus[x][0] = Some(x);
    }
    for &(x, y, s) in sums {
        plus[x][y] = Some(s);
        plus[y][x] = Some(s);
    }
    EffectTables {
        size: n,
        names: Some(names.iter().map(|s| s.to_string()).collect()),
        zero: 0,
        one: n - 1,
        comp: comp.to_vec(),
        plus,
    }
}

fn build(t: EffectTables) -> EffectAlgebra {
    EffectAlgebra::new(t).expect("built-in model is an effect algebra")
}

/// The two-element Boolean algebra {0, 1}.
pub fn e2() -> EffectAlgebra {
    build(from_sums(&["0", "1"], &[1, 0], &[]))
}

/// The three-element chain 0 < a < 1 with a' = a.
pub fn c3() -> EffectAlgebra {
    build(from_sums(&["0", "a", "1"], &[2, 1, 0], &[(1, 1, 2)]))
}

/// The Boolean algebra 2^2: a' = b, a + b = 1, a + a undefined.
pub fn b4() -> EffectAlgebra {
    build(from_sums(&["0", "a", "b", "1"], &[3, 2, 1, 0], &[(1, 2, 3)]))
}

/// Horizontal sum of two copies of the three-element chain: a' = a,
/// b' = b, a + a = b + b = 1, a + b undefined.
pub fn hs() -> EffectAlgebra {
    build(from_sums(&["0", "a", "b", "1"], &[3, 1, 2, 0], &[(1, 1, 3), (2, 2, 3)]))
}

/// The four-element chain 0 < a < b < 1 with a' = b and a + a = b.
pub fn c4() -> EffectAlgebra {
    build(from_sums(&["0", "a", "b", "1"], &[3, 2, 1, 0], &[(1, 1, 2), (1, 2, 3)]))
}

/// Look up a built-in model by name (`e2`, `c3`, `b4`, `hs`, `c4`).
pub fn by_name(name: &str) -> Option<EffectAlgebra> {
    match name {
        "e2" => Some(e2()),
        "c3" => Some(c3()),
        "b4" => Some(b4()),
        "hs" => Some(hs()),
        "c4" => Some(c4()),
        _ => None,
    }
}

pub const NAMES: [&str; 5] = ["e2", "c3", "b4", "hs", "c4"];
