//! Point-wise oracles shared by the integration tests.
#![allow(dead_code)]

use conley_kernel::dynamics::FiniteSystem;
use conley_kernel::finite::{FinitePartialMap, FiniteSpace, FiniteSubset};

pub type Table = Vec<Option<usize>>;

pub fn orbit_point(table: &Table, x: usize, n: usize) -> Option<usize> {
    (0..n).try_fold(x, |y, _| table[y])
}

/// `f^s(x)` is defined and in `set` for every `s` in `lo..=hi`.
pub fn stays(table: &Table, set: &[bool], x: usize, lo: usize, hi: usize) -> bool {
    (lo..=hi).all(|s| orbit_point(table, x, s).is_some_and(|y| set[y]))
}

pub fn oracle_admissible(table: &Table, e: &[bool], e2: &[bool], (a, b, c): (usize, usize, usize)) -> bool {
    let n = table.len();
    let first = (0..n).all(|x| !stays(table, e, x, 0, b) || orbit_point(table, x, a).is_some_and(|y| e2[y]));
    let second = (0..n).all(|y| !stays(table, e2, y, 0, c - a) || orbit_point(table, y, b - a).is_some_and(|z| e[z]));
    first && second
}

/// Domain and values of the cross map, computed orbit by orbit.
pub fn oracle_cross(table: &Table, e: &[bool], e2: &[bool], (a, b, c): (usize, usize, usize)) -> Table {
    (0..table.len())
        .map(|x| {
            if stays(table, e, x, 0, b) && stays(table, e2, x, a, c) {
                orbit_point(table, x, c)
            } else {
                None
            }
        })
        .collect()
}

/// `t` if admissible, else the first admissible triple with entries below 5.
pub fn pick(table: &Table, e: &[bool], e2: &[bool], t: (usize, usize, usize)) -> Option<(usize, usize, usize)> {
    if oracle_admissible(table, e, e2, t) {
        return Some(t);
    }
    (0..5).flat_map(|c| (0..=c).flat_map(move |b| (0..=b).map(move |a| (a, b, c)))).find(|&t| oracle_admissible(table, e, e2, t))
}

pub fn compose(second: &Table, first: &Table) -> Table {
    first.iter().map(|y| y.and_then(|y| second[y])).collect()
}

pub fn load(table: &Table, sets: &[&Vec<bool>]) -> (FiniteSystem, Vec<FiniteSubset>) {
    let space = FiniteSpace::numbered(table.len());
    let sys = FiniteSystem::new(FinitePartialMap::new(&space, table.clone()).unwrap());
    let subsets = sets
        .iter()
        .map(|s| FiniteSubset::from_indices(&space, (0..s.len()).filter(|&i| s[i])).unwrap())
        .collect();
    (sys, subsets)
}

pub fn as_table(map: &FinitePartialMap) -> Table {
    map.table().to_vec()
}


/// Largest `S ⊆ E` with `f(S) = S`: repeatedly drop points that leave `S` or
/// have no preimage in `S`.
pub fn oracle_invariant(table: &Table, e: &[bool]) -> Vec<bool> {
    let n = table.len();
    let mut s = e.to_vec();
    loop {
        let next: Vec<bool> = (0..n)
            .map(|x| s[x] && table[x].is_some_and(|y| s[y]) && (0..n).any(|w| s[w] && table[w] == Some(x)))
            .collect();
        if next == s {
            return s;
        }
        s = next;
    }
}
