//! Finite based endomorphisms, equivariant maps and the Szymczak category.
//!
//! A based endomorphism is a total self-map of a finite set that fixes the
//! basepoint, which always has index 0. Morphisms of the Szymczak category
//! are classes of pairs `(φ, k)` with `(φ, k) ~ (φ', k')` iff
//! `φ f^{k'+n} = φ' f^{k+n}` for some `n`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{KernelError, Result};
use crate::finite::{FinitePartialMap, FiniteSubset};
use crate::rational::lcm;

pub const BASEPOINT: &str = "*";

fn compose_tables(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&y| g[y]).collect()
}

fn identity_table(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// A total self-map of a finite based set fixing the basepoint (index 0).
#[derive(Clone)]
pub struct BasedEndo {
    labels: Vec<String>,
    table: Vec<usize>,
}

impl BasedEndo {
    pub fn new(labels: Vec<String>, table: Vec<usize>) -> Result<BasedEndo> {
        if labels.is_empty() || labels.len() != table.len() {
            return Err(KernelError::InvalidInput("a based endomorphism needs one image per point, basepoint included".into()));
        }
        if table[0] != 0 {
            return Err(KernelError::InvalidInput("the basepoint must be fixed".into()));
        }
        if table.iter().any(|&y| y >= table.len()) {
            return Err(KernelError::InvalidInput("image index out of range".into()));
        }
        Ok(BasedEndo { labels, table })
    }

    /// Points labelled `*`, `1`, `2`, ….
    pub fn from_table(table: Vec<usize>) -> Result<BasedEndo> {
        let labels = std::iter::once(BASEPOINT.to_string()).chain((1..table.len()).map(|i| i.to_string())).collect();
        BasedEndo::new(labels, table)
    }

    /// `f_E⁺` on `E ∪ {∗}`: points leaving `E` or `Dom f` go to the basepoint.
    ///
    /// On a finite discrete space every subset is compactifiable, so this is
    /// always defined.
    pub fn one_point(f: &FinitePartialMap, e: &FiniteSubset) -> Result<BasedEndo> {
        if f.space() != e.space() {
            return Err(KernelError::SpaceMismatch("subset and map live on different spaces".into()));
        }
        let members: Vec<usize> = e.indices().collect();
        let position: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect();
        let mut labels = vec![BASEPOINT.to_string()];
        let mut table = vec![0];
        for &x in &members {
            labels.push(e.space().label(x).to_string());
            table.push(f.apply(x).and_then(|y| position.get(&y).copied()).unwrap_or(0));
        }
        BasedEndo::new(labels, table)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn power(&self, n: usize) -> Vec<usize> {
        let mut acc = identity_table(self.len());
        for _ in 0..n {
            acc = compose_tables(&self.table, &acc);
        }
        acc
    }

    /// `(preperiod, period)` of `f⁰, f¹, …`.
    pub fn preperiod_period(&self) -> (usize, usize) {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut current = identity_table(self.len());
        for n in 0.. {
            if let Some(&first) = seen.get(&current) {
                return (first, n - first);
            }
            seen.insert(current.clone(), n);
            current = compose_tables(&self.table, &current);
        }
        unreachable!()
    }

    fn same_endo(&self, other: &BasedEndo) -> bool {
        self.table == other.table
    }

    /// Every based endomorphism on `1..=max_points` points (basepoint included).
    pub fn enumerate(max_points: usize) -> Vec<BasedEndo> {
        let mut out = Vec::new();
        for n in 1..=max_points {
            let mut table = vec![0; n];
            loop {
                out.push(BasedEndo::from_table(table.clone()).expect("valid by construction"));
                if !advance(&mut table[1..], n) {
                    break;
                }
            }
        }
        out
    }
}

/// Odometer step over tables with entries in `0..radix`; false on wrap-around.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

impl fmt::Debug for BasedEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, &y) in self.table.iter().enumerate() {
            m.entry(&self.labels[x], &self.labels[y]);
        }
        m.finish()
    }
}

impl PartialEq for BasedEndo {
    fn eq(&self, other: &Self) -> bool {
        self.same_endo(other)
    }
}

/// A based map `φ` with `φ f = g φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMap {
    source: BasedEndo,
    target: BasedEndo,
    table: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(source: &BasedEndo, target: &BasedEndo, table: Vec<usize>) -> Result<EquivariantMap> {
        if table.len() != source.len() || table.iter().any(|&y| y >= target.len()) {
            return Err(KernelError::InvalidInput("map table does not fit the endomorphisms".into()));
        }
        if table[0] != 0 {
            return Err(KernelError::InvalidInput("map must send the basepoint to the basepoint".into()));
        }
        if compose_tables(&table, &source.table) != compose_tables(&target.table, &table) {
            return Err(KernelError::InvalidInput("map is not equivariant".into()));
        }
        Ok(EquivariantMap { source: source.clone(), target: target.clone(), table })
    }

    pub fn identity(f: &BasedEndo) -> EquivariantMap {
        EquivariantMap { source: f.clone(), target: f.clone(), table: identity_table(f.len()) }
    }

    /// `f̂`: the endomorphism viewed as a self-morphism.
    pub fn hat(f: &BasedEndo) -> EquivariantMap {
        EquivariantMap { source: f.clone(), target: f.clone(), table: f.table.clone() }
    }

    /// `f̂^a`.
    pub fn hat_power(f: &BasedEndo, a: usize) -> EquivariantMap {
        EquivariantMap { source: f.clone(), target: f.clone(), table: f.power(a) }
    }

    /// The constant map to the basepoint.
    pub fn to_basepoint(source: &BasedEndo, target: &BasedEndo) -> EquivariantMap {
        EquivariantMap { source: source.clone(), target: target.clone(), table: vec![0; source.len()] }
    }

    pub fn source(&self) -> &BasedEndo {
        &self.source
    }

    pub fn target(&self) -> &BasedEndo {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &EquivariantMap) -> Result<EquivariantMap> {
        if !first.target.same_endo(&self.source) {
            return Err(KernelError::InvalidInput("maps are not composable".into()));
        }
        Ok(EquivariantMap {
            source: first.source.clone(),
            target: self.target.clone(),
            table: compose_tables(&self.table, &first.table),
        })
    }

    /// All equivariant maps `f → g`, in lexicographic order of tables.
    pub fn enumerate(f: &BasedEndo, g: &BasedEndo) -> Vec<EquivariantMap> {
        let mut out = Vec::new();
        let mut table = vec![0; f.len()];
        search(f, g, 1, &mut table, &mut out);
        out
    }
}

/// Backtracking over tables, pruning as soon as `φ(f(x)) = g(φ(x))` can be checked.
fn search(f: &BasedEndo, g: &BasedEndo, next: usize, table: &mut Vec<usize>, out: &mut Vec<EquivariantMap>) {
    let consistent = |table: &[usize], upto: usize| {
        (0..upto).all(|x| f.table[x] >= upto || table[f.table[x]] == g.table[table[x]])
    };
    if next == f.len() {
        if consistent(table, f.len()) {
            out.push(EquivariantMap { source: f.clone(), target: g.clone(), table: table.clone() });
        }
        return;
    }
    for y in 0..g.len() {
        table[next] = y;
        if consistent(table, next + 1) {
            search(f, g, next + 1, table, out);
        }
    }
}

/// A representative `(φ, k)` of a Szymczak morphism `f → g`.
#[derive(Clone, Debug)]
pub struct SzMorphism {
    pub map: EquivariantMap,
    pub shift: usize,
}

impl SzMorphism {
    /// `Qφ = (φ, 0)`.
    pub fn q(map: EquivariantMap) -> SzMorphism {
        SzMorphism { map, shift: 0 }
    }

    pub fn identity(f: &BasedEndo) -> SzMorphism {
        SzMorphism::q(EquivariantMap::identity(f))
    }

    pub fn source(&self) -> &BasedEndo {
        &self.map.source
    }

    pub fn target(&self) -> &BasedEndo {
        &self.map.target
    }

    /// `self ∘ first = (ψφ, k + ℓ)`.
    pub fn after(&self, first: &SzMorphism) -> Result<SzMorphism> {
        Ok(SzMorphism { map: self.map.after(&first.map)?, shift: first.shift + self.shift })
    }
}

/// Least `n` with `φ f^{k'+n} = φ' f^{k+n}`, if any.
///
/// Witnesses propagate upward in `n`, and beyond the preperiod the powers of
/// `f` repeat, so checking `n ≤ preperiod + period` is complete.
pub fn sz_equal(m: &SzMorphism, m2: &SzMorphism) -> Result<Option<usize>> {
    if !m.source().same_endo(m2.source()) || !m.target().same_endo(m2.target()) {
        return Err(KernelError::InvalidInput("morphisms have different endpoints".into()));
    }
    let f = m.source();
    let (pre, per) = f.preperiod_period();
    for n in 0..=pre + per {
        let left = compose_tables(&m.map.table, &f.power(m2.shift + n));
        let right = compose_tables(&m2.map.table, &f.power(m.shift + n));
        if left == right {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn default_exponent_bound(f: &BasedEndo, g: &BasedEndo) -> usize {
    let (pf, qf) = f.preperiod_period();
    let (pg, qg) = g.preperiod_period();
    pf.max(pg) + lcm(qf, qg)
}

/// A witness `(ψ, a)` with `ψφ = f̂^a` and `φψ = ĝ^a`.
///
/// Valid exponents are closed upward (replace `ψ` by `fψ`) and periodic past
/// the larger preperiod, so the default bound `max preperiod + lcm(periods)`
/// makes a `None` answer complete.
pub fn is_shift_equivalence(phi: &EquivariantMap, bound: Option<usize>) -> Result<Option<(EquivariantMap, usize)>> {
    let (f, g) = (phi.source(), phi.target());
    let bound = bound.unwrap_or_else(|| default_exponent_bound(f, g));
    let candidates = EquivariantMap::enumerate(g, f);
    for a in 0..=bound {
        let (fa, ga) = (f.power(a), g.power(a));
        for psi in &candidates {
            if compose_tables(&psi.table, &phi.table) == fa && compose_tables(&phi.table, &psi.table) == ga {
                return Ok(Some((psi.clone(), a)));
            }
        }
    }
    Ok(None)
}

/// Searches for an inverse class `(ψ, ℓ)` of `m` by morphism equality alone.
pub fn sz_is_iso(m: &SzMorphism, bound: Option<usize>) -> Result<Option<SzMorphism>> {
    let (f, g) = (m.source(), m.target());
    let bound = bound.unwrap_or_else(|| default_exponent_bound(f, g));
    let id_f = SzMorphism::identity(f);
    let id_g = SzMorphism::identity(g);
    for shift in 0..=bound {
        for psi in EquivariantMap::enumerate(g, f) {
            let inverse = SzMorphism { map: psi, shift };
            if sz_equal(&inverse.after(m)?, &id_f)?.is_some() && sz_equal(&m.after(&inverse)?, &id_g)?.is_some() {
                return Ok(Some(inverse));
            }
        }
    }
    Ok(None)
}

/// Size of the eventual image and the cycle type of the induced permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalInvariant {
    pub eventual_image: usize,
    /// Cycle lengths in decreasing order, the basepoint's fixed cycle included.
    pub cycle_type: Vec<usize>,
}

pub fn canonical_invariant(f: &BasedEndo) -> CanonicalInvariant {
    let stable = f.power(f.len());
    let mut image: Vec<usize> = stable.clone();
    image.sort_unstable();
    image.dedup();
    let mut seen = vec![false; f.len()];
    let mut cycle_type = Vec::new();
    for &x in &image {
        if seen[x] {
            continue;
        }
        let mut len = 0;
        let mut y = x;
        while !seen[y] {
            seen[y] = true;
            y = f.table[y];
            len += 1;
        }
        cycle_type.push(len);
    }
    cycle_type.sort_unstable_by(|a, b| b.cmp(a));
    CanonicalInvariant { eventual_image: image.len(), cycle_type }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteSpace;

    fn endo(table: &[usize]) -> BasedEndo {
        BasedEndo::from_table(table.to_vec()).unwrap()
    }

    #[test]
    fn equality_examples() {
        let id = endo(&[0, 1]);
        let a = SzMorphism::identity(&id);
        let b = SzMorphism { map: EquivariantMap::identity(&id), shift: 1 };
        assert_eq!(sz_equal(&a, &b).unwrap(), Some(0));

        let swap = endo(&[0, 2, 1]);
        let a = SzMorphism::identity(&swap);
        let b = SzMorphism { map: EquivariantMap::identity(&swap), shift: 1 };
        assert_eq!(sz_equal(&a, &b).unwrap(), None);
        assert_eq!(sz_equal(&a, &a).unwrap(), Some(0));
    }

    #[test]
    fn hat_is_invertible() {
        for f in BasedEndo::enumerate(3) {
            let q = SzMorphism::q(EquivariantMap::hat(&f));
            assert!(sz_is_iso(&q, None).unwrap().is_some(), "{f:?}");
            let inverse = SzMorphism { map: EquivariantMap::identity(&f), shift: 1 };
            assert!(sz_equal(&q.after(&inverse).unwrap(), &SzMorphism::identity(&f)).unwrap().is_some());
        }
    }

    #[test]
    fn shift_equivalence_examples() {
        // f: a→b, b→b; g: c→c.
        let f = endo(&[0, 2, 2]);
        let g = endo(&[0, 1]);
        let phi = EquivariantMap::new(&f, &g, vec![0, 1, 1]).unwrap();
        let (psi, a) = is_shift_equivalence(&phi, None).unwrap().unwrap();
        assert_eq!(a, 1);
        assert_eq!(psi.table(), &[0, 2]);

        let cycle = endo(&[0, 2, 1]);
        let point = endo(&[0, 1]);
        let constant = EquivariantMap::to_basepoint(&cycle, &point);
        assert!(is_shift_equivalence(&constant, None).unwrap().is_none());
        let id = EquivariantMap::identity(&cycle);
        assert_eq!(is_shift_equivalence(&id, None).unwrap().map(|w| w.1), Some(0));

        let collapse = SzMorphism::q(EquivariantMap::to_basepoint(&cycle, &cycle));
        assert!(sz_is_iso(&collapse, None).unwrap().is_none());
    }

    #[test]
    fn invariants() {
        let space = FiniteSpace::new(["s", "a"]).unwrap();
        let f = FinitePartialMap::from_pairs(&space, [("s", "s"), ("a", "s")]).unwrap();
        let plus = BasedEndo::one_point(&f, &FiniteSubset::full(&space)).unwrap();
        assert_eq!(plus.table(), &[0, 1, 1]);
        assert_eq!(canonical_invariant(&plus), CanonicalInvariant { eventual_image: 2, cycle_type: vec![1, 1] });
        assert_eq!(canonical_invariant(&endo(&[0, 2, 1])), CanonicalInvariant { eventual_image: 3, cycle_type: vec![2, 1] });
        assert_eq!(canonical_invariant(&endo(&[0, 0, 0])), CanonicalInvariant { eventual_image: 1, cycle_type: vec![1] });
    }

    #[test]
    fn one_point_sends_escapes_to_basepoint() {
        let space = FiniteSpace::new(["1", "2", "3"]).unwrap();
        let f = FinitePartialMap::from_pairs(&space, [("1", "2")]).unwrap();
        let e = FiniteSubset::from_labels(&space, ["1", "2"]).unwrap();
        let plus = BasedEndo::one_point(&f, &e).unwrap();
        assert_eq!(plus.table(), &[0, 2, 0]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(BasedEndo::enumerate(4).len(), 1 + 2 + 9 + 64);
        let f = endo(&[0, 2, 1]);
        assert!(EquivariantMap::enumerate(&f, &f).iter().all(|m| EquivariantMap::new(&f, &f, m.table().to_vec()).is_ok()));
        assert_eq!(EquivariantMap::enumerate(&f, &f).len(), 3);
    }
}
