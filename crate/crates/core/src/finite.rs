//! Finite discrete carrier: point sets, subsets and partial self-maps.
//!
//! A finite weak Hausdorff space is discrete, so on this carrier closure and
//! interior are the identity and every subset is compact and locally compact.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{KernelError, Result};

#[derive(Debug)]
struct SpaceInner {
    points: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered finite set of point identifiers. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteSpace(Arc<SpaceInner>);

impl FiniteSpace {
    pub fn new<I, S>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(KernelError::InvalidInput(format!("duplicate point identifier {p:?}")));
            }
        }
        Ok(FiniteSpace(Arc::new(SpaceInner { points, index })))
    }

    /// The space `{0, 1, ..., n-1}` with decimal labels.
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string())).expect("numbered labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.0.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.points[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0
            .index
            .get(label)
            .copied()
            .ok_or_else(|| KernelError::InvalidInput(format!("unknown point {label:?}")))
    }

    fn same(&self, other: &FiniteSpace) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.points == other.0.points
    }

    fn check_same(&self, other: &FiniteSpace) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(KernelError::SpaceMismatch("operands live on different finite spaces".into()))
        }
    }
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points()).finish()
    }
}

/// A subset of a [`FiniteSpace`].
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSubset {
    space: FiniteSpace,
    members: Vec<bool>,
}

impl FiniteSubset {
    pub fn empty(space: &FiniteSpace) -> Self {
        FiniteSubset { space: space.clone(), members: vec![false; space.len()] }
    }

    pub fn full(space: &FiniteSpace) -> Self {
        FiniteSubset { space: space.clone(), members: vec![true; space.len()] }
    }

    pub fn from_indices(space: &FiniteSpace, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(space);
        for i in indices {
            if i >= space.len() {
                return Err(KernelError::InvalidInput(format!("point index {i} out of range")));
            }
            s.members[i] = true;
        }
        Ok(s)
    }

    pub fn from_labels<S: AsRef<str>>(space: &FiniteSpace, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let idx = labels
            .into_iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, idx)
    }

    /// Subset encoded by the low bits of `mask`.
    pub fn from_mask(space: &FiniteSpace, mask: u64) -> Self {
        let members = (0..space.len()).map(|i| mask >> i & 1 == 1).collect();
        FiniteSubset { space: space.clone(), members }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.get(i).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    pub fn labels(&self) -> Vec<String> {
        self.indices().map(|i| self.space.label(i).to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        self.space.check_same(&other.space)?;
        let members = self.members.iter().zip(&other.members).map(|(&a, &b)| op(a, b)).collect();
        Ok(FiniteSubset { space: self.space.clone(), members })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.space.check_same(&other.space)?;
        Ok(self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b))
    }
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices().map(|i| self.space.label(i))).finish()
    }
}

/// A partial self-map of a finite space; the domain is the set of points
/// with an entry in the table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePartialMap {
    space: FiniteSpace,
    table: Vec<Option<usize>>,
}

impl FinitePartialMap {
    pub fn new(space: &FiniteSpace, table: Vec<Option<usize>>) -> Result<Self> {
        if table.len() != space.len() {
            return Err(KernelError::InvalidInput(format!(
                "table has {} entries for a space of {} points",
                table.len(),
                space.len()
            )));
        }
        if let Some(bad) = table.iter().flatten().find(|&&y| y >= space.len()) {
            return Err(KernelError::InvalidInput(format!("image index {bad} out of range")));
        }
        Ok(FinitePartialMap { space: space.clone(), table })
    }

    pub fn from_pairs<S: AsRef<str>>(space: &FiniteSpace, pairs: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        let mut table = vec![None; space.len()];
        for (x, y) in pairs {
            let (x, y) = (space.index_of(x.as_ref())?, space.index_of(y.as_ref())?);
            if table[x].replace(y).is_some_and(|old| old != y) {
                return Err(KernelError::InvalidInput(format!(
                    "point {:?} assigned two images",
                    space.label(x)
                )));
            }
        }
        Ok(FinitePartialMap { space: space.clone(), table })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        FinitePartialMap { space: space.clone(), table: (0..space.len()).map(Some).collect() }
    }

    pub fn identity_on(subset: &FiniteSubset) -> Self {
        let table = (0..subset.space.len()).map(|i| subset.contains(i).then_some(i)).collect();
        FinitePartialMap { space: subset.space.clone(), table }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn table(&self) -> &[Option<usize>] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table.get(x).copied().flatten()
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        self.table
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (self.space.label(x).to_string(), self.space.label(y).to_string())))
            .collect()
    }

    pub fn domain(&self) -> FiniteSubset {
        let members = self.table.iter().map(Option::is_some).collect();
        FiniteSubset { space: self.space.clone(), members }
    }

    /// `self ∘ first`: defined on `first⁻¹(Dom self)`.
    pub fn after(&self, first: &FinitePartialMap) -> Result<Self> {
        compose(self, first)
    }

    pub fn power(&self, n: usize) -> Self {
        power(self, n)
    }

    pub fn restrict(&self, subset: &FiniteSubset) -> Result<Self> {
        self.space.check_same(&subset.space)?;
        let table = self
            .table
            .iter()
            .enumerate()
            .map(|(x, &y)| if subset.contains(x) { y } else { None })
            .collect();
        Ok(FinitePartialMap { space: self.space.clone(), table })
    }

    pub fn preimage(&self, subset: &FiniteSubset) -> Result<FiniteSubset> {
        preimage(self, subset, 1)
    }

    pub fn image(&self, subset: &FiniteSubset) -> Result<FiniteSubset> {
        self.space.check_same(&subset.space)?;
        let mut out = FiniteSubset::empty(&self.space);
        for x in subset.indices() {
            if let Some(y) = self.table[x] {
                out.members[y] = true;
            }
        }
        Ok(out)
    }

    /// `(preperiod, period)` of the sequence `f⁰, f¹, f², …` of partial maps.
    pub fn power_preperiod_period(&self) -> (usize, usize) {
        let mut seen: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
        let mut current = FinitePartialMap::identity(&self.space);
        let mut n = 0;
        loop {
            if let Some(&first) = seen.get(&current.table) {
                return (first, n - first);
            }
            seen.insert(current.table.clone(), n);
            current = compose(self, &current).expect("same space");
            n += 1;
        }
    }
}

impl fmt::Debug for FinitePartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, y) in self.pairs() {
            m.entry(&x, &y);
        }
        m.finish()
    }
}

/// `g ∘ f` with `Dom(g f) = f⁻¹(Dom g)`.
pub fn compose(g: &FinitePartialMap, f: &FinitePartialMap) -> Result<FinitePartialMap> {
    f.space.check_same(&g.space)?;
    let table = f.table.iter().map(|y| y.and_then(|y| g.table[y])).collect();
    Ok(FinitePartialMap { space: f.space.clone(), table })
}

/// n-fold composite; `power(f, 0)` is the identity on the whole space.
pub fn power(f: &FinitePartialMap, n: usize) -> FinitePartialMap {
    let table = (0..f.space.len())
        .map(|x| (0..n).try_fold(x, |y, _| f.table[y]))
        .collect();
    FinitePartialMap { space: f.space.clone(), table }
}

/// `f⁻ⁿ(E) = {x ∈ Dom fⁿ : fⁿ(x) ∈ E}`.
pub fn preimage(f: &FinitePartialMap, subset: &FiniteSubset, n: usize) -> Result<FiniteSubset> {
    f.space.check_same(&subset.space)?;
    let fnth = power(f, n);
    let members = fnth.table.iter().map(|y| y.is_some_and(|y| subset.contains(y))).collect();
    Ok(FiniteSubset { space: f.space.clone(), members })
}

/// Largest `S ⊆ E` with `S ⊆ Dom f` and `f(S) = S`.
///
/// First stabilises `D_{b+1} = E ∩ f⁻¹(D_b)` (each strict step drops a
/// point), then iterates images from the stable set until two consecutive
/// terms agree.
pub fn invariant_part(f: &FinitePartialMap, subset: &FiniteSubset) -> Result<FiniteSubset> {
    f.space.check_same(&subset.space)?;
    let mut d = subset.clone();
    loop {
        let next = subset.intersect(&f.preimage(&d)?)?;
        if next == d {
            break;
        }
        d = next;
    }
    let mut s = d;
    loop {
        let next = f.image(&s)?;
        if next == s {
            return Ok(s);
        }
        s = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space3() -> FiniteSpace {
        FiniteSpace::new(["1", "2", "3"]).unwrap()
    }

    fn chain(space: &FiniteSpace) -> FinitePartialMap {
        FinitePartialMap::from_pairs(space, [("1", "2"), ("2", "3"), ("3", "3")]).unwrap()
    }

    fn set(space: &FiniteSpace, labels: &[&str]) -> FiniteSubset {
        FiniteSubset::from_labels(space, labels.iter().copied()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let s = space3();
        let f = FinitePartialMap::from_pairs(&s, [("1", "2")]).unwrap();
        let g = FinitePartialMap::from_pairs(&s, [("2", "3")]).unwrap();
        assert_eq!(compose(&g, &f).unwrap().pairs(), vec![("1".into(), "3".into())]);

        let g = FinitePartialMap::from_pairs(&s, [("1", "1")]).unwrap();
        assert!(compose(&g, &f).unwrap().pairs().is_empty());

        let c = chain(&s);
        let cc = compose(&c, &c).unwrap();
        assert_eq!(cc, FinitePartialMap::from_pairs(&s, [("1", "3"), ("2", "3"), ("3", "3")]).unwrap());
    }

    #[test]
    fn power_examples() {
        let s = space3();
        assert_eq!(power(&chain(&s), 0), FinitePartialMap::identity(&s));
        assert_eq!(
            power(&chain(&s), 2),
            FinitePartialMap::from_pairs(&s, [("1", "3"), ("2", "3"), ("3", "3")]).unwrap()
        );
        let f = FinitePartialMap::from_pairs(&s, [("1", "2")]).unwrap();
        assert!(power(&f, 2).pairs().is_empty());
    }

    #[test]
    fn preimage_examples() {
        let s = space3();
        assert_eq!(preimage(&chain(&s), &set(&s, &["3"]), 2).unwrap(), FiniteSubset::full(&s));
        let e = set(&s, &["2"]);
        assert_eq!(preimage(&chain(&s), &e, 0).unwrap(), e);
        let f = FinitePartialMap::from_pairs(&s, [("1", "2")]).unwrap();
        assert!(preimage(&f, &set(&s, &["1"]), 1).unwrap().is_empty());
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = space3();
        let b = FiniteSpace::new(["x"]).unwrap();
        let f = FinitePartialMap::identity(&a);
        let g = FinitePartialMap::identity(&b);
        assert!(matches!(compose(&g, &f), Err(KernelError::SpaceMismatch(_))));
        assert!(preimage(&f, &FiniteSubset::full(&b), 1).is_err());
    }

    #[test]
    fn invalid_tables() {
        let s = space3();
        assert!(FinitePartialMap::new(&s, vec![Some(5), None, None]).is_err());
        assert!(FinitePartialMap::from_pairs(&s, [("1", "2"), ("1", "3")]).is_err());
        assert!(FiniteSpace::new(["a", "a"]).is_err());
    }

    #[test]
    fn invariant_part_example() {
        let s = space3();
        let f = FinitePartialMap::from_pairs(&s, [("1", "2"), ("2", "2"), ("3", "1")]).unwrap();
        assert_eq!(invariant_part(&f, &set(&s, &["1", "2"])).unwrap(), set(&s, &["2"]));
        let id = FinitePartialMap::identity(&s);
        let e = set(&s, &["1", "3"]);
        assert_eq!(invariant_part(&id, &e).unwrap(), e);
    }

    #[test]
    fn preperiod_period() {
        let s = space3();
        assert_eq!(chain(&s).power_preperiod_period(), (2, 1));
        let swap = FinitePartialMap::from_pairs(&s, [("1", "2"), ("2", "1"), ("3", "3")]).unwrap();
        assert_eq!(swap.power_preperiod_period(), (0, 2));
    }
}
