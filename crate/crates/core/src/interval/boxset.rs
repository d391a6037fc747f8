//! Finite unions of axis-parallel boxes in ℚⁿ ⊂ ℝⁿ.

use std::fmt;

use crate::error::{ensure_dim, KernelError, Result};
use crate::interval::line::{normalize, Interval};
use crate::rational::Rational;

/// A product of nonempty intervals, one per axis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect(Vec<Interval>);

impl Rect {
    pub fn new(axes: Vec<Interval>) -> Rect {
        Rect(axes)
    }

    pub fn full(dim: usize) -> Rect {
        Rect(vec![Interval::real_line(); dim])
    }

    pub fn point(coords: &[Rational]) -> Rect {
        Rect(coords.iter().cloned().map(Interval::point).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.0
    }

    pub fn axis(&self, i: usize) -> &Interval {
        &self.0[i]
    }

    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(Rect)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.0.iter().zip(x).all(|(i, v)| i.contains(v))
    }

    pub fn is_subset(&self, other: &Rect) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_bounded(&self) -> bool {
        self.0.iter().all(Interval::is_bounded)
    }

    pub fn closure(&self) -> Rect {
        Rect(self.0.iter().map(Interval::closure).collect())
    }

    /// `self \ other` as disjoint boxes (slab decomposition).
    pub fn minus(&self, other: &Rect) -> Vec<Rect> {
        if self.intersect(other).is_none() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut core = self.0.clone();
        for i in 0..self.dim() {
            for side in self.0[i].difference(&other.0[i]) {
                let mut axes = core.clone();
                axes[i] = side;
                out.push(Rect(axes));
            }
            core[i] = self.0[i].intersect(&other.0[i]).expect("boxes overlap on every axis");
        }
        out
    }

    fn with_axis(&self, i: usize, interval: Interval) -> Rect {
        let mut axes = self.0.clone();
        axes[i] = interval;
        Rect(axes)
    }
}

impl fmt::Debug for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("×")?;
            }
            write!(f, "{a:?}")?;
        }
        Ok(())
    }
}

/// A finite union of pairwise disjoint boxes of a fixed dimension.
///
/// In one dimension the representation is canonical (sorted, merged). In
/// higher dimensions equality is decided by mutual inclusion, so
/// `PartialEq` is set equality and never compares representations.
#[derive(Clone)]
pub struct BoxSet {
    dim: usize,
    rects: Vec<Rect>,
}

impl BoxSet {
    pub fn empty(dim: usize) -> BoxSet {
        BoxSet { dim, rects: Vec::new() }
    }

    pub fn full(dim: usize) -> BoxSet {
        BoxSet { dim, rects: vec![Rect::full(dim)] }
    }

    pub fn from_rect(rect: Rect) -> BoxSet {
        BoxSet { dim: rect.dim(), rects: vec![rect] }
    }

    pub fn from_interval(interval: Interval) -> BoxSet {
        BoxSet::from_rect(Rect(vec![interval]))
    }

    pub fn point(coords: &[Rational]) -> BoxSet {
        BoxSet::from_rect(Rect::point(coords))
    }

    /// Union of possibly overlapping boxes.
    pub fn from_rects(dim: usize, rects: impl IntoIterator<Item = Rect>) -> Result<BoxSet> {
        let mut acc = BoxSet::empty(dim);
        for r in rects {
            ensure_dim(dim, r.dim())?;
            acc = acc.union(&BoxSet::from_rect(r))?;
        }
        Ok(acc)
    }

    /// Builds from boxes already known to be pairwise disjoint.
    pub(crate) fn from_disjoint(dim: usize, rects: Vec<Rect>) -> BoxSet {
        BoxSet { dim, rects }.simplified()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rects.iter().any(|r| r.contains(x))
    }

    fn check(&self, other: &BoxSet) -> Result<()> {
        ensure_dim(self.dim, other.dim)
    }

    pub fn intersect(&self, other: &BoxSet) -> Result<BoxSet> {
        self.check(other)?;
        let rects = self
            .rects
            .iter()
            .flat_map(|a| other.rects.iter().filter_map(move |b| a.intersect(b)))
            .collect();
        Ok(BoxSet::from_disjoint(self.dim, rects))
    }

    pub fn difference(&self, other: &BoxSet) -> Result<BoxSet> {
        self.check(other)?;
        let mut rects = self.rects.clone();
        for b in &other.rects {
            rects = rects.iter().flat_map(|a| a.minus(b)).collect();
            if rects.is_empty() {
                break;
            }
        }
        Ok(BoxSet::from_disjoint(self.dim, rects))
    }

    pub fn union(&self, other: &BoxSet) -> Result<BoxSet> {
        let extra = other.difference(self)?;
        let mut rects = self.rects.clone();
        rects.extend(extra.rects);
        Ok(BoxSet::from_disjoint(self.dim, rects))
    }

    pub fn complement(&self) -> BoxSet {
        BoxSet::full(self.dim).difference(self).expect("same dimension")
    }

    pub fn is_subset(&self, other: &BoxSet) -> Result<bool> {
        self.check(other)?;
        if self.rects.iter().all(|a| other.rects.iter().any(|b| a.is_subset(b))) {
            return Ok(true);
        }
        Ok(self.difference(other)?.is_empty())
    }

    pub fn same_set(&self, other: &BoxSet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn closure(&self) -> BoxSet {
        let mut acc = BoxSet::empty(self.dim);
        for r in &self.rects {
            acc = acc.union(&BoxSet::from_rect(r.closure())).expect("same dimension");
        }
        acc
    }

    pub fn interior(&self) -> BoxSet {
        self.complement().closure().complement()
    }

    pub fn is_bounded(&self) -> bool {
        self.rects.iter().all(Rect::is_bounded)
    }

    pub fn is_closed(&self) -> bool {
        self.closure().is_subset(self).expect("same dimension")
    }

    pub fn is_open(&self) -> bool {
        self.is_subset(&self.interior()).expect("same dimension")
    }

    pub fn is_compact(&self) -> bool {
        self.is_bounded() && self.is_closed()
    }

    /// Whether `self` is open in the subspace `ambient`; requires `self ⊆ ambient`.
    pub fn is_open_in(&self, ambient: &BoxSet) -> Result<bool> {
        self.require_subset(ambient)?;
        let rest = ambient.difference(self)?;
        Ok(self.intersect(&rest.closure())?.is_empty())
    }

    /// Whether `self` is closed in the subspace `ambient`; requires `self ⊆ ambient`.
    pub fn is_closed_in(&self, ambient: &BoxSet) -> Result<bool> {
        self.require_subset(ambient)?;
        self.closure().intersect(ambient)?.is_subset(self)
    }

    /// Locally compact subsets of ℝⁿ are exactly the locally closed ones.
    pub fn is_locally_compact(&self) -> bool {
        self.closure().difference(self).expect("same dimension").is_closed()
    }

    fn require_subset(&self, ambient: &BoxSet) -> Result<()> {
        if self.is_subset(ambient)? {
            Ok(())
        } else {
            Err(KernelError::Precondition("subset is not contained in the ambient set".into()))
        }
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &BoxSet) -> BoxSet {
        let rects = self
            .rects
            .iter()
            .flat_map(|a| {
                other.rects.iter().map(move |b| {
                    let mut axes = a.0.clone();
                    axes.extend(b.0.iter().cloned());
                    Rect(axes)
                })
            })
            .collect();
        BoxSet::from_disjoint(self.dim + other.dim, rects)
    }

    /// Merges boxes that differ on a single axis where they join, and sorts.
    fn simplified(mut self) -> BoxSet {
        let mut changed = true;
        while changed {
            changed = false;
            'scan: for i in 0..self.rects.len() {
                for j in i + 1..self.rects.len() {
                    if let Some(merged) = merge_pair(&self.rects[i], &self.rects[j]) {
                        self.rects[i] = merged;
                        self.rects.swap_remove(j);
                        changed = true;
                        break 'scan;
                    }
                }
            }
        }
        if self.dim == 1 {
            let parts = self.rects.into_iter().map(|r| r.0.into_iter().next().expect("one axis")).collect();
            self.rects = normalize(parts).into_iter().map(|i| Rect(vec![i])).collect();
        } else {
            self.rects.sort();
        }
        self
    }
}

fn merge_pair(a: &Rect, b: &Rect) -> Option<Rect> {
    let mut differing = (0..a.dim()).filter(|&i| a.0[i] != b.0[i]);
    match (differing.next(), differing.next()) {
        (None, _) => Some(a.clone()),
        (Some(i), None) if a.0[i].joins(&b.0[i]) => Some(a.with_axis(i, a.0[i].hull(&b.0[i]))),
        _ => None,
    }
}

impl PartialEq for BoxSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.same_set(other).unwrap_or(false)
    }
}

impl Eq for BoxSet {}

impl fmt::Debug for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rects.is_empty() {
            return f.write_str("∅");
        }
        for (i, r) in self.rects.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{r:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::line::Cut;
    use crate::rational::{rat, ratio};

    fn iv(lo: Rational, lc: bool, hi: Rational, hc: bool) -> Interval {
        Interval::new(Cut::Finite(lo), lc, Cut::Finite(hi), hc).unwrap()
    }

    fn set1(i: Interval) -> BoxSet {
        BoxSet::from_interval(i)
    }

    fn square(a: Interval, b: Interval) -> BoxSet {
        BoxSet::from_rect(Rect::new(vec![a, b]))
    }

    #[test]
    fn one_dimensional_algebra() {
        let a = set1(iv(rat(0), true, rat(1), true));
        let b = set1(iv(ratio(1, 2), false, rat(2), true));
        assert_eq!(a.intersect(&b).unwrap(), set1(iv(ratio(1, 2), false, rat(1), true)));

        let c = set1(iv(rat(-1), true, rat(1), true));
        let d = set1(iv(rat(-1), false, rat(1), false));
        let diff = c.difference(&d).unwrap();
        assert_eq!(diff.rects().len(), 2);
        assert!(diff.contains(&[rat(-1)]) && diff.contains(&[rat(1)]) && !diff.contains(&[rat(0)]));
    }

    #[test]
    fn two_dimensional_intersection() {
        let unit = iv(rat(0), true, rat(1), true);
        let a = square(unit.clone(), unit.clone());
        let b = square(iv(ratio(1, 2), false, rat(2), true), unit.clone());
        assert_eq!(a.intersect(&b).unwrap(), square(iv(ratio(1, 2), false, rat(1), true), unit));
    }

    #[test]
    fn closure_interior_examples() {
        let a = set1(iv(ratio(-1, 2), false, ratio(1, 2), false));
        assert_eq!(a.closure(), set1(iv(ratio(-1, 2), true, ratio(1, 2), true)));
        let b = set1(iv(rat(-1), true, rat(1), true));
        assert_eq!(b.interior(), set1(iv(rat(-1), false, rat(1), false)));

        let open_sq = square(iv(rat(0), false, rat(1), false), iv(rat(0), false, rat(1), false));
        let with_corner = open_sq.union(&BoxSet::point(&[rat(0), rat(0)])).unwrap();
        let unit = iv(rat(0), true, rat(1), true);
        assert_eq!(with_corner.closure(), square(unit.clone(), unit));
        assert!(!with_corner.is_locally_compact());
    }

    #[test]
    fn relative_topology() {
        let closed_half = set1(iv(ratio(-1, 2), true, ratio(1, 2), true));
        let closed_one = set1(iv(rat(-1), true, rat(1), true));
        assert!(closed_half.is_compact());
        assert!(!closed_half.is_open_in(&closed_one).unwrap());
        let open_half = set1(iv(ratio(-1, 2), false, ratio(1, 2), false));
        let open_one = set1(iv(rat(-1), false, rat(1), false));
        assert!(open_half.is_open_in(&open_one).unwrap());
        assert!(closed_half.is_closed_in(&open_one).unwrap());
        assert!(open_one.is_open_in(&closed_half).is_err());
    }

    #[test]
    fn local_compactness() {
        assert!(set1(iv(ratio(-1, 2), false, ratio(1, 2), false)).is_locally_compact());
        assert!(BoxSet::point(&[rat(0)]).is_locally_compact());
        let half_open = set1(iv(rat(0), true, rat(1), false));
        assert!(half_open.is_locally_compact());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(BoxSet::full(1).intersect(&BoxSet::full(2)).is_err());
    }

    #[test]
    fn two_dimensional_equality_ignores_representation() {
        let unit = iv(rat(0), true, rat(1), true);
        let a = square(unit.clone(), unit.clone());
        let left = square(iv(rat(0), true, ratio(1, 2), false), unit.clone());
        let right = square(iv(ratio(1, 2), true, rat(1), true), unit.clone());
        let top = square(unit.clone(), iv(ratio(1, 2), true, rat(1), true));
        let b = BoxSet::from_rects(2, left.rects().iter().chain(right.rects()).chain(top.rects()).cloned()).unwrap();
        assert_eq!(a, b);
        assert!(a.complement().intersect(&b).unwrap().is_empty());
    }
}
