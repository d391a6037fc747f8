//! Piecewise componentwise-affine partial maps of ℝⁿ.

use std::fmt;

use num::{One, Zero};

use crate::error::{ensure_dim, KernelError, Result};
use crate::interval::boxset::{BoxSet, Rect};
use crate::rational::{format_rational, Rational};

/// `x ↦ slope·x + intercept` on one axis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AxisRule {
    pub slope: Rational,
    pub intercept: Rational,
}

impl AxisRule {
    pub fn new(slope: Rational, intercept: Rational) -> AxisRule {
        AxisRule { slope, intercept }
    }

    pub fn identity() -> AxisRule {
        AxisRule::new(Rational::one(), Rational::zero())
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AxisRule) -> AxisRule {
        AxisRule::new(&self.slope * &first.slope, &self.slope * &first.intercept + &self.intercept)
    }
}

impl fmt::Debug for AxisRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x+{}", format_rational(&self.slope), format_rational(&self.intercept))
    }
}

/// Whether two axis rules agree at every point of `interval`.
fn axis_rules_agree(p: &AxisRule, q: &AxisRule, interval: &crate::interval::line::Interval) -> bool {
    match interval.as_point() {
        Some(x) => p.apply(x) == q.apply(x),
        None => p == q,
    }
}

/// Whether two componentwise rules agree at every point of `set`.
pub(crate) fn rules_agree_on(p: &[AxisRule], q: &[AxisRule], set: &BoxSet) -> bool {
    set.rects()
        .iter()
        .all(|r| p.iter().zip(q).zip(r.axes()).all(|((a, b), i)| axis_rules_agree(a, b, i)))
}

pub(crate) fn rect_image(rule: &[AxisRule], rect: &Rect) -> Rect {
    Rect::new(rect.axes().iter().zip(rule).map(|(i, r)| i.affine_image(&r.slope, &r.intercept)).collect())
}

pub(crate) fn set_image(rule: &[AxisRule], set: &BoxSet) -> BoxSet {
    BoxSet::from_rects(set.dim(), set.rects().iter().map(|r| rect_image(rule, r))).expect("same dimension")
}

pub(crate) fn set_preimage(rule: &[AxisRule], set: &BoxSet) -> BoxSet {
    // Preimages of disjoint boxes under a fixed rule are disjoint.
    let rects = set
        .rects()
        .iter()
        .filter_map(|r| {
            r.axes()
                .iter()
                .zip(rule)
                .map(|(i, a)| i.affine_preimage(&a.slope, &a.intercept))
                .collect::<Option<Vec<_>>>()
                .map(Rect::new)
        })
        .collect();
    BoxSet::from_disjoint(set.dim(), rects)
}

/// One piece: an affine product rule on a box-set domain.
#[derive(Clone, Debug)]
pub struct Piece {
    pub domain: BoxSet,
    pub rule: Vec<AxisRule>,
}

/// A continuous partial map given by componentwise affine rules on
/// pairwise disjoint box-set pieces.
#[derive(Clone)]
pub struct PiecewiseAffineMap {
    dim: usize,
    pieces: Vec<Piece>,
}

impl PiecewiseAffineMap {
    /// Validates disjointness of piece domains and continuity on the union.
    pub fn new(dim: usize, pieces: Vec<Piece>) -> Result<PiecewiseAffineMap> {
        for p in &pieces {
            ensure_dim(dim, p.domain.dim())?;
            ensure_dim(dim, p.rule.len())?;
        }
        for (i, p) in pieces.iter().enumerate() {
            for q in &pieces[i + 1..] {
                if !p.domain.intersect(&q.domain)?.is_empty() {
                    return Err(KernelError::InvalidInput("piece domains overlap".into()));
                }
                let meet = q.domain.closure().intersect(&p.domain)?.union(&p.domain.closure().intersect(&q.domain)?)?;
                if !rules_agree_on(&p.rule, &q.rule, &meet) {
                    return Err(KernelError::InvalidInput(format!(
                        "map is discontinuous where pieces meet on {meet:?}"
                    )));
                }
            }
        }
        Ok(PiecewiseAffineMap { dim, pieces }.tidy())
    }

    /// A single rule on a domain; continuity is automatic.
    pub fn affine(domain: BoxSet, rule: Vec<AxisRule>) -> Result<PiecewiseAffineMap> {
        let dim = domain.dim();
        PiecewiseAffineMap::new(dim, vec![Piece { domain, rule }])
    }

    pub fn identity(dim: usize) -> PiecewiseAffineMap {
        PiecewiseAffineMap { dim, pieces: vec![Piece { domain: BoxSet::full(dim), rule: vec![AxisRule::identity(); dim] }] }
    }

    pub fn identity_on(set: &BoxSet) -> PiecewiseAffineMap {
        PiecewiseAffineMap::identity(set.dim()).restrict(set).expect("same dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> BoxSet {
        let rects = self.pieces.iter().flat_map(|p| p.domain.rects().iter().cloned()).collect();
        BoxSet::from_disjoint(self.dim, rects)
    }

    pub fn apply(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let p = self.pieces.iter().find(|p| p.domain.contains(x))?;
        Some(p.rule.iter().zip(x).map(|(r, v)| r.apply(v)).collect())
    }

    pub fn preimage(&self, set: &BoxSet) -> Result<BoxSet> {
        ensure_dim(self.dim, set.dim())?;
        let mut rects = Vec::new();
        for p in &self.pieces {
            let part = p.domain.intersect(&set_preimage(&p.rule, set))?;
            rects.extend(part.rects().iter().cloned());
        }
        Ok(BoxSet::from_disjoint(self.dim, rects))
    }

    pub fn image(&self, set: &BoxSet) -> Result<BoxSet> {
        ensure_dim(self.dim, set.dim())?;
        let mut acc = BoxSet::empty(self.dim);
        for p in &self.pieces {
            let part = p.domain.intersect(set)?;
            acc = acc.union(&set_image(&p.rule, &part))?;
        }
        Ok(acc)
    }

    pub fn restrict(&self, set: &BoxSet) -> Result<PiecewiseAffineMap> {
        ensure_dim(self.dim, set.dim())?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| Ok(Piece { domain: p.domain.intersect(set)?, rule: p.rule.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(PiecewiseAffineMap { dim: self.dim, pieces }.tidy())
    }

    /// `self ∘ first`, defined on `first⁻¹(Dom self)`.
    pub fn after(&self, first: &PiecewiseAffineMap) -> Result<PiecewiseAffineMap> {
        ensure_dim(self.dim, first.dim)?;
        let mut pieces = Vec::new();
        for p in &first.pieces {
            for q in &self.pieces {
                let domain = p.domain.intersect(&set_preimage(&p.rule, &q.domain))?;
                if domain.is_empty() {
                    continue;
                }
                let rule = q.rule.iter().zip(&p.rule).map(|(b, a)| b.after(a)).collect();
                pieces.push(Piece { domain, rule });
            }
        }
        Ok(PiecewiseAffineMap { dim: self.dim, pieces }.tidy())
    }

    pub fn power(&self, n: usize) -> PiecewiseAffineMap {
        let mut acc = PiecewiseAffineMap::identity(self.dim);
        for _ in 0..n {
            acc = self.after(&acc).expect("same dimension");
        }
        acc
    }

    /// Exact equality of partial maps: same domain, same values.
    pub fn same_map(&self, other: &PiecewiseAffineMap) -> Result<bool> {
        ensure_dim(self.dim, other.dim)?;
        if !self.domain().same_set(&other.domain())? {
            return Ok(false);
        }
        for p in &self.pieces {
            for q in &other.pieces {
                let overlap = p.domain.intersect(&q.domain)?;
                if !rules_agree_on(&p.rule, &q.rule, &overlap) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Drops empty pieces and merges pieces that share a rule.
    fn tidy(mut self) -> PiecewiseAffineMap {
        let mut merged: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.drain(..) {
            if p.domain.is_empty() {
                continue;
            }
            match merged.iter_mut().find(|m| m.rule == p.rule) {
                Some(m) => m.domain = m.domain.union(&p.domain).expect("same dimension"),
                None => merged.push(p),
            }
        }
        self.pieces = merged;
        self
    }
}

impl PartialEq for PiecewiseAffineMap {
    fn eq(&self, other: &Self) -> bool {
        self.same_map(other).unwrap_or(false)
    }
}

impl fmt::Debug for PiecewiseAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for p in &self.pieces {
            l.entry(&format_args!("{:?} on {:?}", p.rule, p.domain));
        }
        l.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::line::{Cut, Interval};
    use crate::rational::{rat, ratio};

    fn doubling() -> PiecewiseAffineMap {
        PiecewiseAffineMap::affine(BoxSet::full(1), vec![AxisRule::new(rat(2), rat(0))]).unwrap()
    }

    fn closed(a: Rational, b: Rational) -> BoxSet {
        BoxSet::from_interval(Interval::closed(a, b).unwrap())
    }

    #[test]
    fn doubling_preimage() {
        let pre = doubling().preimage(&closed(rat(-1), rat(1))).unwrap();
        assert_eq!(pre, closed(ratio(-1, 2), ratio(1, 2)));
        let img = doubling().power(3).image(&BoxSet::point(&[rat(1)])).unwrap();
        assert_eq!(img, BoxSet::point(&[rat(8)]));
    }

    #[test]
    fn shift_preimage() {
        let shift = PiecewiseAffineMap::affine(
            BoxSet::full(2),
            vec![AxisRule::identity(), AxisRule::new(rat(1), rat(1))],
        )
        .unwrap();
        let lower = Interval::new(Cut::NegInf, false, Cut::Finite(rat(0)), false).unwrap();
        let target = BoxSet::from_rect(Rect::new(vec![Interval::closed(rat(0), rat(1)).unwrap(), lower]));
        let expected = BoxSet::from_rect(Rect::new(vec![
            Interval::closed(rat(0), rat(1)).unwrap(),
            Interval::new(Cut::NegInf, false, Cut::Finite(rat(-1)), false).unwrap(),
        ]));
        assert_eq!(shift.preimage(&target).unwrap(), expected);
    }

    fn clamp() -> PiecewiseAffineMap {
        let low = BoxSet::from_interval(Interval::new(Cut::NegInf, false, Cut::Finite(rat(1)), true).unwrap());
        let high = BoxSet::from_interval(Interval::new(Cut::Finite(rat(1)), false, Cut::PosInf, false).unwrap());
        PiecewiseAffineMap::new(
            1,
            vec![
                Piece { domain: low, rule: vec![AxisRule::new(rat(0), rat(0))] },
                Piece { domain: high, rule: vec![AxisRule::new(rat(1), rat(-1))] },
            ],
        )
        .unwrap()
    }

    #[test]
    fn continuity_is_enforced() {
        assert_eq!(clamp().apply(&[rat(3)]), Some(vec![rat(2)]));
        let low = BoxSet::from_interval(Interval::new(Cut::NegInf, false, Cut::Finite(rat(1)), true).unwrap());
        let high = BoxSet::from_interval(Interval::new(Cut::Finite(rat(1)), false, Cut::PosInf, false).unwrap());
        let jump = PiecewiseAffineMap::new(
            1,
            vec![
                Piece { domain: low, rule: vec![AxisRule::new(rat(0), rat(0))] },
                Piece { domain: high, rule: vec![AxisRule::new(rat(1), rat(0))] },
            ],
        );
        assert!(jump.is_err());
    }

    #[test]
    fn composition_pulls_back_domains() {
        let f = doubling().restrict(&closed(rat(0), rat(1))).unwrap();
        let g = clamp();
        let gf = g.after(&f).unwrap();
        assert_eq!(gf.domain(), closed(rat(0), rat(1)));
        assert_eq!(gf.apply(&[ratio(3, 4)]), Some(vec![ratio(1, 2)]));
        let a = closed(rat(0), ratio(1, 4));
        assert_eq!(gf.preimage(&a).unwrap(), f.preimage(&g.preimage(&a).unwrap()).unwrap());
        assert_eq!(doubling().power(0), PiecewiseAffineMap::identity(1));
        assert_eq!(g.after(&g).unwrap(), g.power(2));
    }
}
