//! Exact properness test for restrictions of piecewise-affine maps.
//!
//! `f|_D : D → Y` fails to be proper exactly when some sequence in `D`
//! without a limit in `D` has images converging in `Y`. Passing to a
//! subsequence inside one box `B` of one piece, either the sequence
//! converges to a point of `cl(B) \ D`, or some coordinate diverges, which
//! forces the slope on that axis to be zero. Both cases are finite box
//! computations.

use num::Zero;

use crate::error::{KernelError, Result};
use crate::interval::affine::{rect_image, set_image, PiecewiseAffineMap};
use crate::interval::boxset::{BoxSet, Rect};
use crate::interval::line::Interval;

/// Why a restriction failed to be proper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Escape {
    /// Points of `D` accumulate at a boundary point outside `D` whose image lies in `Y`.
    Boundary { limit: BoxSet },
    /// Points of `D` run off to infinity along `axis` while their images stay in a compact part of `Y`.
    Infinity { axis: usize, limit: BoxSet },
}

/// Decides properness of `f|_D : D → Y`; returns the escape witness if not proper.
pub fn properness_escape(f: &PiecewiseAffineMap, d: &BoxSet, y: &BoxSet) -> Result<Option<Escape>> {
    if !d.is_subset(&f.domain())? {
        return Err(KernelError::Precondition("restriction set is not inside the map's domain".into()));
    }
    if !f.image(d)?.is_subset(y)? {
        return Err(KernelError::Precondition("image of the restriction set leaves the target".into()));
    }
    for piece in f.pieces() {
        let part = piece.domain.intersect(d)?;
        for rect in part.rects() {
            let outside = BoxSet::from_rect(rect.closure()).difference(d)?;
            let limit = set_image(&piece.rule, &outside).intersect(y)?;
            if !limit.is_empty() {
                return Ok(Some(Escape::Boundary { limit }));
            }
            let closed = rect.closure();
            for (axis, interval) in rect.axes().iter().enumerate() {
                if interval.is_bounded() || !piece.rule[axis].slope.is_zero() {
                    continue;
                }
                let mut axes = rect_image(&piece.rule, &closed).axes().to_vec();
                axes[axis] = Interval::point(piece.rule[axis].intercept.clone());
                let limit = BoxSet::from_rect(Rect::new(axes)).intersect(y)?;
                if !limit.is_empty() {
                    return Ok(Some(Escape::Infinity { axis, limit }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_proper_on(f: &PiecewiseAffineMap, d: &BoxSet, y: &BoxSet) -> Result<bool> {
    Ok(properness_escape(f, d, y)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::affine::{AxisRule, Piece};
    use crate::interval::line::Cut;
    use crate::rational::{rat, ratio, Rational};

    fn iv(lo: Rational, lc: bool, hi: Rational, hc: bool) -> BoxSet {
        BoxSet::from_interval(Interval::new(Cut::Finite(lo), lc, Cut::Finite(hi), hc).unwrap())
    }

    #[test]
    fn doubling_on_half_open_window() {
        let f = PiecewiseAffineMap::affine(BoxSet::full(1), vec![AxisRule::new(rat(2), rat(0))]).unwrap();
        let d = iv(ratio(-1, 4), false, ratio(1, 4), false);
        let y = iv(ratio(-1, 2), false, ratio(1, 2), false);
        assert!(is_proper_on(&f, &d, &y).unwrap());
        // -1/4 would map to -1/2, outside the target.
        let half_open = iv(ratio(-1, 4), true, ratio(1, 4), false);
        assert!(is_proper_on(&f, &half_open, &y).is_err());
    }

    #[test]
    fn clamp_collapses_onto_floor() {
        let low = BoxSet::from_interval(Interval::new(Cut::NegInf, false, Cut::Finite(rat(1)), true).unwrap());
        let high = BoxSet::from_interval(Interval::new(Cut::Finite(rat(1)), false, Cut::PosInf, false).unwrap());
        let f = PiecewiseAffineMap::new(
            1,
            vec![
                Piece { domain: low, rule: vec![AxisRule::new(rat(0), rat(0))] },
                Piece { domain: high, rule: vec![AxisRule::new(rat(1), rat(-1))] },
            ],
        )
        .unwrap();
        let d = iv(rat(0), true, rat(1), false);
        let y = iv(rat(0), true, ratio(1, 2), true);
        assert!(matches!(properness_escape(&f, &d, &y).unwrap(), Some(Escape::Boundary { .. })));
        assert!(is_proper_on(&f, &iv(rat(0), true, rat(1), true), &y).unwrap());
    }

    #[test]
    fn constant_axis_on_unbounded_domain() {
        let f = PiecewiseAffineMap::affine(BoxSet::full(1), vec![AxisRule::new(rat(0), rat(3))]).unwrap();
        let y = BoxSet::point(&[rat(3)]);
        assert!(matches!(
            properness_escape(&f, &BoxSet::full(1), &y).unwrap(),
            Some(Escape::Infinity { axis: 0, .. })
        ));
    }

    #[test]
    fn preconditions_are_checked() {
        let f = PiecewiseAffineMap::identity_on(&iv(rat(0), true, rat(1), true));
        assert!(is_proper_on(&f, &iv(rat(0), true, rat(2), true), &BoxSet::full(1)).is_err());
        assert!(is_proper_on(&f, &iv(rat(0), true, rat(1), true), &iv(rat(0), true, ratio(1, 2), true)).is_err());
    }
}
