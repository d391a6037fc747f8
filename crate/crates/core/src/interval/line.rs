//! Real intervals with rational or infinite endpoints and open/closed flags.

use std::cmp::Ordering;
use std::fmt;

use num::{Signed, Zero};

use crate::error::{KernelError, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// An endpoint value: a rational or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cut {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Cut {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Cut::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cut::Finite(_))
    }

    pub fn parse(text: &str) -> Result<Cut> {
        match text.trim() {
            "-inf" => Ok(Cut::NegInf),
            "inf" | "+inf" => Ok(Cut::PosInf),
            other => parse_rational(other).map(Cut::Finite),
        }
    }

    /// Image under `x ↦ λx + μ` for `λ ≠ 0`.
    fn affine(&self, slope: &Rational, intercept: &Rational) -> Cut {
        match self {
            Cut::Finite(q) => Cut::Finite(slope * q + intercept),
            Cut::NegInf if slope.is_positive() => Cut::NegInf,
            Cut::NegInf => Cut::PosInf,
            Cut::PosInf if slope.is_positive() => Cut::PosInf,
            Cut::PosInf => Cut::NegInf,
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::NegInf => f.write_str("-inf"),
            Cut::PosInf => f.write_str("inf"),
            Cut::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

/// A nonempty interval of the real line.
///
/// Infinite endpoints are always open; a degenerate interval is a closed
/// point. Constructors return `None` for empty input instead of building an
/// empty value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Cut,
    lo_closed: bool,
    hi: Cut,
    hi_closed: bool,
}

/// Lower bounds ordered by where they start: `[a` comes before `(a`.
fn cmp_lower(a: (&Cut, bool), b: (&Cut, bool)) -> Ordering {
    a.0.cmp(b.0).then_with(|| b.1.cmp(&a.1))
}

/// Upper bounds ordered by where they stop: `a)` comes before `a]`.
fn cmp_upper(a: (&Cut, bool), b: (&Cut, bool)) -> Ordering {
    a.0.cmp(b.0).then_with(|| a.1.cmp(&b.1))
}

impl Interval {
    pub fn new(lo: Cut, lo_closed: bool, hi: Cut, hi_closed: bool) -> Option<Interval> {
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        match lo.cmp(&hi) {
            Ordering::Greater => None,
            Ordering::Equal if !(lo_closed && hi_closed) => None,
            _ => Some(Interval { lo, lo_closed, hi, hi_closed }),
        }
    }

    /// Like [`Interval::new`] but rejects anything that is not a well-formed
    /// nonempty interval, including closed infinite endpoints.
    pub fn strict(lo: Cut, lo_closed: bool, hi: Cut, hi_closed: bool) -> Result<Interval> {
        if (lo_closed && !lo.is_finite()) || (hi_closed && !hi.is_finite()) {
            return Err(KernelError::InvalidInput("infinite interval endpoints must be open".into()));
        }
        let text = format!("{}{lo}, {hi}{}", if lo_closed { '[' } else { '(' }, if hi_closed { ']' } else { ')' });
        Interval::new(lo, lo_closed, hi, hi_closed)
            .ok_or_else(|| KernelError::InvalidInput(format!("empty or inverted interval {text}")))
    }

    pub fn closed(lo: Rational, hi: Rational) -> Option<Interval> {
        Interval::new(Cut::Finite(lo), true, Cut::Finite(hi), true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Option<Interval> {
        Interval::new(Cut::Finite(lo), false, Cut::Finite(hi), false)
    }

    pub fn point(x: Rational) -> Interval {
        Interval { lo: Cut::Finite(x.clone()), lo_closed: true, hi: Cut::Finite(x), hi_closed: true }
    }

    pub fn real_line() -> Interval {
        Interval { lo: Cut::NegInf, lo_closed: false, hi: Cut::PosInf, hi_closed: false }
    }

    pub fn lo(&self) -> &Cut {
        &self.lo
    }

    pub fn hi(&self) -> &Cut {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_point(&self) -> Option<&Rational> {
        if self.is_point() {
            self.lo.finite()
        } else {
            None
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == Cut::NegInf && self.hi == Cut::PosInf
    }

    pub fn is_closed(&self) -> bool {
        (self.lo_closed || !self.lo.is_finite()) && (self.hi_closed || !self.hi.is_finite())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Cut::NegInf => true,
            Cut::Finite(l) => if self.lo_closed { l <= x } else { l < x },
            Cut::PosInf => false,
        };
        let below = match &self.hi {
            Cut::PosInf => true,
            Cut::Finite(h) => if self.hi_closed { x <= h } else { x < h },
            Cut::NegInf => false,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = if cmp_lower((&self.lo, self.lo_closed), (&other.lo, other.lo_closed)) == Ordering::Less {
            (other.lo.clone(), other.lo_closed)
        } else {
            (self.lo.clone(), self.lo_closed)
        };
        let (hi, hi_closed) = if cmp_upper((&self.hi, self.hi_closed), (&other.hi, other.hi_closed)) == Ordering::Less {
            (self.hi.clone(), self.hi_closed)
        } else {
            (other.hi.clone(), other.hi_closed)
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        cmp_lower((&other.lo, other.lo_closed), (&self.lo, self.lo_closed)) != Ordering::Greater
            && cmp_upper((&self.hi, self.hi_closed), (&other.hi, other.hi_closed)) != Ordering::Greater
    }

    /// `self \ other` as at most two disjoint intervals, left part first.
    pub fn difference(&self, other: &Interval) -> Vec<Interval> {
        let left = Interval::new(Cut::NegInf, false, other.lo.clone(), !other.lo_closed);
        let right = Interval::new(other.hi.clone(), !other.hi_closed, Cut::PosInf, false);
        [left, right]
            .into_iter()
            .flatten()
            .filter_map(|side| self.intersect(&side))
            .collect()
    }

    pub fn closure(&self) -> Interval {
        Interval {
            lo: self.lo.clone(),
            lo_closed: self.lo.is_finite(),
            hi: self.hi.clone(),
            hi_closed: self.hi.is_finite(),
        }
    }

    pub fn interior(&self) -> Option<Interval> {
        Interval::new(self.lo.clone(), false, self.hi.clone(), false)
    }

    /// Whether `self ∪ other` is a single interval.
    pub fn joins(&self, other: &Interval) -> bool {
        let (first, second) = if cmp_lower((&self.lo, self.lo_closed), (&other.lo, other.lo_closed)) == Ordering::Greater {
            (other, self)
        } else {
            (self, other)
        };
        match first.hi.cmp(&second.lo) {
            Ordering::Greater => true,
            Ordering::Equal => first.hi_closed || second.lo_closed,
            Ordering::Less => false,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if cmp_lower((&self.lo, self.lo_closed), (&other.lo, other.lo_closed)) == Ordering::Greater {
            (other.lo.clone(), other.lo_closed)
        } else {
            (self.lo.clone(), self.lo_closed)
        };
        let (hi, hi_closed) = if cmp_upper((&self.hi, self.hi_closed), (&other.hi, other.hi_closed)) == Ordering::Less {
            (other.hi.clone(), other.hi_closed)
        } else {
            (self.hi.clone(), self.hi_closed)
        };
        Interval { lo, lo_closed, hi, hi_closed }
    }

    /// Image under `x ↦ λx + μ`.
    pub fn affine_image(&self, slope: &Rational, intercept: &Rational) -> Interval {
        if slope.is_zero() {
            return Interval::point(intercept.clone());
        }
        let a = (self.lo.affine(slope, intercept), self.lo_closed);
        let b = (self.hi.affine(slope, intercept), self.hi_closed);
        let ((lo, lo_closed), (hi, hi_closed)) = if slope.is_positive() { (a, b) } else { (b, a) };
        Interval { lo, lo_closed, hi, hi_closed }
    }

    /// Preimage under `x ↦ λx + μ`; `None` when empty.
    pub fn affine_preimage(&self, slope: &Rational, intercept: &Rational) -> Option<Interval> {
        if slope.is_zero() {
            return self.contains(intercept).then(Interval::real_line);
        }
        let inv = slope.recip();
        let shift = -(intercept * &inv);
        Some(self.affine_image(&inv, &shift))
    }

    pub fn to_text(&self) -> [String; 2] {
        [self.lo.to_string(), self.hi.to_string()]
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_point() {
            return write!(f, "{{{}}}", format_rational(p));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorts and merges a family of intervals into the canonical disjoint form.
pub fn normalize(mut parts: Vec<Interval>) -> Vec<Interval> {
    parts.sort_by(|a, b| cmp_lower((&a.lo, a.lo_closed), (&b.lo, b.lo_closed)));
    let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
    for part in parts {
        match out.last_mut() {
            Some(last) if last.joins(&part) => *last = last.hull(&part),
            _ => out.push(part),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn closed(a: Rational, b: Rational) -> Interval {
        Interval::closed(a, b).unwrap()
    }

    #[test]
    fn intersection_flags() {
        let a = closed(rat(0), rat(1));
        let b = Interval::new(Cut::Finite(ratio(1, 2)), false, Cut::Finite(rat(2)), true).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, Interval::new(Cut::Finite(ratio(1, 2)), false, Cut::Finite(rat(1)), true).unwrap());
        let d = Interval::open(rat(1), rat(2)).unwrap();
        assert!(a.intersect(&d).is_none());
    }

    #[test]
    fn difference_leaves_boundary_points() {
        let a = closed(rat(-1), rat(1));
        let b = Interval::open(rat(-1), rat(1)).unwrap();
        assert_eq!(a.difference(&b), vec![Interval::point(rat(-1)), Interval::point(rat(1))]);
        assert!(b.difference(&a).is_empty());
    }

    #[test]
    fn closure_and_interior() {
        let a = Interval::open(ratio(-1, 2), ratio(1, 2)).unwrap();
        assert_eq!(a.closure(), closed(ratio(-1, 2), ratio(1, 2)));
        assert_eq!(closed(rat(-1), rat(1)).interior().unwrap(), Interval::open(rat(-1), rat(1)).unwrap());
        assert!(Interval::point(rat(0)).interior().is_none());
        assert!(Interval::real_line().is_closed());
    }

    #[test]
    fn affine_maps() {
        let a = closed(rat(-1), rat(1));
        assert_eq!(a.affine_preimage(&rat(2), &rat(0)).unwrap(), closed(ratio(-1, 2), ratio(1, 2)));
        let h = Interval::new(Cut::NegInf, false, Cut::Finite(rat(0)), false).unwrap();
        let img = h.affine_image(&rat(-1), &rat(3));
        assert_eq!(img, Interval::new(Cut::Finite(rat(3)), false, Cut::PosInf, false).unwrap());
        assert_eq!(a.affine_preimage(&rat(0), &rat(5)), None);
        assert!(a.affine_preimage(&rat(0), &rat(1)).unwrap().is_real_line());
    }

    #[test]
    fn normalize_merges_touching() {
        let parts = vec![
            Interval::new(Cut::Finite(rat(1)), true, Cut::Finite(rat(2)), false).unwrap(),
            Interval::new(Cut::Finite(rat(0)), false, Cut::Finite(rat(1)), false).unwrap(),
            Interval::open(rat(2), rat(3)).unwrap(),
        ];
        let n = normalize(parts);
        assert_eq!(n.len(), 2);
        assert_eq!(n[0], Interval::open(rat(0), rat(2)).unwrap());
    }

    #[test]
    fn strict_rejects_bad_input() {
        assert!(Interval::strict(Cut::NegInf, true, Cut::Finite(rat(0)), true).is_err());
        assert!(Interval::strict(Cut::Finite(rat(1)), true, Cut::Finite(rat(0)), true).is_err());
        assert!(Interval::strict(Cut::Finite(rat(1)), true, Cut::Finite(rat(1)), false).is_err());
    }
}
