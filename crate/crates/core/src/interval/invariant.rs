//! Invariant parts for piecewise-affine maps.

use num::{One, Signed, Zero};

use crate::carrier::InvariantPart;
use crate::error::{ensure_dim, Result};
use crate::interval::affine::{AxisRule, PiecewiseAffineMap};
use crate::interval::boxset::{BoxSet, Rect};
use crate::interval::line::{Cut, Interval};
use crate::rational::Rational;

/// `f^n(D_n)` where `D_n = ⋂_{i≤n} f^{-i}(E)`; a decreasing outer bound for `I_f(E)`.
pub fn invariant_part_outer(f: &PiecewiseAffineMap, e: &BoxSet, n: usize) -> Result<BoxSet> {
    ensure_dim(f.dim(), e.dim())?;
    let mut d = e.clone();
    for _ in 0..n {
        d = e.intersect(&f.preimage(&d)?)?;
    }
    let mut s = d;
    for _ in 0..n {
        s = f.image(&s)?;
    }
    Ok(s)
}

/// Exact `I_f(E)` when decidable within `bound` iterations.
///
/// Succeeds when the iterated domains `D_b` stabilise (then images of the
/// stable set are iterated), or when some `D_b` is a single box inside one
/// affine piece, where the largest invariant subset is computed axis by axis.
pub fn invariant_part(f: &PiecewiseAffineMap, e: &BoxSet, bound: usize) -> Result<InvariantPart<BoxSet>> {
    ensure_dim(f.dim(), e.dim())?;
    let mut d = e.clone();
    for b in 0..=bound {
        if d.is_empty() {
            return Ok(InvariantPart::Exact { set: d, steps: b });
        }
        if let [rect] = d.rects() {
            if let Some(piece) = f.pieces().iter().find(|p| d.is_subset(&p.domain).unwrap_or(false)) {
                let set = single_piece(&piece.rule, rect);
                return Ok(InvariantPart::Exact { set, steps: b });
            }
        }
        let next = e.intersect(&f.preimage(&d)?)?;
        if next.same_set(&d)? {
            return stable_images(f, d, b, bound);
        }
        d = next;
    }
    Ok(InvariantPart::Unknown { outer: invariant_part_outer(f, e, bound)?, bound })
}

fn stable_images(f: &PiecewiseAffineMap, d: BoxSet, steps: usize, bound: usize) -> Result<InvariantPart<BoxSet>> {
    let mut s = d;
    for a in 0..=bound {
        let next = f.image(&s)?;
        if next.same_set(&s)? {
            return Ok(InvariantPart::Exact { set: s, steps: steps + a });
        }
        s = next;
    }
    Ok(InvariantPart::Unknown { outer: s, bound })
}

fn single_piece(rule: &[AxisRule], rect: &Rect) -> BoxSet {
    let mut acc = BoxSet::full(0);
    for (r, j) in rule.iter().zip(rect.axes()) {
        let axis = axis_invariant(r, j);
        if axis.is_empty() {
            return BoxSet::empty(rect.dim());
        }
        acc = acc.product(&axis);
    }
    acc
}

/// Largest `S ⊆ J` with `g(S) = S` for `g(x) = λx + μ`.
fn axis_invariant(rule: &AxisRule, j: &Interval) -> BoxSet {
    let (lambda, mu) = (&rule.slope, &rule.intercept);
    let everything_or_nothing = |whole: bool| if whole { BoxSet::from_interval(j.clone()) } else { BoxSet::empty(1) };
    if lambda.is_one() {
        return everything_or_nothing(mu.is_zero() || j.is_real_line());
    }
    if lambda.is_zero() {
        return point_if_inside(mu, j);
    }
    if *lambda == -Rational::one() {
        let mirrored = j.affine_image(lambda, mu);
        return j.intersect(&mirrored).map(BoxSet::from_interval).unwrap_or_else(|| BoxSet::empty(1));
    }
    let p = mu / (Rational::one() - lambda);
    if lambda.is_negative() {
        return if j.is_real_line() { BoxSet::full(1) } else { point_if_inside(&p, j) };
    }
    let mut acc = point_if_inside(&p, j);
    let rays = [
        Interval::new(Cut::Finite(p.clone()), false, Cut::PosInf, false),
        Interval::new(Cut::NegInf, false, Cut::Finite(p.clone()), false),
    ];
    for ray in rays.into_iter().flatten() {
        if ray.is_subset(j) {
            acc = acc.union(&BoxSet::from_interval(ray)).expect("one dimension");
        }
    }
    acc
}

fn point_if_inside(x: &Rational, j: &Interval) -> BoxSet {
    if j.contains(x) {
        BoxSet::point(std::slice::from_ref(x))
    } else {
        BoxSet::empty(1)
    }
}
