//! Clamped translation semiflows on a closed box.
//!
//! One axis may move, by `x − vt`, `max(x − vt, L)` or `min(x + vt, U)`; the
//! remaining axes are still. Time maps are piecewise affine, windows are
//! swept boxes, the invariant part has a closed form, and finite-time
//! properness and open-definedness are decided on `[0, 1] × E` with polyhedra
//! in `(t, x)` space.

use num::{Signed, Zero};

use crate::carrier::InvariantPart;
use crate::dynamics::{Compactifiability, Dynamics};
use crate::error::{ensure_dim, KernelError, Result};
use crate::interval::{AxisRule, BoxSet, Cut, Interval, Piece, PiecewiseAffineMap, Rect};
use crate::polyhedron::{Constraint, Polyhedron};
use crate::rational::{format_rational, one, ratio, zero, Rational};

/// Motion of one coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxisFlow {
    Still,
    /// `x − v·t`.
    Translate { velocity: Rational },
    /// `max(x − v·t, L)`, `v > 0`.
    Floor { velocity: Rational, level: Rational },
    /// `min(x + v·t, U)`, `v > 0`.
    Ceil { velocity: Rational, level: Rational },
}

impl AxisFlow {
    fn is_moving(&self) -> bool {
        !matches!(self, AxisFlow::Still)
    }

    fn speed(&self) -> Rational {
        match self {
            AxisFlow::Still => zero(),
            AxisFlow::Translate { velocity } => velocity.abs(),
            AxisFlow::Floor { velocity, .. } | AxisFlow::Ceil { velocity, .. } => velocity.clone(),
        }
    }

    fn descends(&self) -> bool {
        match self {
            AxisFlow::Translate { velocity } => velocity.is_positive(),
            AxisFlow::Floor { .. } => true,
            _ => false,
        }
    }

    fn level(&self) -> Option<&Rational> {
        match self {
            AxisFlow::Floor { level, .. } | AxisFlow::Ceil { level, .. } => Some(level),
            _ => None,
        }
    }

    /// The values the moving coordinate can take.
    fn range(&self) -> Interval {
        match self {
            AxisFlow::Floor { level, .. } => Interval::new(Cut::Finite(level.clone()), true, Cut::PosInf, false),
            AxisFlow::Ceil { level, .. } => Interval::new(Cut::NegInf, false, Cut::Finite(level.clone()), true),
            _ => Some(Interval::real_line()),
        }
        .expect("nonempty range")
    }

    /// Signed displacement per unit time: `−v` when descending, `+v` otherwise.
    fn drift(&self) -> Rational {
        if self.descends() {
            -self.speed()
        } else {
            self.speed()
        }
    }
}

fn shift(cut: &Cut, by: &Rational) -> Cut {
    match cut {
        Cut::Finite(x) => Cut::Finite(x + by),
        other => other.clone(),
    }
}

/// An exactly representable semiflow on a closed box `X`.
#[derive(Clone, Debug)]
pub struct ExactSemiflow {
    carrier: Rect,
    axes: Vec<AxisFlow>,
    moving: Option<usize>,
}

impl ExactSemiflow {
    pub fn new(carrier: Rect, axes: Vec<AxisFlow>) -> Result<ExactSemiflow> {
        ensure_dim(carrier.dim(), axes.len())?;
        if carrier.closure() != carrier {
            return Err(KernelError::InvalidInput("the carrier box must be closed".into()));
        }
        let axes: Vec<AxisFlow> = axes
            .into_iter()
            .map(|a| match a {
                AxisFlow::Translate { velocity } if velocity.is_zero() => AxisFlow::Still,
                other => other,
            })
            .collect();
        let moving: Vec<usize> = (0..axes.len()).filter(|&k| axes[k].is_moving()).collect();
        if moving.len() > 1 {
            return Err(KernelError::Unsupported("at most one axis may move".into()));
        }
        for (k, axis) in axes.iter().enumerate() {
            let side = carrier.axis(k);
            let fits = match axis {
                AxisFlow::Still => true,
                AxisFlow::Translate { velocity } if velocity.is_positive() => *side.lo() == Cut::NegInf,
                AxisFlow::Translate { .. } => *side.hi() == Cut::PosInf,
                AxisFlow::Floor { velocity, level } => {
                    if !velocity.is_positive() {
                        return Err(KernelError::InvalidInput("clamped velocity must be positive".into()));
                    }
                    side.lo().finite() == Some(level)
                }
                AxisFlow::Ceil { velocity, level } => {
                    if !velocity.is_positive() {
                        return Err(KernelError::InvalidInput("clamped velocity must be positive".into()));
                    }
                    side.hi().finite() == Some(level)
                }
            };
            if !fits {
                return Err(KernelError::InvalidInput(format!("axis {k}: the carrier is not invariant under the flow")));
            }
        }
        let flow = ExactSemiflow { carrier, axes, moving: moving.first().copied() };
        flow.check_semigroup()?;
        Ok(flow)
    }

    fn check_semigroup(&self) -> Result<()> {
        let x = self.ambient_set();
        if !self.time_map(&zero())?.same_map(&PiecewiseAffineMap::identity_on(&x))? {
            return Err(KernelError::InvalidInput("f^0 is not the identity".into()));
        }
        for (t, u) in [(ratio(1, 2), ratio(1, 3)), (one(), ratio(5, 2)), (ratio(3, 7), zero())] {
            let composed = self.time_map(&t)?.after(&self.time_map(&u)?)?;
            if !composed.same_map(&self.time_map(&(&t + &u))?)? {
                return Err(KernelError::InvalidInput(format!(
                    "semigroup law fails at t = {}, u = {}",
                    format_rational(&t),
                    format_rational(&u)
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn carrier(&self) -> &Rect {
        &self.carrier
    }

    pub fn axes(&self) -> &[AxisFlow] {
        &self.axes
    }

    pub fn moving_axis(&self) -> Option<(usize, &AxisFlow)> {
        self.moving.map(|k| (k, &self.axes[k]))
    }

    fn ambient_set(&self) -> BoxSet {
        BoxSet::from_rect(self.carrier.clone())
    }

    fn require_inside(&self, e: &BoxSet) -> Result<()> {
        ensure_dim(self.dim(), e.dim())?;
        if e.is_subset(&self.ambient_set())? {
            Ok(())
        } else {
            Err(KernelError::InvalidInput("subset is not contained in the carrier".into()))
        }
    }

    /// `f^t` as a piecewise-affine map on `X`.
    pub fn time_map(&self, t: &Rational) -> Result<PiecewiseAffineMap> {
        if t.is_negative() {
            return Err(KernelError::InvalidInput("negative time".into()));
        }
        let x = self.ambient_set();
        let Some((k, axis)) = self.moving_axis().filter(|_| !t.is_zero()) else {
            return Ok(PiecewiseAffineMap::identity_on(&x));
        };
        let moved = AxisRule::new(one(), axis.drift() * t);
        let parts = match axis.level() {
            None => vec![(Interval::real_line(), moved)],
            Some(level) => {
                // Points that would cross the level within time t sit on it.
                let reach = Cut::Finite(level - axis.drift() * t);
                let (free, stuck) = if axis.descends() {
                    (Interval::new(reach.clone(), false, Cut::PosInf, false), Interval::new(Cut::NegInf, false, reach, true))
                } else {
                    (Interval::new(Cut::NegInf, false, reach.clone(), false), Interval::new(reach, true, Cut::PosInf, false))
                };
                let pinned = AxisRule::new(zero(), level.clone());
                vec![(free.expect("half line"), moved), (stuck.expect("half line"), pinned)]
            }
        };
        let mut pieces = Vec::new();
        for (side, rule) in parts {
            let Some(side) = side.intersect(self.carrier.axis(k)) else { continue };
            let mut axes = self.carrier.axes().to_vec();
            axes[k] = side;
            let mut rules = vec![AxisRule::identity(); self.dim()];
            rules[k] = rule;
            pieces.push(Piece { domain: BoxSet::from_rect(Rect::new(axes)), rule: rules });
        }
        PiecewiseAffineMap::new(self.dim(), pieces)
    }

    /// Points of `X` whose orbit meets `c` within time `t`.
    fn sweep(&self, c: &Rect, t: &Rational) -> Option<Rect> {
        let (k, axis) = self.moving_axis()?;
        let reach = axis.range().intersect(c.axis(k))?;
        let span = axis.speed() * t;
        let swept = if axis.descends() {
            Interval::new(reach.lo().clone(), reach.lo_closed(), shift(reach.hi(), &span), reach.hi_closed())
        } else {
            Interval::new(shift(reach.lo(), &-span), reach.lo_closed(), reach.hi().clone(), reach.hi_closed())
        }?;
        let mut axes = c.axes().to_vec();
        axes[k] = swept;
        Rect::new(axes).intersect(&self.carrier)
    }

    /// `⋂_{s∈[0,t]} f^{-s}(E)`.
    pub fn window(&self, e: &BoxSet, t: &Rational) -> Result<BoxSet> {
        self.require_inside(e)?;
        if t.is_negative() {
            return Err(KernelError::InvalidInput("negative time".into()));
        }
        if t.is_zero() || self.moving.is_none() {
            return Ok(e.clone());
        }
        let outside = self.ambient_set().difference(e)?;
        let swept = BoxSet::from_rects(self.dim(), outside.rects().iter().filter_map(|c| self.sweep(c, t)))?;
        e.difference(&swept)
    }

    /// Fixed points of the flow inside `X`.
    pub fn fixed_points(&self) -> BoxSet {
        match self.moving_axis() {
            None => self.ambient_set(),
            Some((k, axis)) => match axis.level() {
                None => BoxSet::empty(self.dim()),
                Some(level) => {
                    let mut axes = self.carrier.axes().to_vec();
                    axes[k] = Interval::point(level.clone());
                    BoxSet::from_rect(Rect::new(axes))
                }
            },
        }
    }

    /// The largest invariant subset of `E`: fixed points of `E` together with
    /// the points whose whole line (or clamped half line) along the moving
    /// axis lies in `E`.
    pub fn invariant_part(&self, e: &BoxSet) -> Result<BoxSet> {
        self.require_inside(e)?;
        let Some((k, axis)) = self.moving_axis() else {
            return Ok(e.clone());
        };
        let range = axis.range();
        let outside = e.complement();
        let blocked = outside.rects().iter().filter(|c| c.axis(k).intersect(&range).is_some()).map(|c| {
            let mut axes = c.axes().to_vec();
            axes[k] = range.clone();
            Rect::new(axes)
        });
        let blocked = BoxSet::from_rects(self.dim(), blocked)?;
        e.difference(&blocked)?.union(&e.intersect(&self.fixed_points())?)
    }

    fn polys(&self) -> Option<Polys<'_>> {
        self.moving_axis().map(|(k, axis)| Polys { flow: self, k, axis })
    }

    /// `F_E` restricted to `[0, 1] × E` is proper.
    pub fn is_finite_time_proper(&self, e: &BoxSet) -> Result<bool> {
        self.require_inside(e)?;
        let Some(p) = self.polys() else { return Ok(true) };
        let walls = p.walls(e)?;
        let hits: Vec<Polyhedron> = e.rects().iter().flat_map(|r| p.lands_in(r)).collect();
        for piece in p.domain(e, &walls) {
            let closed = piece.relaxed();
            for w in &walls {
                let edge = closed.intersect(w);
                if edge.is_empty() {
                    continue;
                }
                if hits.iter().any(|h| !edge.intersect(h).is_empty()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `Dom F_E ∩ ([0, 1] × E)` is open in `[0, 1] × E`.
    pub fn is_openly_defined(&self, e: &BoxSet) -> Result<bool> {
        self.require_inside(e)?;
        let Some(p) = self.polys() else { return Ok(true) };
        let walls = p.walls(e)?;
        let mut undefined = Vec::new();
        for r in e.rects() {
            let base = p.slab(r);
            for w in &walls {
                let q = base.intersect(w);
                if !q.is_empty() {
                    undefined.push(q.relaxed());
                }
            }
        }
        for piece in p.domain(e, &walls) {
            if undefined.iter().any(|q| !piece.intersect(q).is_empty()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Candidate times for witness searches: differences of endpoints along
    /// the moving axis divided by the speed, their pairwise sums, midpoints
    /// between consecutive values and one past the largest, capped at `bound`.
    pub fn candidate_times(&self, sets: &[&BoxSet], bound: usize) -> Vec<Rational> {
        let Some((k, axis)) = self.moving_axis() else { return vec![zero()] };
        let mut ends: Vec<Rational> = Vec::new();
        let mut sides: Vec<Interval> = vec![self.carrier.axis(k).clone()];
        for s in sets {
            sides.extend(s.rects().iter().map(|r| r.axis(k).clone()));
        }
        for side in &sides {
            ends.extend(side.lo().finite().cloned());
            ends.extend(side.hi().finite().cloned());
        }
        ends.extend(axis.level().cloned());
        let speed = axis.speed();
        let mut base = vec![zero()];
        for p in &ends {
            for q in &ends {
                if p > q {
                    base.push((p - q) / &speed);
                }
            }
        }
        base.sort();
        base.dedup();
        let mut times = Vec::new();
        for (i, a) in base.iter().enumerate() {
            for b in &base[i..] {
                times.push(a + b);
            }
        }
        times.sort();
        times.dedup();
        let mids: Vec<Rational> = times.windows(2).map(|w| (&w[0] + &w[1]) / Rational::from_integer(2.into())).collect();
        let last = times.last().cloned().unwrap_or_else(zero) + one();
        times.extend(mids);
        times.push(last);
        let cap = Rational::from_integer(bound.into());
        times.retain(|t| *t <= cap);
        times.sort();
        times.dedup();
        times
    }
}

/// Polyhedra in `z = (t, x_1, …, x_n)` for a flow with moving axis `k`.
struct Polys<'f> {
    flow: &'f ExactSemiflow,
    k: usize,
    axis: &'f AxisFlow,
}

impl Polys<'_> {
    fn width(&self) -> usize {
        self.flow.dim() + 1
    }

    fn unit(&self, var: usize) -> Vec<Rational> {
        let mut v = vec![zero(); self.width()];
        v[var] = one();
        v
    }

    /// The moved coordinate `x_k + drift·t`.
    fn moved(&self) -> Vec<Rational> {
        let mut v = self.unit(self.k + 1);
        v[0] = self.axis.drift();
        v
    }

    fn bound_expr(p: Polyhedron, expr: Vec<Rational>, side: &Interval) -> Polyhedron {
        let mut p = p;
        if let Cut::Finite(lo) = side.lo() {
            p = p.with(Constraint::ge(expr.clone(), lo.clone(), !side.lo_closed()));
        }
        if let Cut::Finite(hi) = side.hi() {
            p = p.with(if side.hi_closed() { Constraint::le(expr, hi.clone()) } else { Constraint::lt(expr, hi.clone()) });
        }
        p
    }

    /// `0 ≤ t ≤ 1` and `x ∈ X`.
    fn universe(&self) -> Polyhedron {
        let mut p = Polyhedron::universe(self.width())
            .with(Constraint::ge(self.unit(0), zero(), false))
            .with(Constraint::le(self.unit(0), one()));
        for (j, side) in self.flow.carrier.axes().iter().enumerate() {
            p = Self::bound_expr(p, self.unit(j + 1), side);
        }
        p
    }

    /// `[0, 1] × r`.
    fn slab(&self, r: &Rect) -> Polyhedron {
        let mut p = self.universe();
        for (j, side) in r.axes().iter().enumerate() {
            p = Self::bound_expr(p, self.unit(j + 1), side);
        }
        p
    }

    /// `{(t, x) : f^s(x) ∈ c for some s ∈ [0, t]}` for one box `c`.
    fn wall(&self, c: &Rect) -> Option<Polyhedron> {
        let reach = self.axis.range().intersect(c.axis(self.k))?;
        let mut p = self.universe();
        for (j, side) in c.axes().iter().enumerate() {
            if j != self.k {
                p = Self::bound_expr(p, self.unit(j + 1), side);
            }
        }
        // The orbit sweeps x_k towards x_k + drift·t.
        let x = self.unit(self.k + 1);
        let (near, far) = if self.axis.descends() {
            (Interval::new(reach.lo().clone(), reach.lo_closed(), Cut::PosInf, false), Interval::new(Cut::NegInf, false, reach.hi().clone(), reach.hi_closed()))
        } else {
            (Interval::new(Cut::NegInf, false, reach.hi().clone(), reach.hi_closed()), Interval::new(reach.lo().clone(), reach.lo_closed(), Cut::PosInf, false))
        };
        if let Some(near) = near {
            p = Self::bound_expr(p, x, &near);
        }
        if let Some(far) = far {
            p = Self::bound_expr(p, self.moved(), &far);
        }
        Some(p)
    }

    fn walls(&self, e: &BoxSet) -> Result<Vec<Polyhedron>> {
        let outside = self.flow.ambient_set().difference(e)?;
        Ok(outside.rects().iter().filter_map(|c| self.wall(c)).filter(|w| !w.is_empty()).collect())
    }

    /// `Dom F_E ∩ ([0, 1] × E)` as nonempty convex pieces.
    fn domain(&self, e: &BoxSet, walls: &[Polyhedron]) -> Vec<Polyhedron> {
        let mut pieces: Vec<Polyhedron> = e.rects().iter().map(|r| self.slab(r)).filter(|p| !p.is_empty()).collect();
        for w in walls {
            pieces = pieces.iter().flat_map(|p| p.minus(w)).collect();
        }
        pieces
    }

    /// `{(t, x) ∈ [0, 1] × X : f^t(x) ∈ r}`.
    fn lands_in(&self, r: &Rect) -> Vec<Polyhedron> {
        let mut base = self.universe();
        for (j, side) in r.axes().iter().enumerate() {
            if j != self.k {
                base = Self::bound_expr(base, self.unit(j + 1), side);
            }
        }
        let range = self.axis.range();
        let mut out = Vec::new();
        if let Some(target) = range.intersect(r.axis(self.k)) {
            let free = Self::bound_expr(base.clone(), self.moved(), &range);
            out.push(Self::bound_expr(free, self.moved(), &target));
        }
        if let Some(level) = self.axis.level() {
            if r.axis(self.k).contains(level) {
                for beyond in Interval::real_line().difference(&range) {
                    out.push(Self::bound_expr(base.clone(), self.moved(), &beyond));
                }
            }
        }
        out.retain(|p| !p.is_empty());
        out
    }
}

impl Dynamics for ExactSemiflow {
    type T = Rational;
    type Map = PiecewiseAffineMap;

    fn ambient(&self) -> BoxSet {
        self.ambient_set()
    }
    fn time_map(&self, t: &Rational) -> Result<PiecewiseAffineMap> {
        ExactSemiflow::time_map(self, t)
    }
    fn window(&self, e: &BoxSet, t: &Rational) -> Result<BoxSet> {
        ExactSemiflow::window(self, e, t)
    }
    fn probe_times(&self) -> Vec<Rational> {
        vec![ratio(1, 2), one()]
    }
    fn candidate_times(&self, e: &BoxSet, e2: &BoxSet, bound: usize) -> Result<Vec<Rational>> {
        Ok(ExactSemiflow::candidate_times(self, &[e, e2], bound))
    }
    /// Fixed points of the source never leave it, so each must lie in the target.
    fn refute(&self, from: &BoxSet, to: &BoxSet) -> Result<Option<String>> {
        let stuck = from.intersect(&self.fixed_points())?;
        Ok((!stuck.is_subset(to)?).then(|| "a fixed point of the source lies outside the target".to_string()))
    }
    fn compactifiability(&self, e: &BoxSet) -> Result<Compactifiability> {
        Ok(Compactifiability {
            proper: self.is_finite_time_proper(e)?,
            openly_defined: self.is_openly_defined(e)?,
            locally_compact: e.is_locally_compact(),
        })
    }
    fn invariant_part(&self, e: &BoxSet, _bound: usize) -> Result<InvariantPart<BoxSet>> {
        Ok(InvariantPart::Exact { set: ExactSemiflow::invariant_part(self, e)?, steps: 0 })
    }
    fn is_invariant(&self, s: &BoxSet) -> Result<bool> {
        if !s.is_subset(&self.ambient_set())? {
            return Ok(false);
        }
        ExactSemiflow::invariant_part(self, s)?.same_set(s)
    }
    fn closure_in_domain(&self, e: &BoxSet) -> Result<bool> {
        e.closure().is_subset(&self.ambient_set())
    }
}
