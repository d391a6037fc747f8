//! Named example systems used by the verification suites and fixtures.

use crate::dynamics::{FiniteSystem, IntervalSystem};
use crate::finite::{FinitePartialMap, FiniteSpace};
use crate::interval::{AxisRule, BoxSet, Cut, Interval, Piece, PiecewiseAffineMap, Rect};
use crate::rational::{rat, Rational};
use crate::semiflow::{AxisFlow, ExactSemiflow};

/// `x ↦ 2x` on ℝ.
pub fn doubling() -> IntervalSystem {
    IntervalSystem::new(PiecewiseAffineMap::affine(BoxSet::full(1), vec![AxisRule::new(rat(2), rat(0))]).expect("affine"))
}

/// `(x, y) ↦ (x, y + 1)` on ℝ².
pub fn vertical_shift() -> IntervalSystem {
    let rule = vec![AxisRule::identity(), AxisRule::new(rat(1), rat(1))];
    IntervalSystem::new(PiecewiseAffineMap::affine(BoxSet::full(2), rule).expect("affine"))
}

/// `x ↦ max(x − 1, 0)` on ℝ.
pub fn clamped_map() -> IntervalSystem {
    let low = BoxSet::from_interval(Interval::new(Cut::NegInf, false, Cut::Finite(rat(1)), true).expect("half line"));
    let high = BoxSet::from_interval(Interval::new(Cut::Finite(rat(1)), false, Cut::PosInf, false).expect("half line"));
    let map = PiecewiseAffineMap::new(
        1,
        vec![
            Piece { domain: low, rule: vec![AxisRule::new(rat(0), rat(0))] },
            Piece { domain: high, rule: vec![AxisRule::new(rat(1), rat(-1))] },
        ],
    )
    .expect("continuous");
    IntervalSystem::new(map)
}

/// `s ↦ s`, `a ↦ s`: an attracting fixed point with one transient point.
pub fn attractor() -> FiniteSystem {
    let space = FiniteSpace::new(["s", "a"]).expect("distinct labels");
    FiniteSystem::new(FinitePartialMap::from_pairs(&space, [("s", "s"), ("a", "s")]).expect("labels exist"))
}

fn half_line_from(lo: Rational) -> Interval {
    Interval::new(Cut::Finite(lo), true, Cut::PosInf, false).expect("half line")
}

/// `F(t, x) = max(x − t, 0)` on `[0, ∞)`.
pub fn clamped_flow() -> ExactSemiflow {
    ExactSemiflow::new(Rect::new(vec![half_line_from(rat(0))]), vec![AxisFlow::Floor { velocity: rat(1), level: rat(0) }])
        .expect("valid flow")
}

/// `F(t, x) = x − t` on ℝ.
pub fn translation_flow() -> ExactSemiflow {
    ExactSemiflow::new(Rect::full(1), vec![AxisFlow::Translate { velocity: rat(1) }]).expect("valid flow")
}

/// `F(t, (x, y)) = (x, min(y + t, 1))` on `ℝ × (−∞, 1]`.
pub fn ceiling_flow() -> ExactSemiflow {
    let y = Interval::new(Cut::NegInf, false, Cut::Finite(rat(1)), true).expect("half line");
    ExactSemiflow::new(
        Rect::new(vec![Interval::real_line(), y]),
        vec![AxisFlow::Still, AxisFlow::Ceil { velocity: rat(1), level: rat(1) }],
    )
    .expect("valid flow")
}
