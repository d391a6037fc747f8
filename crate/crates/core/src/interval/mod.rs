//! Rational box carrier: interval sets, piecewise-affine maps and the
//! topological decision procedures on them.

pub mod affine;
pub mod boxset;
pub mod invariant;
pub mod line;
pub mod proper;

pub use affine::{AxisRule, Piece, PiecewiseAffineMap};
pub use boxset::{BoxSet, Rect};
pub use line::{Cut, Interval};
pub use proper::{is_proper_on, properness_escape, Escape};
