//! Exact point-set Conley index computations.
//!
//! Two carriers are supported: finite discrete spaces with partial maps, and
//! finite unions of rational boxes in ℝⁿ with piecewise componentwise-affine
//! maps. On top of them sit induced maps and admissible triples
//! ([`dynamics`]), the Szymczak category of finite based endomorphisms
//! ([`szymczak`]), isolating and index neighbourhoods with the Conley functor
//! ([`conley`]), and the continuous-time analogues for clamped translation
//! semiflows ([`semiflow`]).

pub mod carrier;
pub mod commands;
pub mod conley;
pub mod document;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod finite;
pub mod interval;
pub mod polyhedron;
pub mod rational;
pub mod semiflow;
pub mod szymczak;
pub mod verify;

pub use error::{KernelError, Result};
