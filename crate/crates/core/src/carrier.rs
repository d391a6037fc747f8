//! The carrier contract shared by the finite and box-set carriers.
//!
//! The dynamics, Conley and semiflow layers only talk to subsets and partial
//! maps through these two traits.

use std::fmt::Debug;

use crate::error::Result;
use crate::finite::{self, FinitePartialMap, FiniteSubset};
use crate::interval::{self, BoxSet, PiecewiseAffineMap};

/// Subsets of a fixed ambient space together with their topology.
pub trait Region: Clone + Debug + Send + Sync {
    fn intersect(&self, other: &Self) -> Result<Self>;
    fn union(&self, other: &Self) -> Result<Self>;
    fn difference(&self, other: &Self) -> Result<Self>;
    fn is_subset(&self, other: &Self) -> Result<bool>;
    fn is_empty(&self) -> bool;
    fn closure(&self) -> Self;
    fn interior(&self) -> Self;
    fn is_compact(&self) -> bool;
    fn is_open_in(&self, ambient: &Self) -> Result<bool>;
    fn is_closed_in(&self, ambient: &Self) -> Result<bool>;
    fn is_locally_compact(&self) -> bool;

    fn same_set(&self, other: &Self) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }
}

/// Continuous partial self-maps of the ambient space of `Self::Region`.
pub trait PartialMap: Clone + Debug + Send + Sync {
    type Region: Region;

    /// The identity on the whole ambient space.
    fn ambient_identity(&self) -> Self;
    fn identity_on(region: &Self::Region) -> Self;
    fn domain(&self) -> Self::Region;
    fn preimage(&self, region: &Self::Region) -> Result<Self::Region>;
    fn image(&self, region: &Self::Region) -> Result<Self::Region>;
    fn restrict(&self, region: &Self::Region) -> Result<Self>;
    /// `self ∘ first`.
    fn after(&self, first: &Self) -> Result<Self>;
    /// Exact equality of partial maps (domains and values).
    fn same_map(&self, other: &Self) -> Result<bool>;
    /// Properness of `self|_D : D → Y`; requires `D ⊆ Dom self` and `self(D) ⊆ Y`.
    fn is_proper_on(&self, d: &Self::Region, y: &Self::Region) -> Result<bool>;
    /// `I(E)` if decidable within `bound` steps.
    fn invariant_part(&self, e: &Self::Region, bound: usize) -> Result<InvariantPart<Self::Region>>;

    fn power(&self, n: usize) -> Self {
        let mut acc = self.ambient_identity();
        for _ in 0..n {
            acc = self.after(&acc).expect("same ambient space");
        }
        acc
    }
}

/// Outcome of an invariant-part computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantPart<S> {
    /// The exact invariant part, found after `steps` iterations.
    Exact { set: S, steps: usize },
    /// Not decided within `bound`; `outer` is a superset of the invariant part.
    Unknown { outer: S, bound: usize },
}

impl<S> InvariantPart<S> {
    pub fn exact(&self) -> Option<&S> {
        match self {
            InvariantPart::Exact { set, .. } => Some(set),
            InvariantPart::Unknown { .. } => None,
        }
    }
}

impl Region for FiniteSubset {
    fn intersect(&self, other: &Self) -> Result<Self> {
        FiniteSubset::intersect(self, other)
    }
    fn union(&self, other: &Self) -> Result<Self> {
        FiniteSubset::union(self, other)
    }
    fn difference(&self, other: &Self) -> Result<Self> {
        FiniteSubset::difference(self, other)
    }
    fn is_subset(&self, other: &Self) -> Result<bool> {
        FiniteSubset::is_subset(self, other)
    }
    fn is_empty(&self) -> bool {
        FiniteSubset::is_empty(self)
    }
    // Finite weak Hausdorff spaces are discrete.
    fn closure(&self) -> Self {
        self.clone()
    }
    fn interior(&self) -> Self {
        self.clone()
    }
    fn is_compact(&self) -> bool {
        true
    }
    fn is_open_in(&self, ambient: &Self) -> Result<bool> {
        require_inside(self, ambient)
    }
    fn is_closed_in(&self, ambient: &Self) -> Result<bool> {
        require_inside(self, ambient)
    }
    fn is_locally_compact(&self) -> bool {
        true
    }
}

fn require_inside(a: &FiniteSubset, b: &FiniteSubset) -> Result<bool> {
    if a.is_subset(b)? {
        Ok(true)
    } else {
        Err(crate::error::KernelError::Precondition("subset is not contained in the ambient set".into()))
    }
}

impl PartialMap for FinitePartialMap {
    type Region = FiniteSubset;

    fn ambient_identity(&self) -> Self {
        FinitePartialMap::identity(self.space())
    }
    fn identity_on(region: &FiniteSubset) -> Self {
        FinitePartialMap::identity_on(region)
    }
    fn domain(&self) -> FiniteSubset {
        FinitePartialMap::domain(self)
    }
    fn preimage(&self, region: &FiniteSubset) -> Result<FiniteSubset> {
        FinitePartialMap::preimage(self, region)
    }
    fn image(&self, region: &FiniteSubset) -> Result<FiniteSubset> {
        FinitePartialMap::image(self, region)
    }
    fn restrict(&self, region: &FiniteSubset) -> Result<Self> {
        FinitePartialMap::restrict(self, region)
    }
    fn after(&self, first: &Self) -> Result<Self> {
        finite::compose(self, first)
    }
    fn same_map(&self, other: &Self) -> Result<bool> {
        if self.space() != other.space() {
            return Err(crate::error::KernelError::SpaceMismatch("maps live on different finite spaces".into()));
        }
        Ok(self == other)
    }
    fn is_proper_on(&self, d: &FiniteSubset, y: &FiniteSubset) -> Result<bool> {
        require_inside(d, &self.domain())?;
        require_inside(&self.image(d)?, y)
    }
    fn invariant_part(&self, e: &FiniteSubset, _bound: usize) -> Result<InvariantPart<FiniteSubset>> {
        Ok(InvariantPart::Exact { set: finite::invariant_part(self, e)?, steps: 0 })
    }
    fn power(&self, n: usize) -> Self {
        finite::power(self, n)
    }
}

impl Region for BoxSet {
    fn intersect(&self, other: &Self) -> Result<Self> {
        BoxSet::intersect(self, other)
    }
    fn union(&self, other: &Self) -> Result<Self> {
        BoxSet::union(self, other)
    }
    fn difference(&self, other: &Self) -> Result<Self> {
        BoxSet::difference(self, other)
    }
    fn is_subset(&self, other: &Self) -> Result<bool> {
        BoxSet::is_subset(self, other)
    }
    fn is_empty(&self) -> bool {
        BoxSet::is_empty(self)
    }
    fn closure(&self) -> Self {
        BoxSet::closure(self)
    }
    fn interior(&self) -> Self {
        BoxSet::interior(self)
    }
    fn is_compact(&self) -> bool {
        BoxSet::is_compact(self)
    }
    fn is_open_in(&self, ambient: &Self) -> Result<bool> {
        BoxSet::is_open_in(self, ambient)
    }
    fn is_closed_in(&self, ambient: &Self) -> Result<bool> {
        BoxSet::is_closed_in(self, ambient)
    }
    fn is_locally_compact(&self) -> bool {
        BoxSet::is_locally_compact(self)
    }
    fn same_set(&self, other: &Self) -> Result<bool> {
        BoxSet::same_set(self, other)
    }
}

impl PartialMap for PiecewiseAffineMap {
    type Region = BoxSet;

    fn ambient_identity(&self) -> Self {
        PiecewiseAffineMap::identity(self.dim())
    }
    fn identity_on(region: &BoxSet) -> Self {
        PiecewiseAffineMap::identity_on(region)
    }
    fn domain(&self) -> BoxSet {
        PiecewiseAffineMap::domain(self)
    }
    fn preimage(&self, region: &BoxSet) -> Result<BoxSet> {
        PiecewiseAffineMap::preimage(self, region)
    }
    fn image(&self, region: &BoxSet) -> Result<BoxSet> {
        PiecewiseAffineMap::image(self, region)
    }
    fn restrict(&self, region: &BoxSet) -> Result<Self> {
        PiecewiseAffineMap::restrict(self, region)
    }
    fn after(&self, first: &Self) -> Result<Self> {
        PiecewiseAffineMap::after(self, first)
    }
    fn same_map(&self, other: &Self) -> Result<bool> {
        PiecewiseAffineMap::same_map(self, other)
    }
    fn is_proper_on(&self, d: &BoxSet, y: &BoxSet) -> Result<bool> {
        interval::is_proper_on(self, d, y)
    }
    fn invariant_part(&self, e: &BoxSet, bound: usize) -> Result<InvariantPart<BoxSet>> {
        interval::invariant::invariant_part(self, e, bound)
    }
    fn power(&self, n: usize) -> Self {
        PiecewiseAffineMap::power(self, n)
    }
}
