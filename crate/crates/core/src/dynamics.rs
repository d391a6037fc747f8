//! Induced partial maps, admissible triples, cross maps and the relation
//! `E ~ E'`, written once for discrete and continuous time.
//!
//! A [`Dynamics`] value supplies the time maps `f^t`, the window sets
//! `⋂_{s∈[0,t]} f^{-s}(E)` (for discrete time `⋂_{i≤n} f^{-i}(E)`) and the
//! carrier-specific predicates. Everything else here is generic.

use std::collections::HashMap;
use std::fmt::{self, Debug};
use std::hash::Hash;

use num::Zero;

use crate::carrier::{InvariantPart, PartialMap, Region};
use crate::error::{KernelError, Result};
use crate::finite::{FinitePartialMap, FiniteSubset};
use crate::interval::{BoxSet, PiecewiseAffineMap};
use crate::rational::{format_rational, Rational};

/// A time domain: ℕ for maps, ℚ≥0 for semiflows.
pub trait Time: Clone + Ord + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn unit() -> Self;
    fn plus(&self, other: &Self) -> Self;
    /// `self - other`; callers guarantee `other ≤ self`.
    fn minus(&self, other: &Self) -> Self;
    fn text(&self) -> String;
}

impl Time for usize {
    fn zero() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Time for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn unit() -> Self {
        num::One::one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn text(&self) -> String {
        format_rational(self)
    }
}

pub type RegionOf<D> = <<D as Dynamics>::Map as PartialMap>::Region;

/// Evidence for (weak) compactifiability of a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Compactifiability {
    /// The induced map is proper (finite-time proper for semiflows).
    pub proper: bool,
    /// The induced map has open domain in `E`.
    pub openly_defined: bool,
    pub locally_compact: bool,
}

impl Compactifiability {
    pub fn weakly(&self) -> bool {
        self.proper && self.openly_defined
    }

    pub fn full(&self) -> bool {
        self.weakly() && self.locally_compact
    }

    /// The first failing condition, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.proper {
            Some("not proper")
        } else if !self.openly_defined {
            Some("not openly defined")
        } else if !self.locally_compact {
            Some("not locally compact")
        } else {
            None
        }
    }
}

/// A dynamical system over one of the carriers.
pub trait Dynamics: Send + Sync {
    type T: Time;
    type Map: PartialMap;

    /// The ambient space `X` as a region.
    fn ambient(&self) -> RegionOf<Self>;
    /// `f^t`.
    fn time_map(&self, t: &Self::T) -> Result<Self::Map>;
    /// `⋂_{s∈[0,t]} f^{-s}(E)`.
    fn window(&self, e: &RegionOf<Self>, t: &Self::T) -> Result<RegionOf<Self>>;
    /// Times used to probe equivariance (`1` for maps).
    fn probe_times(&self) -> Vec<Self::T>;
    /// Sorted candidate times for witness searches, starting at zero.
    fn candidate_times(&self, e: &RegionOf<Self>, e2: &RegionOf<Self>, bound: usize) -> Result<Vec<Self::T>>;
    /// A bound beyond which a failed witness search is a proof of absence.
    fn complete_bound(&self, _e: &RegionOf<Self>, _e2: &RegionOf<Self>) -> Result<Option<usize>> {
        Ok(None)
    }
    /// A proof that no `(a, b)` has `D_b(from) ⊆ f^{-a}(to)`, if one is available.
    fn refute(&self, _from: &RegionOf<Self>, _to: &RegionOf<Self>) -> Result<Option<String>> {
        Ok(None)
    }
    fn compactifiability(&self, e: &RegionOf<Self>) -> Result<Compactifiability>;
    fn invariant_part(&self, e: &RegionOf<Self>, bound: usize) -> Result<InvariantPart<RegionOf<Self>>>;
    /// `S ⊆ Dom f^t` and `f^t(S) = S` for all `t`.
    fn is_invariant(&self, s: &RegionOf<Self>) -> Result<bool>;
    /// `cl(E) ⊆ Dom f` (and `[0,ε]×cl(E) ⊆ Dom F` for semiflows).
    fn closure_in_domain(&self, e: &RegionOf<Self>) -> Result<bool>;

    /// Interior of `E` relative to `X`, i.e. `X ∖ cl(X ∖ E)`.
    fn interior_of(&self, e: &RegionOf<Self>) -> Result<RegionOf<Self>> {
        let x = self.ambient();
        x.difference(&x.difference(e)?.closure())
    }
}

/// An admissible-triple candidate `(a, b, c)` with `a ≤ b ≤ c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Triple<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Time> Triple<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Triple<T>> {
        if a <= b && b <= c {
            Ok(Triple { a, b, c })
        } else {
            Err(KernelError::InvalidInput(format!(
                "triple ({}, {}, {}) is not ordered",
                a.text(),
                b.text(),
                c.text()
            )))
        }
    }

    pub fn zero() -> Triple<T> {
        Triple { a: T::zero(), b: T::zero(), c: T::zero() }
    }

    pub fn plus(&self, other: &Triple<T>) -> Triple<T> {
        Triple { a: self.a.plus(&other.a), b: self.b.plus(&other.b), c: self.c.plus(&other.c) }
    }

    pub fn texts(&self) -> [String; 3] {
        [self.a.text(), self.b.text(), self.c.text()]
    }
}

impl<T: Time> Debug for Triple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a.text(), self.b.text(), self.c.text())
    }
}

/// The map `f_{E'E}^{(a,b,c)}` together with its data.
#[derive(Clone, Debug)]
pub struct CrossMap<D: Dynamics> {
    pub triple: Triple<D::T>,
    pub domain: RegionOf<D>,
    pub map: D::Map,
}

/// `f_E^t`: `f^t` restricted to the window `⋂_{s∈[0,t]} f^{-s}(E)`.
pub fn induced_power<D: Dynamics>(sys: &D, e: &RegionOf<D>, t: &D::T) -> Result<D::Map> {
    sys.time_map(t)?.restrict(&sys.window(e, t)?)
}

/// The induced partial self-map `f_E`, with domain `E ∩ f^{-1}(E)`.
pub fn induced<D: Dynamics>(sys: &D, e: &RegionOf<D>) -> Result<D::Map> {
    induced_power(sys, e, &D::T::unit())
}

/// `f^{-t}(E)`.
pub fn preimage_at<D: Dynamics>(sys: &D, e: &RegionOf<D>, t: &D::T) -> Result<RegionOf<D>> {
    sys.time_map(t)?.preimage(e)
}

pub fn is_admissible<D: Dynamics>(sys: &D, e: &RegionOf<D>, e2: &RegionOf<D>, t: &Triple<D::T>) -> Result<bool> {
    Triple::new(t.a.clone(), t.b.clone(), t.c.clone())?;
    let first = sys.window(e, &t.b)?.is_subset(&preimage_at(sys, e2, &t.a)?)?;
    if !first {
        return Ok(false);
    }
    let lhs = sys.window(e2, &t.c.minus(&t.a))?;
    lhs.is_subset(&preimage_at(sys, e, &t.b.minus(&t.a))?)
}

fn cross_domain<D: Dynamics>(sys: &D, e: &RegionOf<D>, e2: &RegionOf<D>, t: &Triple<D::T>) -> Result<RegionOf<D>> {
    let later = preimage_at(sys, &sys.window(e2, &t.c.minus(&t.a))?, &t.a)?;
    sys.window(e, &t.b)?.intersect(&later)
}

/// `f_{E'E}^{(a,b,c)}`; fails unless the triple is admissible.
pub fn cross_map<D: Dynamics>(sys: &D, e: &RegionOf<D>, e2: &RegionOf<D>, t: &Triple<D::T>) -> Result<CrossMap<D>> {
    if !is_admissible(sys, e, e2, t)? {
        return Err(KernelError::Precondition(format!("triple {t:?} is not admissible")));
    }
    let domain = cross_domain(sys, e, e2, t)?;
    let map = sys.time_map(&t.c)?.restrict(&domain)?;
    Ok(CrossMap { triple: t.clone(), domain, map })
}

/// Memoised windows and preimages of one subset.
struct Orbit<'s, D: Dynamics> {
    sys: &'s D,
    set: RegionOf<D>,
    windows: HashMap<D::T, RegionOf<D>>,
    preimages: HashMap<D::T, RegionOf<D>>,
}

impl<'s, D: Dynamics> Orbit<'s, D> {
    fn new(sys: &'s D, set: &RegionOf<D>) -> Self {
        Orbit { sys, set: set.clone(), windows: HashMap::new(), preimages: HashMap::new() }
    }

    fn window(&mut self, t: &D::T) -> Result<RegionOf<D>> {
        if let Some(w) = self.windows.get(t) {
            return Ok(w.clone());
        }
        let w = self.sys.window(&self.set, t)?;
        self.windows.insert(t.clone(), w.clone());
        Ok(w)
    }

    fn preimage(&mut self, t: &D::T) -> Result<RegionOf<D>> {
        if let Some(p) = self.preimages.get(t) {
            return Ok(p.clone());
        }
        let p = preimage_at(self.sys, &self.set, t)?;
        self.preimages.insert(t.clone(), p.clone());
        Ok(p)
    }
}

/// Result of a bounded witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<W> {
    Found(W),
    /// Nothing within the bound. `complete` means absence is proved.
    NotFound { complete: bool, reason: String },
}

impl<W> Search<W> {
    pub fn found(&self) -> Option<&W> {
        match self {
            Search::Found(w) => Some(w),
            Search::NotFound { .. } => None,
        }
    }
}

fn not_found_reason<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    bound: usize,
) -> Result<(bool, String)> {
    if let Some(reason) = sys.refute(e, e2)? {
        return Ok((true, reason));
    }
    Ok(match sys.complete_bound(e, e2)? {
        Some(c) if bound >= c => (true, format!("search exhausted the completeness bound {c}")),
        _ => (false, format!("nothing found within bound {bound}")),
    })
}

/// Lexicographically least admissible triple among the candidate times.
pub fn find_admissible<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    bound: usize,
) -> Result<Search<Triple<D::T>>> {
    if let Some(reason) = sys.refute(e, e2)? {
        return Ok(Search::NotFound { complete: true, reason });
    }
    let times = sys.candidate_times(e, e2, bound)?;
    let mut from = Orbit::new(sys, e);
    let mut to = Orbit::new(sys, e2);
    let last = times.last().cloned().unwrap_or_else(D::T::zero);
    for (ia, a) in times.iter().enumerate() {
        let target = to.preimage(a)?;
        for (ib, b) in times.iter().enumerate().skip(ia) {
            if !from.window(b)?.is_subset(&target)? {
                continue;
            }
            let need = from.preimage(&b.minus(a))?;
            if !to.window(&last.minus(a))?.is_subset(&need)? {
                continue;
            }
            for c in &times[ib..] {
                if to.window(&c.minus(a))?.is_subset(&need)? {
                    return Ok(Search::Found(Triple::new(a.clone(), b.clone(), c.clone())?));
                }
            }
        }
    }
    let (complete, reason) = not_found_reason(sys, e, e2, bound)?;
    Ok(Search::NotFound { complete, reason })
}

/// Least `(a, b)` with `a ≤ b` and `D_b(E) ⊆ f^{-a}(E')`.
pub fn absorption_pair<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    bound: usize,
) -> Result<Search<(D::T, D::T)>> {
    if let Some(reason) = sys.refute(e, e2)? {
        return Ok(Search::NotFound { complete: true, reason });
    }
    let times = sys.candidate_times(e, e2, bound)?;
    let mut from = Orbit::new(sys, e);
    let mut to = Orbit::new(sys, e2);
    for (ia, a) in times.iter().enumerate() {
        let target = to.preimage(a)?;
        for b in &times[ia..] {
            if from.window(b)?.is_subset(&target)? {
                return Ok(Search::Found((a.clone(), b.clone())));
            }
        }
    }
    let (complete, reason) = not_found_reason(sys, e, e2, bound)?;
    Ok(Search::NotFound { complete, reason })
}

/// Outcome of deciding `E ~ E'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sim<T> {
    Equivalent { forward: (T, T), backward: (T, T) },
    NotEquivalent { reason: String },
    Unknown { bound: usize, reason: String },
}

pub fn sim<D: Dynamics>(sys: &D, e: &RegionOf<D>, e2: &RegionOf<D>, bound: usize) -> Result<Sim<D::T>> {
    let forward = absorption_pair(sys, e, e2, bound)?;
    let backward = absorption_pair(sys, e2, e, bound)?;
    Ok(match (forward, backward) {
        (Search::Found(forward), Search::Found(backward)) => Sim::Equivalent { forward, backward },
        (Search::NotFound { complete: true, reason }, _) | (_, Search::NotFound { complete: true, reason }) => {
            Sim::NotEquivalent { reason }
        }
        (Search::NotFound { reason, .. }, _) | (_, Search::NotFound { reason, .. }) => Sim::Unknown { bound, reason },
    })
}

/// An admissible triple in `A(E, E')` built from `E ~ E'` witnesses.
pub fn triple_from_sim<T: Time>(forward: &(T, T), backward: &(T, T)) -> Triple<T> {
    let (a, b) = forward;
    let (a2, b2) = backward;
    let big = std::cmp::max(b.clone(), a.plus(a2));
    let c = big.plus(b2).minus(a2);
    Triple { a: a.clone(), b: big, c }
}

/// Law (1): `f_{EE}^{(a,b,c)} = f_E^c`.
pub fn law_identity<D: Dynamics>(sys: &D, e: &RegionOf<D>, t: &Triple<D::T>) -> Result<bool> {
    cross_map(sys, e, e, t)?.map.same_map(&induced_power(sys, e, &t.c)?)
}

/// Law (2): `f_{E''E'}^{t'} ∘ f_{E'E}^{t} = f_{E''E}^{t+t'}`.
pub fn law_composition<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    e3: &RegionOf<D>,
    t: &Triple<D::T>,
    t2: &Triple<D::T>,
) -> Result<bool> {
    let first = cross_map(sys, e, e2, t)?;
    let second = cross_map(sys, e2, e3, t2)?;
    let sum = t.plus(t2);
    if !is_admissible(sys, e, e3, &sum)? {
        return Ok(false);
    }
    second.map.after(&first.map)?.same_map(&cross_map(sys, e, e3, &sum)?.map)
}

/// Law (3): `f_{E'E}^{t} ∘ f_E^s = f_{E'}^s ∘ f_{E'E}^{t}` for the probe times `s`.
pub fn law_equivariance<D: Dynamics>(sys: &D, e: &RegionOf<D>, e2: &RegionOf<D>, t: &Triple<D::T>) -> Result<bool> {
    let cross = cross_map(sys, e, e2, t)?;
    for s in sys.probe_times() {
        let left = cross.map.after(&induced_power(sys, e, &s)?)?;
        let right = induced_power(sys, e2, &s)?.after(&cross.map)?;
        if !left.same_map(&right)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Law (4): `f_{E'E}^{t} ∘ f_E^{c'} = f_{E'E}^{t'} ∘ f_E^{c}`.
pub fn law_interchange<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    t: &Triple<D::T>,
    t2: &Triple<D::T>,
) -> Result<bool> {
    let left = cross_map(sys, e, e2, t)?.map.after(&induced_power(sys, e, &t2.c)?)?;
    let right = cross_map(sys, e, e2, t2)?.map.after(&induced_power(sys, e, &t.c)?)?;
    left.same_map(&right)
}

/// Whether the realised cross map is proper into `E'` and openly defined in `E`.
pub fn cross_map_is_proper_and_open<D: Dynamics>(sys: &D, e: &RegionOf<D>, e2: &RegionOf<D>, t: &Triple<D::T>) -> Result<(bool, bool)> {
    let cross = cross_map(sys, e, e2, t)?;
    let proper = cross.map.is_proper_on(&cross.domain, e2)?;
    let open = cross.domain.is_open_in(e)?;
    Ok((proper, open))
}

fn discrete_window<M: PartialMap>(f: &M, e: &M::Region, n: usize) -> Result<M::Region> {
    let mut d = e.clone();
    for _ in 0..n {
        let next = e.intersect(&f.preimage(&d)?)?;
        if next.same_set(&d)? {
            break;
        }
        d = next;
    }
    Ok(d)
}

fn discrete_compactifiability<M: PartialMap>(f: &M, e: &M::Region) -> Result<Compactifiability> {
    let domain = discrete_window(f, e, 1)?;
    let induced = f.restrict(&domain)?;
    Ok(Compactifiability {
        proper: induced.is_proper_on(&domain, e)?,
        openly_defined: domain.is_open_in(e)?,
        locally_compact: e.is_locally_compact(),
    })
}

fn discrete_is_invariant<M: PartialMap>(f: &M, s: &M::Region) -> Result<bool> {
    Ok(s.is_subset(&f.domain())? && f.image(s)?.same_set(s)?)
}

/// A partial map on a finite discrete space.
#[derive(Clone, Debug)]
pub struct FiniteSystem {
    pub map: FinitePartialMap,
}

impl FiniteSystem {
    pub fn new(map: FinitePartialMap) -> Self {
        FiniteSystem { map }
    }

    /// Index at which `D_b(E)` stops shrinking.
    fn stabilisation(&self, e: &FiniteSubset) -> Result<usize> {
        let mut d = e.clone();
        for b in 0.. {
            let next = e.intersect(&self.map.preimage(&d)?)?;
            if next == d {
                return Ok(b);
            }
            d = next;
        }
        unreachable!()
    }
}

impl Dynamics for FiniteSystem {
    type T = usize;
    type Map = FinitePartialMap;

    fn ambient(&self) -> FiniteSubset {
        FiniteSubset::full(self.map.space())
    }
    fn time_map(&self, t: &usize) -> Result<FinitePartialMap> {
        Ok(self.map.power(*t))
    }
    fn window(&self, e: &FiniteSubset, t: &usize) -> Result<FiniteSubset> {
        discrete_window(&self.map, e, *t)
    }
    fn probe_times(&self) -> Vec<usize> {
        vec![1, 2]
    }
    fn candidate_times(&self, e: &FiniteSubset, e2: &FiniteSubset, bound: usize) -> Result<Vec<usize>> {
        let cap = self.complete_bound(e, e2)?.map_or(bound, |c| c.min(bound));
        Ok((0..=cap).collect())
    }
    /// Eventual periodicity of `f^{-a}` and stabilisation of `D_b` bound the
    /// least witness by `2P + β + β'` (`P` preperiod plus period).
    fn complete_bound(&self, e: &FiniteSubset, e2: &FiniteSubset) -> Result<Option<usize>> {
        let (pre, per) = self.map.power_preperiod_period();
        Ok(Some(2 * (pre + per) + self.stabilisation(e)? + self.stabilisation(e2)?))
    }
    fn compactifiability(&self, e: &FiniteSubset) -> Result<Compactifiability> {
        discrete_compactifiability(&self.map, e)
    }
    fn invariant_part(&self, e: &FiniteSubset, bound: usize) -> Result<InvariantPart<FiniteSubset>> {
        self.map.invariant_part(e, bound)
    }
    fn is_invariant(&self, s: &FiniteSubset) -> Result<bool> {
        discrete_is_invariant(&self.map, s)
    }
    fn closure_in_domain(&self, e: &FiniteSubset) -> Result<bool> {
        e.is_subset(&self.map.domain())
    }
}

/// A piecewise-affine partial map of ℝⁿ.
#[derive(Clone, Debug)]
pub struct IntervalSystem {
    pub map: PiecewiseAffineMap,
}

impl IntervalSystem {
    pub fn new(map: PiecewiseAffineMap) -> Self {
        IntervalSystem { map }
    }

    /// Fixed points of pieces whose rules have no axis with slope one.
    fn isolated_fixed_points(&self) -> Vec<(Vec<Rational>, bool)> {
        let one = Rational::from_integer(1.into());
        let mut out = Vec::new();
        for piece in self.map.pieces() {
            if piece.rule.iter().any(|r| r.slope == one) {
                continue;
            }
            let p: Vec<Rational> = piece.rule.iter().map(|r| &r.intercept / (&one - &r.slope)).collect();
            if piece.domain.contains(&p) {
                let local_homeo = piece.rule.iter().all(|r| !r.slope.is_zero())
                    && piece.domain.interior().contains(&p);
                out.push((p, local_homeo));
            }
        }
        out
    }
}

impl Dynamics for IntervalSystem {
    type T = usize;
    type Map = PiecewiseAffineMap;

    fn ambient(&self) -> BoxSet {
        BoxSet::full(self.map.dim())
    }
    fn time_map(&self, t: &usize) -> Result<PiecewiseAffineMap> {
        Ok(self.map.power(*t))
    }
    fn window(&self, e: &BoxSet, t: &usize) -> Result<BoxSet> {
        discrete_window(&self.map, e, *t)
    }
    fn probe_times(&self) -> Vec<usize> {
        vec![1, 2]
    }
    fn candidate_times(&self, _e: &BoxSet, _e2: &BoxSet, bound: usize) -> Result<Vec<usize>> {
        Ok((0..=bound).collect())
    }
    /// A fixed point `p` stays in every `D_b(from)`, so `p ∉ to` refutes;
    /// if `f` is a local homeomorphism at `p ∈ int(from)`, some neighbourhood
    /// of `p` stays too and `f^a` maps it onto a neighbourhood of `p`, so
    /// `p ∉ int(to)` refutes.
    fn refute(&self, from: &BoxSet, to: &BoxSet) -> Result<Option<String>> {
        let to_interior = to.interior();
        let from_interior = from.interior();
        for (p, local_homeo) in self.isolated_fixed_points() {
            let shown = p.iter().map(format_rational).collect::<Vec<_>>().join(", ");
            if from.contains(&p) && !to.contains(&p) {
                return Ok(Some(format!("fixed point ({shown}) lies in the source but not the target")));
            }
            if local_homeo && from_interior.contains(&p) && !to_interior.contains(&p) {
                return Ok(Some(format!(
                    "fixed point ({shown}) is interior to the source but not to the target"
                )));
            }
        }
        Ok(None)
    }
    fn compactifiability(&self, e: &BoxSet) -> Result<Compactifiability> {
        discrete_compactifiability(&self.map, e)
    }
    fn invariant_part(&self, e: &BoxSet, bound: usize) -> Result<InvariantPart<BoxSet>> {
        self.map.invariant_part(e, bound)
    }
    fn is_invariant(&self, s: &BoxSet) -> Result<bool> {
        discrete_is_invariant(&self.map, s)
    }
    fn closure_in_domain(&self, e: &BoxSet) -> Result<bool> {
        e.closure().is_subset(&self.map.domain())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteSpace;
    use crate::interval::{AxisRule, Interval};
    use crate::rational::{rat, ratio};

    fn chain() -> (FiniteSystem, FiniteSpace) {
        let s = FiniteSpace::new(["1", "2", "3"]).unwrap();
        let f = FinitePartialMap::from_pairs(&s, [("1", "2"), ("2", "3"), ("3", "3")]).unwrap();
        (FiniteSystem::new(f), s)
    }

    fn set(s: &FiniteSpace, labels: &[&str]) -> FiniteSubset {
        FiniteSubset::from_labels(s, labels.iter().copied()).unwrap()
    }

    fn doubling() -> IntervalSystem {
        IntervalSystem::new(PiecewiseAffineMap::affine(BoxSet::full(1), vec![AxisRule::new(rat(2), rat(0))]).unwrap())
    }

    fn closed(a: Rational, b: Rational) -> BoxSet {
        BoxSet::from_interval(Interval::closed(a, b).unwrap())
    }

    fn open(a: Rational, b: Rational) -> BoxSet {
        BoxSet::from_interval(Interval::open(a, b).unwrap())
    }

    #[test]
    fn induced_examples() {
        let s = FiniteSpace::new(["1", "2", "3"]).unwrap();
        let f = FinitePartialMap::from_pairs(&s, [("1", "2"), ("2", "2"), ("3", "1")]).unwrap();
        let sys = FiniteSystem::new(f);
        let g = induced(&sys, &set(&s, &["1", "2"])).unwrap();
        assert_eq!(g.pairs(), vec![("1".into(), "2".into()), ("2".into(), "2".into())]);

        let d = doubling();
        let g = induced(&d, &closed(rat(-1), rat(1))).unwrap();
        assert_eq!(g.domain(), closed(ratio(-1, 2), ratio(1, 2)));
        let zero = BoxSet::point(&[rat(0)]);
        assert_eq!(induced(&d, &zero).unwrap().domain(), zero);
    }

    #[test]
    fn windows() {
        assert_eq!(doubling().window(&closed(rat(-1), rat(1)), &3).unwrap(), closed(ratio(-1, 8), ratio(1, 8)));
        let (sys, s) = chain();
        let e = set(&s, &["2", "3"]);
        assert_eq!(sys.window(&e, &5).unwrap(), e);
        assert_eq!(sys.window(&e, &0).unwrap(), e);
    }

    #[test]
    fn admissibility_examples() {
        let d = doubling();
        let t = Triple::new(0, 1, 1).unwrap();
        assert!(is_admissible(&d, &closed(rat(-1), rat(1)), &open(rat(-1), rat(1)), &t).unwrap());
        let (sys, s) = chain();
        let t = Triple::new(1, 1, 1).unwrap();
        assert!(is_admissible(&sys, &set(&s, &["2", "3"]), &set(&s, &["3"]), &t).unwrap());
        assert!(Triple::new(2, 1, 3).is_err());
    }

    #[test]
    fn search_examples() {
        let (sys, s) = chain();
        let all = FiniteSubset::full(&s);
        let three = set(&s, &["3"]);
        assert_eq!(find_admissible(&sys, &all, &three, 64).unwrap(), Search::Found(Triple::new(2, 2, 2).unwrap()));
        assert_eq!(find_admissible(&sys, &all, &all, 64).unwrap(), Search::Found(Triple::zero()));
        let cross = cross_map(&sys, &all, &three, &Triple::new(2, 2, 2).unwrap()).unwrap();
        assert_eq!(cross.map.pairs().len(), 3);
        assert!(cross.map.pairs().iter().all(|(_, y)| y == "3"));
        assert_eq!(sim(&sys, &all, &three, 64).unwrap(), Sim::Equivalent { forward: (2, 2), backward: (0, 0) });

        let d = doubling();
        let zero = BoxSet::point(&[rat(0)]);
        let big = closed(rat(-1), rat(1));
        assert!(matches!(
            find_admissible(&d, &big, &zero, 64).unwrap(),
            Search::NotFound { complete: true, .. }
        ));
    }

    #[test]
    fn doubling_cross_map() {
        let d = doubling();
        let t = Triple::new(0, 1, 1).unwrap();
        let c = cross_map(&d, &closed(rat(-1), rat(1)), &open(rat(-1), rat(1)), &t).unwrap();
        assert_eq!(c.domain, open(ratio(-1, 2), ratio(1, 2)));
        assert_eq!(c.map.apply(&[ratio(1, 4)]), Some(vec![ratio(1, 2)]));
    }

    #[test]
    fn compactifiability_examples() {
        let d = doubling();
        assert!(d.compactifiability(&BoxSet::point(&[rat(0)])).unwrap().full());
        let c = d.compactifiability(&closed(rat(-1), rat(1))).unwrap();
        assert_eq!(c.failure(), Some("not openly defined"));
        let (sys, s) = chain();
        assert!(sys.compactifiability(&set(&s, &["1", "3"])).unwrap().full());
    }

    #[test]
    fn triple_from_witnesses_is_admissible() {
        let (sys, s) = chain();
        let all = FiniteSubset::full(&s);
        let three = set(&s, &["3"]);
        if let Sim::Equivalent { forward, backward } = sim(&sys, &all, &three, 64).unwrap() {
            let t = triple_from_sim(&forward, &backward);
            assert!(is_admissible(&sys, &all, &three, &t).unwrap());
        } else {
            panic!("expected equivalence");
        }
    }
}
