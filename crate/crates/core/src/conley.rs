//! Isolating and index neighbourhoods, the Conley functor and the connected
//! simple system formed by the index neighbourhoods of one invariant set.

use crate::carrier::{InvariantPart, PartialMap, Region};
use crate::dynamics::{
    cross_map, find_admissible, induced_power, law_identity, sim, triple_from_sim, Compactifiability, CrossMap,
    Dynamics, RegionOf, Search, Sim, Time, Triple,
};
use crate::error::{KernelError, Result};
use crate::finite::FiniteSubset;
use crate::szymczak::{canonical_invariant, BasedEndo, CanonicalInvariant, EquivariantMap, SzMorphism};
use crate::dynamics::FiniteSystem;

/// One named, replayable check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name, passed, detail: detail.into() }
    }
}

/// Outcome of a certification attempt.
#[derive(Clone, Debug)]
pub enum Certified<C> {
    Yes(C),
    Failure { reason: String, checks: Vec<Check> },
    Unknown { reason: String, bound: usize, checks: Vec<Check> },
}

impl<C> Certified<C> {
    pub fn certificate(&self) -> Option<&C> {
        match self {
            Certified::Yes(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Certified::Yes(_))
    }
}

#[derive(Clone, Debug)]
pub struct IsolatingCertificate<R> {
    pub nbhd: R,
    pub invariant_set: R,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug)]
pub struct IndexCertificate<R> {
    pub isolating: IsolatingCertificate<R>,
    pub compactifiability: Compactifiability,
    pub checks: Vec<Check>,
}

fn require_invariant<D: Dynamics>(sys: &D, s: &RegionOf<D>) -> Result<()> {
    if sys.is_invariant(s)? {
        Ok(())
    } else {
        Err(KernelError::Precondition("the proposed invariant set is not invariant".into()))
    }
}

/// Certifies `E` as an isolating neighbourhood of `S`.
pub fn is_isolating<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    s: &RegionOf<D>,
    bound: usize,
) -> Result<Certified<IsolatingCertificate<RegionOf<D>>>> {
    require_invariant(sys, s)?;
    let closure = e.closure();
    let mut checks = vec![
        Check::new("relatively_compact", closure.is_compact(), "closure of E is compact"),
        Check::new("closure_in_domain", sys.closure_in_domain(e)?, "closure of E lies in the domain of the dynamics"),
        Check::new("neighbourhood", s.is_subset(&sys.interior_of(e)?)?, "S lies in the interior of E"),
    ];
    let invariant = sys.invariant_part(&closure, bound)?;
    let undecided = match &invariant {
        InvariantPart::Exact { set, steps } => {
            checks.push(Check::new(
                "invariant_part",
                set.same_set(s)?,
                format!("invariant part of the closure computed exactly after {steps} steps"),
            ));
            false
        }
        InvariantPart::Unknown { bound, .. } => {
            checks.push(Check::new("invariant_part", false, format!("undecided within bound {bound}")));
            true
        }
    };
    if let Some(failed) = checks.iter().find(|c| !c.passed && !(undecided && c.name == "invariant_part")) {
        return Ok(Certified::Failure { reason: format!("{} fails", failed.name), checks });
    }
    if undecided {
        return Ok(Certified::Unknown { reason: "invariant part undecided".into(), bound, checks });
    }
    Ok(Certified::Yes(IsolatingCertificate { nbhd: e.clone(), invariant_set: s.clone(), checks }))
}

/// Certifies `E` as an index neighbourhood of `S`: isolating and compactifiable.
pub fn is_index_nbhd<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    s: &RegionOf<D>,
    bound: usize,
) -> Result<Certified<IndexCertificate<RegionOf<D>>>> {
    let isolating = is_isolating(sys, e, s, bound)?;
    let compact = sys.compactifiability(e)?;
    let extra = vec![
        Check::new("proper", compact.proper, "induced map is proper"),
        Check::new("openly_defined", compact.openly_defined, "induced map has open domain in E"),
        Check::new("locally_compact", compact.locally_compact, "E is locally compact"),
    ];
    match isolating {
        Certified::Yes(isolating) => match compact.failure() {
            None => Ok(Certified::Yes(IndexCertificate { isolating, compactifiability: compact, checks: extra })),
            Some(reason) => {
                let mut checks = isolating.checks;
                checks.extend(extra);
                Ok(Certified::Failure { reason: reason.into(), checks })
            }
        },
        Certified::Failure { reason, mut checks } => {
            checks.extend(extra);
            Ok(Certified::Failure { reason, checks })
        }
        Certified::Unknown { reason, bound, mut checks } => {
            checks.extend(extra);
            match compact.failure() {
                Some(r) => Ok(Certified::Failure { reason: r.into(), checks }),
                None => Ok(Certified::Unknown { reason, bound, checks }),
            }
        }
    }
}

/// Output of the index-neighbourhood construction.
#[derive(Clone, Debug)]
pub struct Construction<D: Dynamics> {
    pub compact: RegionOf<D>,
    pub interior: RegionOf<D>,
    pub triple: Triple<D::T>,
    pub nbhd: RegionOf<D>,
    pub certificate: Certified<IndexCertificate<RegionOf<D>>>,
    pub sim_to_compact: Sim<D::T>,
}

/// Builds an index neighbourhood inside `N`: with `K = N` compact isolating
/// and `U = int K`, finds `(a, b, c) ∈ A(K, U)` and returns
/// `E'' = ⋂_{i≤b} f^{-i}(K) ∩ ⋂_{a≤i≤c} f^{-i}(U)`.
pub fn construct_index_nbhd<D: Dynamics>(
    sys: &D,
    s: &RegionOf<D>,
    n: &RegionOf<D>,
    bound: usize,
) -> Result<Search<Construction<D>>> {
    if !n.is_compact() {
        return Err(KernelError::Precondition("the starting neighbourhood must be compact".into()));
    }
    match is_isolating(sys, n, s, bound)? {
        Certified::Yes(_) => {}
        Certified::Failure { reason, .. } => {
            return Err(KernelError::Precondition(format!("starting neighbourhood is not isolating: {reason}")))
        }
        Certified::Unknown { reason, .. } => {
            return Ok(Search::NotFound { complete: false, reason });
        }
    }
    let k = n.clone();
    let u = sys.interior_of(&k)?;
    let triple = match find_admissible(sys, &k, &u, bound)? {
        Search::Found(t) => t,
        Search::NotFound { complete, reason } => return Ok(Search::NotFound { complete, reason }),
    };
    let nbhd = cross_map(sys, &k, &u, &triple)?.domain;
    let certificate = is_index_nbhd(sys, &nbhd, s, bound)?;
    let sim_to_compact = sim(sys, &nbhd, &k, bound)?;
    Ok(Search::Found(Construction { compact: k, interior: u, triple, nbhd, certificate, sim_to_compact }))
}

/// A Szymczak morphism between induced maps, kept symbolically as the class
/// of `(f_{E'E}^{(a,b,c)}, c)`.
#[derive(Clone, Debug)]
pub struct Connecting<D: Dynamics> {
    pub cross: CrossMap<D>,
    pub stamp: D::T,
}

/// `φ_{E'E}` for an admissible triple found by search or from `~` witnesses.
pub fn connecting_morphism<D: Dynamics>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    bound: usize,
) -> Result<Search<Connecting<D>>> {
    let triple = match find_admissible(sys, e, e2, bound)? {
        Search::Found(t) => t,
        Search::NotFound { complete, reason } => match sim(sys, e, e2, bound)? {
            Sim::Equivalent { forward, backward } => triple_from_sim(&forward, &backward),
            _ => return Ok(Search::NotFound { complete, reason }),
        },
    };
    let cross = cross_map(sys, e, e2, &triple)?;
    let stamp = triple.c.clone();
    Ok(Search::Found(Connecting { cross, stamp }))
}

/// Least `n` among the candidate times with `φ f_E^{k'+n} = φ' f_E^{k+n}`.
pub fn symbolic_sz_equal<D: Dynamics>(
    sys: &D,
    source: &RegionOf<D>,
    (phi, k): (&D::Map, &D::T),
    (phi2, k2): (&D::Map, &D::T),
    bound: usize,
) -> Result<Option<D::T>> {
    for n in sys.candidate_times(source, source, bound)? {
        let left = phi.after(&induced_power(sys, source, &k2.plus(&n))?)?;
        let right = phi2.after(&induced_power(sys, source, &k.plus(&n))?)?;
        if left.same_map(&right)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// One connecting morphism in a simple-system report.
#[derive(Clone, Debug)]
pub struct Link<T: Time> {
    pub from: usize,
    pub to: usize,
    pub triple: Triple<T>,
    /// Witness `n` for `φ_{EE'} φ_{E'E} ~ id`.
    pub inverse_witness: Option<T>,
    /// `f_{EE'} ∘ f_{E'E}` equals `f_E^{c+c'}` exactly.
    pub composite_is_power: bool,
}

#[derive(Clone, Debug)]
pub struct CompositionCheck<T: Time> {
    pub path: (usize, usize, usize),
    pub witness: Option<T>,
}

#[derive(Clone, Debug)]
pub struct SimpleSystemReport<T: Time> {
    pub identities: Vec<bool>,
    pub links: Vec<Link<T>>,
    pub compositions: Vec<CompositionCheck<T>>,
    pub missing: Vec<(usize, usize, String)>,
}

impl<T: Time> SimpleSystemReport<T> {
    pub fn all_ok(&self) -> bool {
        self.missing.is_empty()
            && self.identities.iter().all(|&b| b)
            && self.links.iter().all(|l| l.inverse_witness.is_some() && l.composite_is_power)
            && self.compositions.iter().all(|c| c.witness.is_some())
    }
}

/// Checks the functor laws and invertibility of all connecting morphisms
/// between the given neighbourhoods.
pub fn verify_simple_system<D: Dynamics>(
    sys: &D,
    nbhds: &[RegionOf<D>],
    bound: usize,
) -> Result<SimpleSystemReport<D::T>> {
    let count = nbhds.len();
    let mut morphisms: Vec<Vec<Option<Connecting<D>>>> = (0..count).map(|_| (0..count).map(|_| None).collect()).collect();
    let mut missing = Vec::new();
    for i in 0..count {
        for j in 0..count {
            match connecting_morphism(sys, &nbhds[i], &nbhds[j], bound)? {
                Search::Found(m) => morphisms[i][j] = Some(m),
                Search::NotFound { reason, .. } => missing.push((i, j, reason)),
            }
        }
    }
    let mut identities = Vec::with_capacity(count);
    for (i, e) in nbhds.iter().enumerate() {
        let ok = match &morphisms[i][i] {
            Some(m) => {
                m.cross.triple == Triple::zero()
                    && m.cross.map.same_map(&<D::Map as PartialMap>::identity_on(e))?
                    && law_identity(sys, e, &m.cross.triple)?
            }
            None => false,
        };
        identities.push(ok);
    }
    let mut links = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for i in 0..count {
        for j in 0..count {
            let (Some(there), Some(back)) = (&morphisms[i][j], &morphisms[j][i]) else { continue };
            let composite = back.cross.map.after(&there.cross.map)?;
            let total = there.stamp.plus(&back.stamp);
            let identity = <D::Map as PartialMap>::identity_on(&nbhds[i]);
            let inverse_witness = symbolic_sz_equal(sys, &nbhds[i], (&composite, &total), (&identity, &D::T::zero()), bound)?;
            let composite_is_power = composite.same_map(&induced_power(sys, &nbhds[i], &total)?)?;
            links.push(Link { from: i, to: j, triple: there.cross.triple.clone(), inverse_witness, composite_is_power });
        }
    }
    let mut compositions = Vec::new();
    for i in 0..count {
        for j in 0..count {
            for k in 0..count {
                let (Some(first), Some(second), Some(direct)) = (&morphisms[i][j], &morphisms[j][k], &morphisms[i][k])
                else {
                    continue;
                };
                let composite = second.cross.map.after(&first.cross.map)?;
                let stamp = first.stamp.plus(&second.stamp);
                let witness =
                    symbolic_sz_equal(sys, &nbhds[i], (&composite, &stamp), (&direct.cross.map, &direct.stamp), bound)?;
                compositions.push(CompositionCheck { path: (i, j, k), witness });
            }
        }
    }
    Ok(SimpleSystemReport { identities, links, compositions, missing })
}

/// The Conley index object `(E, f_E)` with its certificate.
#[derive(Clone, Debug)]
pub struct ConleyIndex<D: Dynamics> {
    pub nbhd: RegionOf<D>,
    pub induced: D::Map,
    pub certificate: IndexCertificate<RegionOf<D>>,
}

pub fn conley_index<D: Dynamics>(
    sys: &D,
    s: &RegionOf<D>,
    e: &RegionOf<D>,
    bound: usize,
) -> Result<Certified<ConleyIndex<D>>> {
    Ok(match is_index_nbhd(sys, e, s, bound)? {
        Certified::Yes(certificate) => Certified::Yes(ConleyIndex {
            nbhd: e.clone(),
            induced: induced_power(sys, e, &D::T::unit())?,
            certificate,
        }),
        Certified::Failure { reason, checks } => Certified::Failure { reason, checks },
        Certified::Unknown { reason, bound, checks } => Certified::Unknown { reason, bound, checks },
    })
}

/// The based endomorphism `f_E⁺` and its canonical invariant.
pub fn finite_index_endo(sys: &FiniteSystem, e: &FiniteSubset) -> Result<(BasedEndo, CanonicalInvariant)> {
    let endo = BasedEndo::one_point(&sys.map, e)?;
    let invariant = canonical_invariant(&endo);
    Ok((endo, invariant))
}

/// `φ_{E'E}⁺` as a morphism between the one-point endomorphisms.
pub fn finite_connecting_endo(sys: &FiniteSystem, e: &FiniteSubset, e2: &FiniteSubset, link: &Connecting<FiniteSystem>) -> Result<SzMorphism> {
    let source = BasedEndo::one_point(&sys.map, e)?;
    let target = BasedEndo::one_point(&sys.map, e2)?;
    let targets: Vec<usize> = e2.indices().collect();
    let mut table = vec![0];
    for x in e.indices() {
        let y = link.cross.map.apply(x).and_then(|y| targets.iter().position(|&t| t == y)).map_or(0, |p| p + 1);
        table.push(y);
    }
    Ok(SzMorphism { map: EquivariantMap::new(&source, &target, table)?, shift: link.stamp })
}
