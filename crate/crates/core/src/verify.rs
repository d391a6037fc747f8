//! Seeded verification suites behind `conley-kernel verify`.
//!
//! Each suite checks laws and oracle agreements on generated or curated
//! systems and reports every counterexample it meets. Runs are deterministic
//! for a given seed and trial count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::carrier::PartialMap;
use crate::commands::{envelope, input_error, Outcome, Settings, Status};
use crate::conley::verify_simple_system;
use crate::dynamics::{
    cross_map_is_proper_and_open, find_admissible, is_admissible, law_composition, law_equivariance, law_identity,
    law_interchange, sim, triple_from_sim, Dynamics, FiniteSystem, RegionOf, Search, Sim, Triple,
};
use crate::error::{KernelError, Result};
use crate::families;
use crate::finite::{FinitePartialMap, FiniteSpace, FiniteSubset};
use crate::interval::{BoxSet, Cut, Interval, Rect};
use crate::rational::{rat, ratio, Rational};
use crate::szymczak::{canonical_invariant, is_shift_equivalence, sz_equal, sz_is_iso, BasedEndo, EquivariantMap, SzMorphism};

pub const SUITES: &[&str] = &[
    "finite-laws",
    "thm-4-composition",
    "properness-propagation",
    "sim-equivalence",
    "invariant-part-oracle",
    "szymczak-oracle",
    "szymczak-laws",
    "canonical-invariant",
    "interval-laws",
    "semiflow-laws",
    "simple-system",
];

/// Counts cases and collects counterexamples.
#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, result: Result<bool>, what: impl FnOnce() -> String) {
        match result {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", what()));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

/// Runs a suite and wraps the tally in a report.
pub fn run_suite(name: &str, trials: usize, seed: u64, bound: usize) -> Outcome {
    let settings = Settings { bound, seed };
    match tally_suite(name, trials, seed) {
        Ok(tally) => {
            let mut body = Map::new();
            body.insert("suite".into(), json!(name));
            body.insert("trials".into(), json!(trials));
            body.insert("cases".into(), json!(tally.cases));
            body.insert("passed".into(), json!(tally.passed()));
            let shown: Vec<&String> = tally.failures.iter().take(20).collect();
            body.insert("failures".into(), json!(shown));
            body.insert("failure_count".into(), json!(tally.failures.len()));
            let status = if tally.passed() { Status::Ok } else { Status::Violation };
            envelope("verify", &settings, status, body)
        }
        Err(e) => input_error("verify", &settings, &e),
    }
}

pub fn tally_suite(name: &str, trials: usize, seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    match name {
        "finite-laws" => finite_laws(&mut rng, trials, &mut t),
        "thm-4-composition" => {
            finite_cross_laws(&mut rng, trials, &mut t);
            interval_cross_laws(&mut t);
        }
        "properness-propagation" => properness_propagation(&mut rng, trials, &mut t),
        "sim-equivalence" => sim_equivalence(&mut rng, trials, &mut t),
        "invariant-part-oracle" => invariant_part_oracle(&mut rng, trials, &mut t),
        "szymczak-oracle" => szymczak_oracle(&mut t),
        "szymczak-laws" => szymczak_laws(&mut rng, trials, &mut t),
        "canonical-invariant" => canonical_invariant_suite(&mut t),
        "interval-laws" => interval_laws(&mut t),
        "semiflow-laws" => semiflow_laws(&mut rng, trials, &mut t),
        "simple-system" => simple_system(&mut t),
        other => {
            return Err(KernelError::InvalidInput(format!("unknown suite {other:?}; known: {}", SUITES.join(", "))))
        }
    }
    Ok(t)
}

pub fn random_map(rng: &mut ChaCha8Rng, space: &FiniteSpace) -> FinitePartialMap {
    let n = space.len();
    let table = (0..n).map(|_| if rng.gen_ratio(1, 5) { None } else { Some(rng.gen_range(0..n)) }).collect();
    FinitePartialMap::new(space, table).expect("indices in range")
}

pub fn random_subset(rng: &mut ChaCha8Rng, space: &FiniteSpace) -> FiniteSubset {
    FiniteSubset::from_mask(space, rng.gen_range(0..(1u64 << space.len())))
}

fn random_triple(rng: &mut ChaCha8Rng, max: usize) -> Triple<usize> {
    let mut v = [rng.gen_range(0..=max), rng.gen_range(0..=max), rng.gen_range(0..=max)];
    v.sort_unstable();
    Triple { a: v[0], b: v[1], c: v[2] }
}

/// Up to `extra` random admissible triples plus the least one, if any.
fn admissible_triples<D: Dynamics<T = usize>>(
    sys: &D,
    e: &RegionOf<D>,
    e2: &RegionOf<D>,
    rng: &mut ChaCha8Rng,
    extra: usize,
    bound: usize,
) -> Result<Vec<Triple<usize>>> {
    let mut out = Vec::new();
    if let Search::Found(t) = find_admissible(sys, e, e2, bound)? {
        out.push(t);
    }
    for _ in 0..extra {
        let t = random_triple(rng, bound.min(6));
        if !out.contains(&t) && is_admissible(sys, e, e2, &t)? {
            out.push(t);
        }
    }
    Ok(out)
}

fn finite_laws(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for trial in 0..trials {
        let space = FiniteSpace::numbered(rng.gen_range(1..=8));
        let (f, g, h) = (random_map(rng, &space), random_map(rng, &space), random_map(rng, &space));
        let e = random_subset(rng, &space);
        let gf = g.after(&f).expect("same space");
        t.absorb(gf.domain().is_subset(&f.preimage(&g.domain()).unwrap()).and_then(|a| {
            Ok(a && f.preimage(&g.domain())?.is_subset(&gf.domain())?)
        }), || format!("trial {trial}: Dom(gf) differs from f^-1(Dom g)"));
        let left = h.after(&gf).expect("same space");
        let right = h.after(&g).expect("same space").after(&f).expect("same space");
        t.check(left == right, || format!("trial {trial}: composition is not associative"));
        let (m, k) = (rng.gen_range(0..5), rng.gen_range(0..5));
        t.check(f.power(m + k) == f.power(m).after(&f.power(k)).unwrap(), || format!("trial {trial}: f^(m+k) ≠ f^m f^k"));
        t.check(
            gf.preimage(&e).unwrap() == f.preimage(&g.preimage(&e).unwrap()).unwrap(),
            || format!("trial {trial}: (gf)^-1 ≠ f^-1 g^-1"),
        );
        // D_n(E) against the direct intersection of preimages.
        let sys = FiniteSystem::new(f.clone());
        let n = rng.gen_range(0..6);
        let mut direct = e.clone();
        for i in 1..=n {
            direct = direct.intersect(&f.power(i).preimage(&e).unwrap()).unwrap();
        }
        t.check(sys.window(&e, &n).unwrap() == direct, || format!("trial {trial}: window D_{n} is wrong"));
    }
}

fn finite_cross_laws(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for trial in 0..trials {
        let space = FiniteSpace::numbered(rng.gen_range(1..=8));
        let sys = FiniteSystem::new(random_map(rng, &space));
        let mut sets: Vec<FiniteSubset> = (0..3).map(|_| random_subset(rng, &space)).collect();
        if rng.gen_ratio(1, 2) {
            // Shrinking by the map keeps pairs related more often.
            let w = sys.window(&sets[0], &1).unwrap();
            sets[1] = w;
        }
        law_battery(&sys, &sets, rng, 6, t, &format!("finite trial {trial}"));
    }
}

/// All four laws for every admissible triple found among the sets.
fn law_battery<D: Dynamics<T = usize>>(
    sys: &D,
    sets: &[RegionOf<D>],
    rng: &mut ChaCha8Rng,
    bound: usize,
    t: &mut Tally,
    label: &str,
) {
    let count = sets.len();
    let mut triples = vec![vec![Vec::new(); count]; count];
    for i in 0..count {
        for j in 0..count {
            match admissible_triples(sys, &sets[i], &sets[j], rng, 4, bound) {
                Ok(ts) => triples[i][j] = ts,
                Err(e) => t.check(false, || format!("{label}: search failed: {e}")),
            }
        }
    }
    for i in 0..count {
        for tr in &triples[i][i] {
            t.absorb(law_identity(sys, &sets[i], tr), || format!("{label}: identity law at {tr:?}"));
        }
        for j in 0..count {
            for (x, tr) in triples[i][j].iter().enumerate() {
                t.absorb(law_equivariance(sys, &sets[i], &sets[j], tr), || format!("{label}: equivariance at {tr:?}"));
                for tr2 in &triples[i][j][x..] {
                    t.absorb(law_interchange(sys, &sets[i], &sets[j], tr, tr2), || {
                        format!("{label}: interchange at {tr:?}, {tr2:?}")
                    });
                }
                for k in 0..count {
                    for tr2 in &triples[j][k] {
                        t.absorb(law_composition(sys, &sets[i], &sets[j], &sets[k], tr, tr2), || {
                            format!("{label}: composition {i}->{j}->{k} at {tr:?}, {tr2:?}")
                        });
                    }
                }
            }
        }
    }
}

fn closed(a: Rational, b: Rational) -> BoxSet {
    BoxSet::from_interval(Interval::closed(a, b).expect("ordered"))
}

fn open(a: Rational, b: Rational) -> BoxSet {
    BoxSet::from_interval(Interval::open(a, b).expect("ordered"))
}

fn left_open(a: Rational, b: Rational) -> BoxSet {
    BoxSet::from_interval(Interval::new(Cut::Finite(a), false, Cut::Finite(b), true).expect("ordered"))
}

fn half_open(a: Rational, b: Rational) -> BoxSet {
    BoxSet::from_interval(Interval::new(Cut::Finite(a), true, Cut::Finite(b), false).expect("ordered"))
}

/// `E_φ = {(x, y) : y < φ(x)}` for the step function taking `values[i]` on
/// the `i`-th cell cut at 0 and 1. Each cut point goes to the cell with the
/// smaller value, which makes `φ` lower semicontinuous and `E_φ` open.
pub fn below_step(values: [i64; 3]) -> BoxSet {
    let cuts = [Cut::NegInf, Cut::Finite(rat(0)), Cut::Finite(rat(1)), Cut::PosInf];
    let rects = (0..3).map(|i| {
        let lo_closed = i > 0 && values[i] < values[i - 1];
        let hi_closed = i < 2 && values[i] <= values[i + 1];
        let cell = Interval::new(cuts[i].clone(), lo_closed, cuts[i + 1].clone(), hi_closed).expect("cell");
        Rect::new(vec![cell, Interval::new(Cut::NegInf, false, Cut::Finite(rat(values[i])), false).expect("ray")])
    });
    BoxSet::from_rects(2, rects).expect("two-dimensional boxes")
}

fn interval_families() -> Vec<(&'static str, crate::dynamics::IntervalSystem, Vec<BoxSet>)> {
    vec![
        (
            "doubling",
            families::doubling(),
            vec![closed(rat(-1), rat(1)), open(ratio(-1, 2), ratio(1, 2)), open(rat(-1), rat(1)), closed(ratio(-1, 4), ratio(1, 4))],
        ),
        ("shift", families::vertical_shift(), vec![below_step([0, 3, 1]), below_step([2, 0, 0]), below_step([0, 0, 0])]),
        (
            "clamped",
            families::clamped_map(),
            vec![closed(rat(0), rat(2)), half_open(rat(0), rat(1)), closed(rat(0), ratio(1, 2)), closed(rat(-1), rat(3))],
        ),
    ]
}

fn interval_cross_laws(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (name, sys, sets) in interval_families() {
        law_battery(&sys, &sets, &mut rng, 6, t, name);
    }
}

fn properness_propagation(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for trial in 0..trials {
        let space = FiniteSpace::numbered(rng.gen_range(1..=8));
        let sys = FiniteSystem::new(random_map(rng, &space));
        let sets: Vec<FiniteSubset> = (0..2).map(|_| random_subset(rng, &space)).collect();
        propagate(&sys, &sets, rng, t, &format!("finite trial {trial}"));
    }
    for (name, sys, sets) in interval_families() {
        propagate(&sys, &sets, rng, t, name);
    }
}

fn propagate<D: Dynamics<T = usize>>(sys: &D, sets: &[RegionOf<D>], rng: &mut ChaCha8Rng, t: &mut Tally, label: &str) {
    let weak: Vec<&RegionOf<D>> =
        sets.iter().filter(|e| sys.compactifiability(e).map(|c| c.weakly()).unwrap_or(false)).collect();
    for e in &weak {
        for e2 in &weak {
            let Ok(triples) = admissible_triples(sys, e, e2, rng, 3, 6) else { continue };
            for tr in triples {
                t.absorb(
                    cross_map_is_proper_and_open(sys, e, e2, &tr).map(|(p, o)| p && o),
                    || format!("{label}: cross map at {tr:?} is not proper and openly defined"),
                );
            }
        }
    }
}

fn sim_equivalence(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for trial in 0..trials {
        let space = FiniteSpace::numbered(rng.gen_range(1..=7));
        let sys = FiniteSystem::new(random_map(rng, &space));
        let sets: Vec<FiniteSubset> = (0..3).map(|_| random_subset(rng, &space)).collect();
        let rel = |a: &FiniteSubset, b: &FiniteSubset| sim(&sys, a, b, 64).expect("same space");
        for (i, e) in sets.iter().enumerate() {
            t.check(
                rel(e, e) == Sim::Equivalent { forward: (0, 0), backward: (0, 0) },
                || format!("trial {trial}: set {i} is not related to itself by (0, 0)"),
            );
        }
        let table: Vec<Vec<Sim<usize>>> = sets.iter().map(|a| sets.iter().map(|b| rel(a, b)).collect()).collect();
        for i in 0..3 {
            for j in 0..3 {
                let related = matches!(table[i][j], Sim::Equivalent { .. });
                t.check(!matches!(table[i][j], Sim::Unknown { .. }), || format!("trial {trial}: undecided on a finite system"));
                t.check(related == matches!(table[j][i], Sim::Equivalent { .. }), || format!("trial {trial}: not symmetric"));
                let found = find_admissible(&sys, &sets[i], &sets[j], 64).expect("same space").found().is_some();
                t.check(found == related, || format!("trial {trial}: admissible triples disagree with ~ on {i}, {j}"));
                if let Sim::Equivalent { forward, backward } = &table[i][j] {
                    let tr = triple_from_sim(forward, backward);
                    t.absorb(is_admissible(&sys, &sets[i], &sets[j], &tr), || {
                        format!("trial {trial}: triple {tr:?} from ~ witnesses is not admissible")
                    });
                }
                for (via, direct) in table[j].iter().zip(&table[i]) {
                    if related && matches!(via, Sim::Equivalent { .. }) {
                        t.check(matches!(direct, Sim::Equivalent { .. }), || format!("trial {trial}: not transitive"));
                    }
                }
            }
        }
    }
}

/// Union of all subsets `S ⊆ E` inside the domain with `f(S) = S`.
pub fn brute_force_invariant(f: &FinitePartialMap, e: &FiniteSubset) -> FiniteSubset {
    let members: Vec<usize> = e.indices().collect();
    let mut union = vec![false; f.space().len()];
    for mask in 0u64..(1 << members.len()) {
        let s: Vec<usize> = (0..members.len()).filter(|i| mask >> i & 1 == 1).map(|i| members[i]).collect();
        let mut image = vec![false; f.space().len()];
        let mut closed = true;
        for &x in &s {
            match f.apply(x) {
                Some(y) => image[y] = true,
                None => closed = false,
            }
        }
        let inside = s.iter().all(|&x| image[x]) && image.iter().filter(|&&b| b).count() == s.len();
        if closed && inside {
            for &x in &s {
                union[x] = true;
            }
        }
    }
    FiniteSubset::from_indices(f.space(), (0..union.len()).filter(|&i| union[i])).expect("in range")
}

fn invariant_part_oracle(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for n in 1..=4usize {
        let space = FiniteSpace::numbered(n);
        let mut table = vec![0usize; n];
        loop {
            let map = FinitePartialMap::new(&space, table.iter().map(|&v| (v > 0).then(|| v - 1)).collect()).unwrap();
            for mask in 0..(1u64 << n) {
                let e = FiniteSubset::from_mask(&space, mask);
                let got = crate::finite::invariant_part(&map, &e).unwrap();
                t.check(got == brute_force_invariant(&map, &e), || format!("{map:?} on {e:?}"));
            }
            if !odometer(&mut table, n + 1) {
                break;
            }
        }
    }
    for trial in 0..trials {
        let space = FiniteSpace::numbered(rng.gen_range(5..=6));
        let map = random_map(rng, &space);
        let e = random_subset(rng, &space);
        let got = crate::finite::invariant_part(&map, &e).unwrap();
        t.check(got == brute_force_invariant(&map, &e), || format!("trial {trial}: {map:?} on {e:?}"));
    }
}

fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn szymczak_oracle(t: &mut Tally) {
    let endos = BasedEndo::enumerate(4);
    for f in &endos {
        let hat = SzMorphism::q(EquivariantMap::hat(f));
        t.check(matches!(sz_is_iso(&hat, None), Ok(Some(_))), || format!("Q(f̂) is not invertible for {f:?}"));
        for g in &endos {
            for phi in EquivariantMap::enumerate(f, g) {
                let shift = is_shift_equivalence(&phi, None).map(|w| w.is_some());
                let iso = sz_is_iso(&SzMorphism::q(phi.clone()), None).map(|w| w.is_some());
                t.check(shift.is_ok() && shift == iso, || format!("{f:?} -> {g:?} via {:?}: {shift:?} vs {iso:?}", phi.table()));
            }
        }
    }
}

fn random_endo(rng: &mut ChaCha8Rng, max_points: usize) -> BasedEndo {
    let n = rng.gen_range(1..=max_points);
    let table = (0..n).map(|i| if i == 0 { 0 } else { rng.gen_range(0..n) }).collect();
    BasedEndo::from_table(table).expect("valid table")
}

fn random_morphism(rng: &mut ChaCha8Rng, f: &BasedEndo, g: &BasedEndo) -> SzMorphism {
    let maps = EquivariantMap::enumerate(f, g);
    let map = maps[rng.gen_range(0..maps.len())].clone();
    SzMorphism { map, shift: rng.gen_range(0..3) }
}

fn szymczak_laws(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    for trial in 0..trials {
        let (f, g, h) = (random_endo(rng, 4), random_endo(rng, 4), random_endo(rng, 4));
        let (m1, m2, m3) = (random_morphism(rng, &f, &g), random_morphism(rng, &g, &h), random_morphism(rng, &f, &g));
        let eq = |a: &SzMorphism, b: &SzMorphism| sz_equal(a, b).map(|n| n.is_some()).unwrap_or(false);
        t.check(eq(&SzMorphism::identity(&g).after(&m1).unwrap(), &m1), || format!("trial {trial}: left identity"));
        t.check(eq(&m1.after(&SzMorphism::identity(&f)).unwrap(), &m1), || format!("trial {trial}: right identity"));
        let m4 = random_morphism(rng, &h, &f);
        let left = m4.after(&m2.after(&m1).unwrap()).unwrap();
        let right = m4.after(&m2).unwrap().after(&m1).unwrap();
        t.check(eq(&left, &right), || format!("trial {trial}: associativity"));
        // (φ f^j, k + j) represents the same class as (φ, k).
        let j = rng.gen_range(0..3);
        let padded = SzMorphism { map: m1.map.after(&EquivariantMap::hat_power(&f, j)).unwrap(), shift: m1.shift + j };
        t.check(eq(&padded, &m1), || format!("trial {trial}: padding by f^{j} changes the class"));
        t.check(
            eq(&SzMorphism { map: EquivariantMap::hat(&f), shift: 1 }, &SzMorphism::identity(&f)),
            || format!("trial {trial}: (f̂, 1) is not the identity"),
        );
        // Equality is an equivalence relation.
        let (a, b) = (eq(&m1, &m3), eq(&m3, &m1));
        t.check(a == b, || format!("trial {trial}: equality is not symmetric"));
    }
}

fn canonical_invariant_suite(t: &mut Tally) {
    let endos = BasedEndo::enumerate(4);
    let invariants: Vec<_> = endos.iter().map(canonical_invariant).collect();
    for (i, f) in endos.iter().enumerate() {
        for (j, g) in endos.iter().enumerate() {
            let iso = EquivariantMap::enumerate(f, g)
                .iter()
                .any(|phi| is_shift_equivalence(phi, None).map(|w| w.is_some()).unwrap_or(false));
            t.check(iso == (invariants[i] == invariants[j]), || {
                format!("{f:?} vs {g:?}: isomorphic {iso}, invariants {:?} / {:?}", invariants[i], invariants[j])
            });
        }
    }
}

fn interval_laws(t: &mut Tally) {
    interval_cross_laws(t);
    for (name, sys, sets) in interval_families() {
        for e in &sets {
            match sys.invariant_part(e, 64) {
                Ok(crate::carrier::InvariantPart::Exact { set, .. }) => {
                    t.absorb(set.is_subset(e), || format!("{name}: invariant part leaves {e:?}"));
                    t.absorb(sys.is_invariant(&set), || format!("{name}: invariant part of {e:?} is not invariant"));
                }
                Ok(_) => {}
                Err(err) => t.check(false, || format!("{name}: {err}")),
            }
            for n in 0..4usize {
                let direct = (1..=n).try_fold(e.clone(), |acc, i| acc.intersect(&sys.map.power(i).preimage(e)?));
                let ok = direct.and_then(|d| d.same_set(&sys.window(e, &n)?));
                t.absorb(ok, || format!("{name}: window {n} of {e:?}"));
            }
        }
    }
}

fn plane_box(x: Option<Interval>, y: Option<Interval>) -> BoxSet {
    BoxSet::from_rect(Rect::new(vec![x.expect("ordered"), y.expect("ordered")]))
}

fn random_time(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(0..24), rng.gen_range(1..7))
}

fn semiflow_laws(rng: &mut ChaCha8Rng, trials: usize, t: &mut Tally) {
    let unit = || closed(rat(0), rat(1));
    let flows = vec![
        ("clamped", families::clamped_flow(), vec![unit(), closed(rat(0), ratio(1, 2)), closed(rat(0), rat(2))]),
        ("translation", families::translation_flow(), vec![left_open(rat(0), rat(1)), open(rat(0), rat(2)), unit()]),
        (
            "ceiling",
            families::ceiling_flow(),
            vec![
                plane_box(Interval::closed(rat(0), rat(1)), Interval::closed(rat(0), rat(1))),
                plane_box(Interval::closed(rat(-1), rat(1)), Interval::closed(ratio(-1, 2), rat(1))),
            ],
        ),
    ];
    for (name, flow, sets) in &flows {
        for trial in 0..trials {
            let (a, b) = (random_time(rng), random_time(rng));
            let ok = flow
                .time_map(&a)
                .and_then(|fa| fa.after(&flow.time_map(&b)?))
                .and_then(|ab| ab.same_map(&flow.time_map(&(&a + &b))?));
            t.absorb(ok, || format!("{name} trial {trial}: semigroup law"));
        }
        for e in sets {
            let mut last: Option<BoxSet> = None;
            for k in 0..6 {
                let s = ratio(k, 2);
                let Ok(w) = flow.window(e, &s) else {
                    t.check(false, || format!("{name}: window failed"));
                    continue;
                };
                if let Some(prev) = &last {
                    t.absorb(w.is_subset(prev), || format!("{name}: windows of {e:?} grow at {s}"));
                }
                // The exact window sits inside every sampled intersection.
                let sampled = (0..=64).try_fold(e.clone(), |acc, i| {
                    acc.intersect(&flow.time_map(&(&s * ratio(i, 64)))?.preimage(e)?)
                });
                t.absorb(sampled.and_then(|sm| w.is_subset(&sm)), || format!("{name}: window of {e:?} at {s} exceeds samples"));
                if flow.is_finite_time_proper(e).unwrap_or(false) {
                    let proper = flow.time_map(&s).and_then(|f| f.restrict(&w)).and_then(|f| f.is_proper_on(&w, e));
                    t.absorb(proper, || format!("{name}: f^{s} is not proper on the window of {e:?}"));
                }
                if e.is_compact() {
                    for j in 0..=k {
                        let img = flow.time_map(&ratio(j, 2)).and_then(|f| f.image(&w));
                        t.absorb(img.map(|i| i.is_compact()), || format!("{name}: image of a window of {e:?} is not compact"));
                    }
                }
                last = Some(w);
            }
        }
        continuous_battery(flow, sets, t, name);
    }
}

fn continuous_battery<D: Dynamics<T = Rational>>(sys: &D, sets: &[RegionOf<D>], t: &mut Tally, label: &str) {
    let count = sets.len();
    let mut triples: Vec<Vec<Vec<Triple<Rational>>>> = vec![vec![Vec::new(); count]; count];
    for i in 0..count {
        for j in 0..count {
            if let Ok(Search::Found(tr)) = find_admissible(sys, &sets[i], &sets[j], 8) {
                let bumped = Triple { a: tr.a.clone(), b: &tr.b + ratio(1, 2), c: &tr.c + rat(1) };
                triples[i][j].push(tr);
                if is_admissible(sys, &sets[i], &sets[j], &bumped).unwrap_or(false) {
                    triples[i][j].push(bumped);
                }
            }
        }
    }
    for i in 0..count {
        for tr in &triples[i][i] {
            t.absorb(law_identity(sys, &sets[i], tr), || format!("{label}: identity law at {tr:?}"));
        }
        for j in 0..count {
            for (x, tr) in triples[i][j].iter().enumerate() {
                t.absorb(law_equivariance(sys, &sets[i], &sets[j], tr), || format!("{label}: equivariance at {tr:?}"));
                for tr2 in &triples[i][j][x..] {
                    t.absorb(law_interchange(sys, &sets[i], &sets[j], tr, tr2), || format!("{label}: interchange"));
                }
                for k in 0..count {
                    for tr2 in &triples[j][k] {
                        t.absorb(law_composition(sys, &sets[i], &sets[j], &sets[k], tr, tr2), || {
                            format!("{label}: composition {i}->{j}->{k} at {tr:?}, {tr2:?}")
                        });
                    }
                }
            }
        }
    }
}

fn simple_system(t: &mut Tally) {
    let sys = families::attractor();
    let space = sys.map.space().clone();
    let nbhds = [FiniteSubset::from_labels(&space, ["s"]).unwrap(), FiniteSubset::full(&space)];
    t.absorb(verify_simple_system(&sys, &nbhds, 16).map(|r| r.all_ok()), || "finite attractor".into());

    let d = families::doubling();
    let nbhds = [open(ratio(-1, 2), ratio(1, 2)), open(ratio(-1, 4), ratio(1, 4)), open(rat(-1), rat(1))];
    t.absorb(verify_simple_system(&d, &nbhds, 16).map(|r| r.all_ok()), || "interval repeller".into());

    let flow = families::clamped_flow();
    let nbhds = [closed(rat(0), rat(1)), closed(rat(0), ratio(1, 2))];
    t.absorb(verify_simple_system(&flow, &nbhds, 8).map(|r| r.all_ok()), || "clamped flow".into());
}

/// Reports as plain values for embedding elsewhere.
pub fn suite_names() -> Value {
    json!(SUITES)
}
