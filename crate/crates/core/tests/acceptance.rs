//! Acceptance criteria, one line each with its runtime and limit.

use std::collections::HashSet;
use std::path::Path;
use std::time::{Duration, Instant};

use conley_kernel::conley::{construct_index_nbhd, is_index_nbhd, verify_simple_system, Certified};
use conley_kernel::dynamics::{cross_map, sim, Dynamics, Search, Sim, Triple};
use conley_kernel::families;
use conley_kernel::finite::{invariant_part, FiniteSubset};
use conley_kernel::interval::{BoxSet, Cut, Interval, Rect};
use conley_kernel::rational::{rat, ratio, Rational};
use conley_kernel::szymczak::{is_shift_equivalence, sz_is_iso, BasedEndo, EquivariantMap, SzMorphism};
use conley_kernel::verify::tally_suite;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn suite(name: &str, trials: usize, seed: u64) -> Result<usize, String> {
    let tally = tally_suite(name, trials, seed).map_err(|e| e.to_string())?;
    ensure(tally.passed(), || format!("{name}: {} failures, first {:?}", tally.failures.len(), tally.failures.first()))?;
    Ok(tally.cases)
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Table {
    (0..n).map(|_| if rng.gen_ratio(1, 6) { None } else { Some(rng.gen_range(0..n)) }).collect()
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen_ratio(2, 3)).collect()
}

fn composition_laws() -> Outcome {
    let cases = suite("thm-4-composition", 500, 7)?;
    // Second route: the composition formula on orbit-level cross maps.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let table = random_table(&mut rng, n);
        let sets = [random_set(&mut rng, n), random_set(&mut rng, n), random_set(&mut rng, n)];
        let (sys, regions) = load(&table, &[&sets[0], &sets[1], &sets[2]]);
        let mut start = [rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3)];
        start.sort_unstable();
        let start = (start[0], start[1], start[2]);
        let (Some(t), Some(t2)) = (pick(&table, &sets[0], &sets[1], start), pick(&table, &sets[1], &sets[2], start)) else {
            continue;
        };
        let first = cross_map(&sys, &regions[0], &regions[1], &Triple { a: t.0, b: t.1, c: t.2 }).map_err(|e| e.to_string())?;
        let second = cross_map(&sys, &regions[1], &regions[2], &Triple { a: t2.0, b: t2.1, c: t2.2 }).map_err(|e| e.to_string())?;
        let sum = (t.0 + t2.0, t.1 + t2.1, t.2 + t2.2);
        let direct = cross_map(&sys, &regions[0], &regions[2], &Triple { a: sum.0, b: sum.1, c: sum.2 }).map_err(|e| e.to_string())?;
        let composed = as_table(&second.map.after(&first.map).map_err(|e| e.to_string())?);
        let expected = oracle_cross(&table, &sets[0], &sets[2], sum);
        ensure(composed == expected && as_table(&direct.map) == expected, || format!("{table:?} {sets:?} {t:?} {t2:?}"))?;
        compared += 1;
    }
    ensure(compared >= 100, || format!("only {compared} composable pairs"))?;
    Ok(format!("{cases} law checks, {compared} oracle compositions"))
}

fn properness_propagation() -> Outcome {
    let cases = suite("properness-propagation", 500, 7)?;
    ensure(cases >= 500, || format!("only {cases} cross maps checked"))?;
    Ok(format!("{cases} cross maps proper and openly defined"))
}

/// Equivariant maps `f → g` by brute force over all based tables.
fn equivariant_tables(f: &[usize], g: &[usize]) -> Vec<Vec<usize>> {
    let (n, m) = (f.len(), g.len());
    let mut out = Vec::new();
    let total = m.pow((n - 1) as u32);
    for code in 0..total {
        let mut phi = vec![0; n];
        let mut c = code;
        for slot in phi.iter_mut().skip(1) {
            *slot = c % m;
            c /= m;
        }
        if (0..n).all(|x| phi[f[x]] == g[phi[x]]) {
            out.push(phi);
        }
    }
    out
}

fn powers(f: &[usize]) -> HashSet<Vec<usize>> {
    let mut out = HashSet::new();
    let mut p: Vec<usize> = (0..f.len()).collect();
    while out.insert(p.clone()) {
        p = p.iter().map(|&x| f[x]).collect();
    }
    out
}

/// `φ` has `ψ` with `ψφ = f^n` and `φψ = g^n` for one `n`.
fn oracle_shift_equivalence(f: &[usize], g: &[usize], phi: &[usize]) -> bool {
    let compose = |a: &[usize], b: &[usize]| b.iter().map(|&x| a[x]).collect::<Vec<usize>>();
    let (pf, pg) = (powers(f), powers(g));
    equivariant_tables(g, f).iter().any(|psi| {
        let (left, right) = (compose(psi, phi), compose(phi, psi));
        if !pf.contains(&left) || !pg.contains(&right) {
            return false;
        }
        // Same exponent on both sides.
        let mut fp: Vec<usize> = (0..f.len()).collect();
        let mut gp: Vec<usize> = (0..g.len()).collect();
        (0..=2 * (f.len() + g.len())).any(|_| {
            let hit = fp == left && gp == right;
            fp = fp.iter().map(|&x| f[x]).collect();
            gp = gp.iter().map(|&x| g[x]).collect();
            hit
        })
    })
}

fn szymczak_oracle() -> Outcome {
    let endos = BasedEndo::enumerate(4);
    ensure(endos.len() == 1 + 2 + 9 + 64, || format!("{} endos enumerated", endos.len()))?;
    let mut maps = 0;
    for f in &endos {
        let hat = SzMorphism::q(EquivariantMap::hat(f));
        ensure(matches!(sz_is_iso(&hat, None), Ok(Some(_))), || format!("Q(f̂) not invertible for {:?}", f.table()))?;
        for g in &endos {
            let listed = EquivariantMap::enumerate(f, g);
            let brute = equivariant_tables(f.table(), g.table());
            let tables: Vec<Vec<usize>> = listed.iter().map(|p| p.table().to_vec()).collect();
            ensure(tables.len() == brute.len() && brute.iter().all(|t| tables.contains(t)), || {
                format!("equivariant maps {:?} -> {:?}", f.table(), g.table())
            })?;
            for phi in listed {
                let shift = is_shift_equivalence(&phi, None).map_err(|e| e.to_string())?.is_some();
                let iso = sz_is_iso(&SzMorphism::q(phi.clone()), None).map_err(|e| e.to_string())?.is_some();
                let oracle = oracle_shift_equivalence(f.table(), g.table(), phi.table());
                ensure(shift == iso && iso == oracle, || {
                    format!("{:?} -> {:?} via {:?}: shift {shift}, iso {iso}, oracle {oracle}", f.table(), g.table(), phi.table())
                })?;
                maps += 1;
            }
        }
    }
    Ok(format!("{} endos, {maps} equivariant maps", endos.len()))
}

fn invariant_part_oracle() -> Outcome {
    let mut checked = 0;
    for n in 1..=4usize {
        for code in 0..(n + 1).pow(n as u32) {
            let mut c = code;
            let table: Table = (0..n)
                .map(|_| {
                    let d = c % (n + 1);
                    c /= n + 1;
                    d.checked_sub(1)
                })
                .collect();
            for mask in 0..(1u32 << n) {
                let e: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                compare_invariant(&table, &e)?;
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let n = rng.gen_range(5..=6);
        let table = random_table(&mut rng, n);
        let e = random_set(&mut rng, n);
        compare_invariant(&table, &e)?;
        checked += 1;
    }
    Ok(format!("{checked} (map, subset) pairs"))
}

fn compare_invariant(table: &Table, e: &[bool]) -> Result<(), String> {
    let owned = e.to_vec();
    let (sys, sets) = load(table, &[&owned]);
    let got = invariant_part(&sys.map, &sets[0]).map_err(|e| e.to_string())?;
    let want = oracle_invariant(table, e);
    let want = FiniteSubset::from_indices(got.space(), (0..want.len()).filter(|&i| want[i])).unwrap();
    ensure(got == want, || format!("{table:?} on {e:?}: {:?} vs {:?}", got.indices().collect::<Vec<_>>(), want))
}

fn iv(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Interval {
    Interval::new(Cut::Finite(lo), lo_closed, Cut::Finite(hi), hi_closed).unwrap()
}

fn doubling_example() -> Outcome {
    let sys = families::doubling();
    let zero = BoxSet::point(&[rat(0)]);
    let n = BoxSet::from_interval(iv(rat(-1), true, rat(1), true));
    let err = |e: conley_kernel::KernelError| e.to_string();
    ensure(sys.compactifiability(&zero).map_err(err)?.full(), || "{0} is not compactifiable".into())?;
    let c = sys.compactifiability(&n).map_err(err)?;
    ensure(!c.full() && !c.openly_defined, || format!("[-1, 1] accepted: {c:?}"))?;
    let Search::Found(built) = construct_index_nbhd(&sys, &zero, &n, 64).map_err(err)? else {
        return Err("no index neighbourhood constructed".into());
    };
    let expected = BoxSet::from_interval(iv(ratio(-1, 2), false, ratio(1, 2), false));
    ensure(built.nbhd.same_set(&expected).map_err(err)?, || format!("constructed {:?}", built.nbhd))?;
    // Grid oracle for the constructed set: x and 2x lie in (-1, 1).
    for k in -40..=40 {
        let x = ratio(k, 32);
        let inside = |y: &Rational| y > &rat(-1) && y < &rat(1);
        ensure(built.nbhd.contains(std::slice::from_ref(&x)) == (inside(&x) && inside(&(&x * rat(2)))), || format!("grid point {x}"))?;
    }
    ensure(built.triple == Triple { a: 0, b: 1, c: 1 }, || format!("triple {:?}", built.triple))?;
    ensure(built.certificate.is_certified(), || "constructed set not certified".into())?;
    ensure(matches!(built.sim_to_compact, Sim::Equivalent { .. }), || format!("{:?}", built.sim_to_compact))?;
    Ok("E={0} accepted, [-1,1] rejected, (-1/2,1/2) built with (0,1,1)".into())
}

/// `{(x, y) : y < φ(x)}` for `φ` constant on `(−∞, 0]`, `(0, 1)`, `[1, ∞)`.
fn below(values: [i64; 3]) -> BoxSet {
    assert!(values[0] <= values[1] && values[2] <= values[1], "cells assume a bump in the middle");
    let cells = [
        Interval::new(Cut::NegInf, false, Cut::Finite(rat(0)), true).unwrap(),
        Interval::new(Cut::Finite(rat(0)), false, Cut::Finite(rat(1)), false).unwrap(),
        Interval::new(Cut::Finite(rat(1)), true, Cut::PosInf, false).unwrap(),
    ];
    let rects = cells.into_iter().zip(values).map(|(cell, v)| {
        Rect::new(vec![cell, Interval::new(Cut::NegInf, false, Cut::Finite(rat(v)), false).unwrap()])
    });
    BoxSet::from_rects(2, rects).unwrap()
}

fn shift_example() -> Outcome {
    let sys = families::vertical_shift();
    let err = |e: conley_kernel::KernelError| e.to_string();
    let steps: [[i64; 3]; 4] = [[0, 3, 1], [0, 0, 0], [-2, 1, 1], [1, 4, 4]];
    for phi in &steps {
        let e = below(*phi);
        ensure(sys.compactifiability(&e).map_err(err)?.full(), || format!("E_phi for {phi:?} not compactifiable"))?;
        ensure(!e.closure().is_compact(), || format!("E_phi for {phi:?} is relatively compact"))?;
    }
    let mut pairs = 0;
    for phi in &steps {
        for psi in &steps {
            let sup = |a: &[i64; 3], b: &[i64; 3]| (0..3).map(|i| a[i] - b[i]).max().unwrap().max(0);
            // D_b(E_φ) = E_{φ−b} and f^{-a}(E_ψ) = E_{ψ−a}, so (a, b)
            // absorbs exactly when b − a ≥ sup(φ − ψ).
            let want = (0, sup(phi, psi) as usize);
            let back = (0, sup(psi, phi) as usize);
            match sim(&sys, &below(*phi), &below(*psi), 64).map_err(err)? {
                Sim::Equivalent { forward, backward } => {
                    ensure(forward == want && backward == back, || {
                        format!("{phi:?} ~ {psi:?}: witnesses {forward:?}, {backward:?}")
                    })?;
                }
                other => return Err(format!("{phi:?} vs {psi:?}: {other:?}")),
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs related with witnesses b - a = sup(phi - psi)"))
}

fn simple_systems() -> Outcome {
    let err = |e: conley_kernel::KernelError| e.to_string();
    let sys = families::attractor();
    let space = sys.map.space().clone();
    let nbhds = [FiniteSubset::from_labels(&space, ["s"]).unwrap(), FiniteSubset::full(&space)];
    let report = verify_simple_system(&sys, &nbhds, 16).map_err(err)?;
    ensure(report.all_ok() && report.links.len() == 4, || format!("attractor: {report:?}"))?;
    let d = families::doubling();
    let open = |a: Rational, b: Rational| BoxSet::from_interval(Interval::open(a, b).unwrap());
    let nbhds = [open(ratio(-1, 2), ratio(1, 2)), open(ratio(-1, 4), ratio(1, 4)), open(rat(-1), rat(1))];
    let report = verify_simple_system(&d, &nbhds, 16).map_err(err)?;
    ensure(report.all_ok() && report.links.len() == 9, || format!("repeller: {report:?}"))?;
    ensure(report.links.iter().all(|l| l.composite_is_power && l.inverse_witness.is_some()), || "link".into())?;
    Ok("attractor with 2 and repeller with 3 neighbourhoods".into())
}

fn continuous_discriminator() -> Outcome {
    let err = |e: conley_kernel::KernelError| e.to_string();
    let flow = families::clamped_flow();
    let s = BoxSet::point(&[rat(0)]);
    let e = BoxSet::from_interval(iv(rat(0), true, rat(1), true));
    let e_open = BoxSet::from_interval(iv(rat(0), true, rat(1), false));
    ensure(is_index_nbhd(&flow, &e, &s, 64).map_err(err)?.is_certified(), || "[0,1] not certified".into())?;
    match is_index_nbhd(&flow, &e_open, &s, 64).map_err(err)? {
        Certified::Failure { reason, .. } if reason == "not proper" => {}
        other => return Err(format!("[0,1) not rejected for properness: {other:?}")),
    }
    ensure(!flow.is_finite_time_proper(&e_open).map_err(err)?, || "[0,1) finite-time proper".into())?;
    ensure(flow.is_openly_defined(&e_open).map_err(err)?, || "[0,1) should be openly defined".into())?;
    // Sampled time-1/4 map on a grid: the largest invariant grid subset.
    let step = |x: &Rational| std::cmp::max(x - ratio(1, 4), rat(0));
    let points: Vec<Rational> = (0..=64).map(|k| ratio(k, 64)).collect();
    let mut kept = points.clone();
    loop {
        let next: Vec<Rational> =
            kept.iter().filter(|x| kept.contains(&step(x)) && kept.iter().any(|w| &step(w) == *x)).cloned().collect();
        if next == kept {
            break;
        }
        kept = next;
    }
    let exact = flow.invariant_part(&e).map_err(err)?;
    ensure(exact.same_set(&s).map_err(err)?, || format!("I_F([0,1]) = {exact:?}"))?;
    for x in &points {
        ensure(exact.contains(std::slice::from_ref(x)) == kept.contains(x), || format!("oracle disagrees at {x}"))?;
    }
    Ok("[0,1] certified, [0,1) rejected as not finite-time proper, I_F([0,1]) = {0}".into())
}

fn continuous_laws() -> Outcome {
    let cases = suite("semiflow-laws", 100, 7)?;
    Ok(format!("{cases} checks on clamped, translation and ceiling flows"))
}

fn float_free(dir: &Path, hits: &mut Vec<String>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            float_free(&path, hits);
        } else if path.extension().is_some_and(|x| x == "rs") {
            let text = std::fs::read_to_string(&path).unwrap();
            for (i, line) in text.lines().enumerate() {
                let code = line.split("//").next().unwrap_or("");
                let float_literal = code.as_bytes().windows(3).any(|w| {
                    w[0].is_ascii_digit() && w[1] == b'.' && w[2].is_ascii_digit()
                }) && !code.contains('"');
                let tokens = ["f32", "f64", "as_f64", "gen_bool", "from_f64"];
                if float_literal || tokens.iter().any(|t| code.split(|c: char| !c.is_alphanumeric() && c != '_').any(|w| w == *t)) {
                    hits.push(format!("{}:{}: {}", path.display(), i + 1, line.trim()));
                }
            }
        }
    }
}

fn exactness_hygiene() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut hits = Vec::new();
    float_free(&root.join("src"), &mut hits);
    float_free(&root.join("../ffi/src"), &mut hits);
    ensure(hits.is_empty(), || format!("floating point in kernel sources: {hits:?}"))?;
    Ok("no floating-point types or literals in kernel or ffi sources".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("composition laws", 60, composition_laws),
        ("properness propagation", 60, properness_propagation),
        ("szymczak oracle", 300, szymczak_oracle),
        ("invariant part oracle", 120, invariant_part_oracle),
        ("doubling example", 5, doubling_example),
        ("shift example", 5, shift_example),
        ("connected simple systems", 10, simple_systems),
        ("continuous-time discriminator", 10, continuous_discriminator),
        ("continuous composition laws", 30, continuous_laws),
        ("exactness hygiene", 60, exactness_hygiene),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let slow = took > Duration::from_secs(*limit);
        let (mark, detail) = match (&result, slow) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over the time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("[{mark}] {:>2}. {name} ({:.2?}, limit {limit}s): {detail}", i + 1, took);
        if mark == "FAIL" {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
