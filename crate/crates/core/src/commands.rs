//! Command dispatch shared by the CLI and the C interface.
//!
//! Every command returns a JSON report with a fixed envelope (tool, version,
//! command, seed, bound, status) and a [`Status`] whose exit code is part of
//! the public contract: 0 success, 1 violation, 2 input error, 3 undecided.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::carrier::{InvariantPart, Region};
use crate::conley::{
    conley_index, construct_index_nbhd, is_index_nbhd, is_isolating, verify_simple_system, Certified, Check,
    IndexCertificate,
};
use crate::document::{Describe, Model, SystemDocument};
use crate::dynamics::{
    cross_map, find_admissible, is_admissible, sim, Dynamics, FiniteSystem, RegionOf, Search, Sim, Time, Triple,
};
use crate::error::{KernelError, Result};
use crate::finite::FiniteSubset;
use crate::rational::{parse_rational, Rational};
use crate::szymczak::{canonical_invariant, is_shift_equivalence, sz_equal, sz_is_iso, BasedEndo, EquivariantMap, SzMorphism};

pub const TOOL: &str = "conley-kernel";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_BOUND: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
    InputError,
    Undecided,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::InputError => 2,
            Status::Undecided => 3,
        }
    }

    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Ok
        } else {
            Status::Violation
        }
    }

    /// The worse of two outcomes: input error, then violation, then undecided.
    fn and(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Undecided => 1,
            Status::Violation => 2,
            Status::InputError => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// A finished command: its status and the full report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub bound: usize,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { bound: DEFAULT_BOUND, seed: 0 }
    }
}

/// One operation on a loaded document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Request {
    /// Compactifiability table for the named subsets (all when empty).
    Check { sets: Vec<String> },
    InvariantPart { set: String },
    Isolating { set: String, nbhd: String },
    /// With `search`, `nbhd` is the compact starting neighbourhood of the construction.
    IndexNbhd { set: String, nbhd: String, search: bool },
    Sim { from: String, to: String },
    Admissible { from: String, to: String, triple: Option<[String; 3]> },
    Index { set: String, nbhds: Vec<String>, search: bool },
    /// Equality of two Szymczak morphisms of a `based_endos` document.
    SzymczakEqual { first: String, second: String },
    /// Shift equivalence of a named morphism, between two named endos, or of
    /// the connecting morphism between two subsets of a finite system.
    ShiftEquiv { from: String, to: Option<String> },
}

impl Request {
    pub fn name(&self) -> &'static str {
        match self {
            Request::Check { .. } => "check",
            Request::InvariantPart { .. } => "invariant-part",
            Request::Isolating { .. } => "isolating",
            Request::IndexNbhd { .. } => "index-nbhd",
            Request::Sim { .. } => "sim",
            Request::Admissible { .. } => "admissible",
            Request::Index { .. } => "index",
            Request::SzymczakEqual { .. } => "szymczak-equal",
            Request::ShiftEquiv { .. } => "shift-equiv",
        }
    }
}

/// Wraps a result in the report envelope.
pub fn envelope(command: &str, settings: &Settings, status: Status, body: Map<String, Value>) -> Outcome {
    let mut report = Map::new();
    report.insert("tool".into(), json!(TOOL));
    report.insert("version".into(), json!(VERSION));
    report.insert("command".into(), json!(command));
    report.insert("seed".into(), json!(settings.seed));
    report.insert("bound".into(), json!(settings.bound));
    report.insert("status".into(), json!(status));
    report.extend(body);
    Outcome { status, report: Value::Object(report) }
}

pub fn input_error(command: &str, settings: &Settings, error: &KernelError) -> Outcome {
    let mut body = Map::new();
    body.insert("error".into(), json!(error.to_string()));
    envelope(command, settings, Status::InputError, body)
}

/// Parses, loads and runs one request.
pub fn run_text(text: &str, request: &Request, settings: &Settings) -> Outcome {
    match SystemDocument::parse(text).and_then(|d| d.load()) {
        Ok(model) => run(&model, request, settings),
        Err(e) => input_error(request.name(), settings, &e),
    }
}

pub fn run(model: &Model, request: &Request, settings: &Settings) -> Outcome {
    let command = request.name();
    let result = match model {
        Model::Finite { sys, subsets } => match request {
            Request::ShiftEquiv { from, to: Some(to) } => finite_shift_equiv(sys, subsets, from, to, settings.bound),
            Request::Index { .. } => dispatch(sys, subsets, request, settings.bound).map(|(s, mut body)| {
                add_finite_objects(sys, &mut body);
                (s, body)
            }),
            _ => dispatch(sys, subsets, request, settings.bound),
        },
        Model::Interval { sys, subsets } => dispatch(sys, subsets, request, settings.bound),
        Model::Semiflow { sys, subsets } => dispatch(sys, subsets, request, settings.bound),
        Model::Endos { endos, morphisms } => endo_command(endos, morphisms, request),
    };
    match result {
        Ok((status, mut body)) => {
            body.insert("kind".into(), json!(model.kind()));
            envelope(command, settings, status, body)
        }
        Err(e) => input_error(command, settings, &e),
    }
}

type Body = (Status, Map<String, Value>);

fn body(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn lookup<'m, R>(subsets: &'m BTreeMap<String, R>, name: &str) -> Result<&'m R> {
    subsets.get(name).ok_or_else(|| KernelError::InvalidInput(format!("no subset named {name:?}")))
}

/// Time values given on the command line.
pub trait ParseTime: Sized {
    fn parse_time(text: &str) -> Result<Self>;
}

impl ParseTime for usize {
    fn parse_time(text: &str) -> Result<Self> {
        text.trim().parse().map_err(|_| KernelError::Parse(format!("not a natural number: {text:?}")))
    }
}

impl ParseTime for Rational {
    fn parse_time(text: &str) -> Result<Self> {
        let t = parse_rational(text)?;
        if t < num::Zero::zero() {
            return Err(KernelError::InvalidInput("times must be nonnegative".into()));
        }
        Ok(t)
    }
}

fn triple_json<T: Time>(t: &Triple<T>) -> Value {
    let [a, b, c] = t.texts();
    json!({"a": a, "b": b, "c": c})
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect())
}

fn certified_json<C>(c: &Certified<C>, extra: impl FnOnce(&C) -> Value) -> (Status, Value) {
    match c {
        Certified::Yes(cert) => (Status::Ok, json!({"certified": true, "evidence": extra(cert)})),
        Certified::Failure { reason, checks } => {
            (Status::Violation, json!({"certified": false, "reason": reason, "checks": checks_json(checks)}))
        }
        Certified::Unknown { reason, bound, checks } => (
            Status::Undecided,
            json!({"certified": null, "reason": reason, "bound": bound, "checks": checks_json(checks)}),
        ),
    }
}

fn index_evidence<R>(cert: &IndexCertificate<R>) -> Value {
    let mut checks = cert.isolating.checks.clone();
    checks.extend(cert.checks.iter().cloned());
    json!({"checks": checks_json(&checks)})
}

fn sim_json<T: Time>(s: &Sim<T>) -> (Status, Value) {
    match s {
        Sim::Equivalent { forward, backward } => (
            Status::Ok,
            json!({"equivalent": true,
                   "forward": {"a": forward.0.text(), "b": forward.1.text()},
                   "backward": {"a": backward.0.text(), "b": backward.1.text()}}),
        ),
        Sim::NotEquivalent { reason } => (Status::Violation, json!({"equivalent": false, "reason": reason})),
        Sim::Unknown { bound, reason } => {
            (Status::Undecided, json!({"equivalent": null, "bound": bound, "reason": reason}))
        }
    }
}

fn dispatch<D>(sys: &D, subsets: &BTreeMap<String, RegionOf<D>>, request: &Request, bound: usize) -> Result<Body>
where
    D: Dynamics,
    D::T: ParseTime,
    RegionOf<D>: Describe,
    D::Map: Describe,
{
    match request {
        Request::Check { sets } => {
            let names: Vec<&String> = if sets.is_empty() { subsets.keys().collect() } else { sets.iter().collect() };
            let mut table = Map::new();
            for name in names {
                let e = lookup(subsets, name)?;
                let c = sys.compactifiability(e)?;
                let closure = e.closure();
                table.insert(
                    name.clone(),
                    json!({
                        "proper": c.proper,
                        "openly_defined": c.openly_defined,
                        "locally_compact": c.locally_compact,
                        "weakly_compactifiable": c.weakly(),
                        "compactifiable": c.full(),
                        "relatively_compact": closure.is_compact(),
                        "closure_in_domain": sys.closure_in_domain(e)?,
                        "reason": c.failure(),
                    }),
                );
            }
            Ok((Status::Ok, body(vec![("subsets", Value::Object(table))])))
        }
        Request::InvariantPart { set } => {
            let e = lookup(subsets, set)?;
            Ok(match sys.invariant_part(e, bound)? {
                InvariantPart::Exact { set: s, steps } => {
                    (Status::Ok, body(vec![("exact", json!(true)), ("set", s.describe()), ("steps", json!(steps))]))
                }
                InvariantPart::Unknown { outer, bound } => (
                    Status::Undecided,
                    body(vec![("exact", json!(false)), ("outer", outer.describe()), ("within", json!(bound))]),
                ),
            })
        }
        Request::Isolating { set, nbhd } => {
            let c = is_isolating(sys, lookup(subsets, nbhd)?, lookup(subsets, set)?, bound)?;
            let (status, result) = certified_json(&c, |cert| json!({"checks": checks_json(&cert.checks)}));
            Ok((status, body(vec![("result", result)])))
        }
        Request::IndexNbhd { set, nbhd, search: false } => {
            let c = is_index_nbhd(sys, lookup(subsets, nbhd)?, lookup(subsets, set)?, bound)?;
            let (status, result) = certified_json(&c, index_evidence);
            Ok((status, body(vec![("result", result)])))
        }
        Request::IndexNbhd { set, nbhd, search: true } => construction(sys, subsets, set, nbhd, bound),
        Request::Sim { from, to } => {
            let (status, result) = sim_json(&sim(sys, lookup(subsets, from)?, lookup(subsets, to)?, bound)?);
            Ok((status, body(vec![("result", result)])))
        }
        Request::Admissible { from, to, triple } => {
            let (e, e2) = (lookup(subsets, from)?, lookup(subsets, to)?);
            let found = match triple {
                Some([a, b, c]) => {
                    let t = Triple::new(D::T::parse_time(a)?, D::T::parse_time(b)?, D::T::parse_time(c)?)?;
                    if is_admissible(sys, e, e2, &t)? {
                        Search::Found(t)
                    } else {
                        Search::NotFound { complete: true, reason: "the triple is not admissible".into() }
                    }
                }
                None => find_admissible(sys, e, e2, bound)?,
            };
            Ok(match found {
                Search::Found(t) => {
                    let cross = cross_map(sys, e, e2, &t)?;
                    let result = json!({"admissible": true, "triple": triple_json(&t),
                                        "domain": cross.domain.describe(), "map": cross.map.describe()});
                    (Status::Ok, body(vec![("result", result)]))
                }
                Search::NotFound { complete, reason } => {
                    let status = if complete { Status::Violation } else { Status::Undecided };
                    let verdict = if complete { json!(false) } else { Value::Null };
                    (status, body(vec![("result", json!({"admissible": verdict, "reason": reason}))]))
                }
            })
        }
        Request::Index { set, nbhds, search } => index(sys, subsets, set, nbhds, *search, bound),
        Request::SzymczakEqual { .. } | Request::ShiftEquiv { .. } => Err(KernelError::InvalidInput(format!(
            "{} needs a based_endos document (or two finite subsets for shift-equiv)",
            request.name()
        ))),
    }
}

fn construction<D>(sys: &D, subsets: &BTreeMap<String, RegionOf<D>>, set: &str, nbhd: &str, bound: usize) -> Result<Body>
where
    D: Dynamics,
    RegionOf<D>: Describe,
{
    Ok(match construct_index_nbhd(sys, lookup(subsets, set)?, lookup(subsets, nbhd)?, bound)? {
        Search::Found(c) => {
            let (cert_status, certificate) = certified_json(&c.certificate, index_evidence);
            let (sim_status, sim_result) = sim_json(&c.sim_to_compact);
            let result = json!({
                "constructed": c.nbhd.describe(),
                "compact": c.compact.describe(),
                "interior": c.interior.describe(),
                "triple": triple_json(&c.triple),
                "certificate": certificate,
                "sim_to_compact": sim_result,
            });
            (cert_status.and(sim_status), body(vec![("result", result)]))
        }
        Search::NotFound { complete, reason } => {
            let status = if complete { Status::Violation } else { Status::Undecided };
            (status, body(vec![("result", json!({"constructed": null, "reason": reason}))]))
        }
    })
}

fn index<D>(
    sys: &D,
    subsets: &BTreeMap<String, RegionOf<D>>,
    set: &str,
    nbhds: &[String],
    search: bool,
    bound: usize,
) -> Result<Body>
where
    D: Dynamics,
    RegionOf<D>: Describe,
    D::Map: Describe,
{
    if nbhds.is_empty() {
        return Err(KernelError::InvalidInput("index needs at least one --nbhd".into()));
    }
    let s = lookup(subsets, set)?;
    let mut regions: Vec<(String, RegionOf<D>)> = Vec::new();
    let mut status = Status::Ok;
    let mut construction_report = Value::Null;
    if search {
        match construct_index_nbhd(sys, s, lookup(subsets, &nbhds[0])?, bound)? {
            Search::Found(c) => {
                construction_report = json!({"from": nbhds[0], "triple": triple_json(&c.triple), "constructed": c.nbhd.describe()});
                regions.push(("constructed".into(), c.nbhd));
            }
            Search::NotFound { complete, reason } => {
                let status = if complete { Status::Violation } else { Status::Undecided };
                return Ok((status, body(vec![("construction", json!({"constructed": null, "reason": reason}))])));
            }
        }
        for name in &nbhds[1..] {
            regions.push((name.clone(), lookup(subsets, name)?.clone()));
        }
    } else {
        for name in nbhds {
            regions.push((name.clone(), lookup(subsets, name)?.clone()));
        }
    }
    let mut objects = Vec::new();
    let mut certified = Vec::new();
    let mut certified_names = Vec::new();
    for (name, e) in &regions {
        let c = conley_index(sys, s, e, bound)?;
        let (st, verdict) = certified_json(&c, |ix| index_evidence(&ix.certificate));
        status = status.and(st);
        let induced = c.certificate().map(|ix| ix.induced.describe()).unwrap_or(Value::Null);
        objects.push(json!({"name": name, "nbhd": e.describe(), "induced_map": induced, "certificate": verdict}));
        if c.is_certified() {
            certified.push(e.clone());
            certified_names.push(name.clone());
        }
    }
    let mut system = Value::Null;
    if certified.len() >= 2 {
        let report = verify_simple_system(sys, &certified, bound)?;
        let links: Vec<Value> = report
            .links
            .iter()
            .map(|l| {
                json!({"from": certified_names[l.from], "to": certified_names[l.to],
                       "triple": triple_json(&l.triple),
                       "inverse_witness": l.inverse_witness.as_ref().map(|w| w.text()),
                       "composite_is_power": l.composite_is_power})
            })
            .collect();
        let missing: Vec<Value> = report
            .missing
            .iter()
            .map(|(i, j, r)| json!({"from": certified_names[*i], "to": certified_names[*j], "reason": r}))
            .collect();
        let ok = report.all_ok();
        status = status.and(if ok {
            Status::Ok
        } else if report.missing.is_empty() {
            Status::Violation
        } else {
            Status::Undecided
        });
        system = json!({"all_isomorphisms": ok, "identities": report.identities, "links": links,
                        "compositions_checked": report.compositions.len(), "missing": missing});
    }
    Ok((status, body(vec![("construction", construction_report), ("objects", Value::Array(objects)), ("simple_system", system)])))
}

/// Adds the one-point endomorphism and its canonical invariant to each index object.
fn add_finite_objects(sys: &FiniteSystem, body: &mut Map<String, Value>) {
    let Some(Value::Array(objects)) = body.get_mut("objects") else { return };
    for object in objects {
        let Some(labels) = object.get("nbhd").and_then(Value::as_array) else { continue };
        let labels: Vec<&str> = labels.iter().filter_map(Value::as_str).collect();
        let Ok(e) = FiniteSubset::from_labels(sys.map.space(), labels) else { continue };
        if let Ok(endo) = BasedEndo::one_point(&sys.map, &e) {
            let inv = canonical_invariant(&endo);
            object["one_point_endo"] = endo.describe();
            object["invariant"] = json!({"eventual_image": inv.eventual_image, "cycle_type": inv.cycle_type});
        }
    }
}

fn finite_shift_equiv(
    sys: &FiniteSystem,
    subsets: &BTreeMap<String, FiniteSubset>,
    from: &str,
    to: &str,
    bound: usize,
) -> Result<Body> {
    let (e, e2) = (lookup(subsets, from)?, lookup(subsets, to)?);
    let link = match crate::conley::connecting_morphism(sys, e, e2, bound)? {
        Search::Found(link) => link,
        Search::NotFound { complete, reason } => {
            let status = if complete { Status::Violation } else { Status::Undecided };
            return Ok((status, body(vec![("result", json!({"connecting": null, "reason": reason}))])));
        }
    };
    let morphism = crate::conley::finite_connecting_endo(sys, e, e2, &link)?;
    let mut result = shift_equiv_json(&morphism)?;
    result.insert("triple".into(), triple_json(&link.cross.triple));
    let status = Status::from_bool(result["shift_equivalence"].as_bool() == Some(true));
    Ok((status, body(vec![("result", Value::Object(result))])))
}

fn shift_equiv_json(m: &SzMorphism) -> Result<Map<String, Value>> {
    let witness = is_shift_equivalence(&m.map, None)?;
    let inverse = sz_is_iso(m, None)?;
    let mut out = Map::new();
    out.insert("morphism".into(), json!({"table": m.map.table(), "shift": m.shift}));
    out.insert("shift_equivalence".into(), json!(witness.is_some()));
    out.insert(
        "witness".into(),
        witness.map_or(Value::Null, |(psi, a)| json!({"inverse_table": psi.table(), "exponent": a})),
    );
    out.insert(
        "szymczak_inverse".into(),
        inverse.map_or(Value::Null, |inv| json!({"table": inv.map.table(), "shift": inv.shift})),
    );
    Ok(out)
}

fn endo_command(
    endos: &BTreeMap<String, BasedEndo>,
    morphisms: &BTreeMap<String, crate::document::NamedMorphism>,
    request: &Request,
) -> Result<Body> {
    let find = |name: &str| {
        morphisms.get(name).ok_or_else(|| KernelError::InvalidInput(format!("no morphism named {name:?}")))
    };
    match request {
        Request::SzymczakEqual { first, second } => {
            let (m, m2) = (find(first)?, find(second)?);
            let n = sz_equal(&m.morphism, &m2.morphism)?;
            let result = json!({"equal": n.is_some(), "witness": n});
            Ok((Status::from_bool(n.is_some()), body(vec![("result", result)])))
        }
        Request::ShiftEquiv { from, to: None } => {
            let result = shift_equiv_json(&find(from)?.morphism)?;
            let status = Status::from_bool(result["shift_equivalence"].as_bool() == Some(true));
            Ok((status, body(vec![("result", Value::Object(result))])))
        }
        Request::ShiftEquiv { from, to: Some(to) } => {
            let endo = |name: &str| {
                endos.get(name).ok_or_else(|| KernelError::InvalidInput(format!("no endo named {name:?}")))
            };
            let (f, g) = (endo(from)?, endo(to)?);
            let mut found = Value::Null;
            for phi in EquivariantMap::enumerate(f, g) {
                if let Some((psi, a)) = is_shift_equivalence(&phi, None)? {
                    found = json!({"table": phi.table(), "inverse_table": psi.table(), "exponent": a});
                    break;
                }
            }
            let (fi, gi) = (canonical_invariant(f), canonical_invariant(g));
            let result = json!({
                "shift_equivalent": !found.is_null(),
                "witness": found,
                "invariants_equal": fi == gi,
                "invariants": [
                    {"eventual_image": fi.eventual_image, "cycle_type": fi.cycle_type},
                    {"eventual_image": gi.eventual_image, "cycle_type": gi.cycle_type},
                ],
            });
            Ok((Status::from_bool(!found.is_null()), body(vec![("result", result)])))
        }
        Request::Check { .. } => {
            let table: Map<String, Value> = endos
                .iter()
                .map(|(name, f)| {
                    let inv = canonical_invariant(f);
                    (name.clone(), json!({"eventual_image": inv.eventual_image, "cycle_type": inv.cycle_type}))
                })
                .collect();
            Ok((Status::Ok, body(vec![("endos", Value::Object(table))])))
        }
        _ => Err(KernelError::InvalidInput(format!("{} needs a dynamical system document", request.name()))),
    }
}

/// A short human-readable rendering of a report.
pub fn render_human(report: &Value) -> String {
    let mut out = String::new();
    let field = |k: &str| report.get(k).map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()));
    out.push_str(&format!(
        "{} {}: {} ({})\n",
        field("tool").unwrap_or_default(),
        field("command").unwrap_or_default(),
        field("status").unwrap_or_default(),
        field("kind").unwrap_or_else(|| "-".into()),
    ));
    if let Value::Object(map) = report {
        for (k, v) in map {
            if ["tool", "version", "command", "status", "kind", "seed", "bound"].contains(&k.as_str()) {
                continue;
            }
            out.push_str(&format!("  {k}: {v}\n"));
        }
    }
    out
}
