//! JSON system documents.
//!
//! Rationals are strings `"p/q"`, intervals are `[lo, lo_closed, hi,
//! hi_closed]` with `"-inf"` / `"inf"` for unbounded ends, a box is a list of
//! intervals and a set is a list of boxes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{FiniteSystem, IntervalSystem};
use crate::error::{KernelError, Result};
use crate::finite::{FinitePartialMap, FiniteSpace, FiniteSubset};
use crate::interval::{AxisRule, BoxSet, Cut, Interval, Piece, PiecewiseAffineMap, Rect};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::semiflow::{AxisFlow, ExactSemiflow};
use crate::szymczak::{BasedEndo, EquivariantMap, SzMorphism, BASEPOINT};

pub type IntervalDoc = (String, bool, String, bool);
pub type BoxDoc = Vec<IntervalDoc>;
pub type SetDoc = Vec<BoxDoc>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub slope: String,
    pub intercept: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub domain: SetDoc,
    pub rule: Vec<RuleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum AxisDoc {
    Still,
    Translate { velocity: String },
    Floor { velocity: String, level: String },
    Ceil { velocity: String, level: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoDoc {
    /// Labels of the non-basepoint points; defaults to `1..n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Image indices, basepoint first.
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: String,
    pub target: String,
    pub table: Vec<usize>,
    #[serde(default)]
    pub shift: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemDocument {
    FiniteMap {
        points: Vec<String>,
        /// Point → image; absent or `null` means undefined.
        table: BTreeMap<String, Option<String>>,
        #[serde(default)]
        subsets: BTreeMap<String, Vec<String>>,
    },
    IntervalMap {
        dimension: usize,
        pieces: Vec<PieceDoc>,
        #[serde(default)]
        subsets: BTreeMap<String, SetDoc>,
    },
    Semiflow {
        carrier: BoxDoc,
        axes: Vec<AxisDoc>,
        #[serde(default)]
        subsets: BTreeMap<String, SetDoc>,
    },
    BasedEndos {
        endos: BTreeMap<String, EndoDoc>,
        #[serde(default)]
        morphisms: BTreeMap<String, MorphismDoc>,
    },
}

/// A loaded document: kernel objects plus named subsets.
#[derive(Clone, Debug)]
pub enum Model {
    Finite { sys: FiniteSystem, subsets: BTreeMap<String, FiniteSubset> },
    Interval { sys: IntervalSystem, subsets: BTreeMap<String, BoxSet> },
    Semiflow { sys: ExactSemiflow, subsets: BTreeMap<String, BoxSet> },
    Endos { endos: BTreeMap<String, BasedEndo>, morphisms: BTreeMap<String, NamedMorphism> },
}

/// A morphism together with the names of its endpoints.
#[derive(Clone, Debug)]
pub struct NamedMorphism {
    pub source: String,
    pub target: String,
    pub morphism: SzMorphism,
}

impl SystemDocument {
    pub fn parse(text: &str) -> Result<SystemDocument> {
        serde_json::from_str(text).map_err(|e| KernelError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialise")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SystemDocument::FiniteMap { .. } => "finite_map",
            SystemDocument::IntervalMap { .. } => "interval_map",
            SystemDocument::Semiflow { .. } => "semiflow",
            SystemDocument::BasedEndos { .. } => "based_endos",
        }
    }

    pub fn load(&self) -> Result<Model> {
        match self {
            SystemDocument::FiniteMap { points, table, subsets } => {
                let space = FiniteSpace::new(points.iter().cloned())?;
                for key in table.keys() {
                    space.index_of(key)?;
                }
                let pairs = table.iter().filter_map(|(x, y)| y.as_ref().map(|y| (x.as_str(), y.as_str())));
                let map = FinitePartialMap::from_pairs(&space, pairs)?;
                let subsets = subsets
                    .iter()
                    .map(|(name, labels)| Ok((name.clone(), FiniteSubset::from_labels(&space, labels)?)))
                    .collect::<Result<_>>()?;
                Ok(Model::Finite { sys: FiniteSystem::new(map), subsets })
            }
            SystemDocument::IntervalMap { dimension, pieces, subsets } => {
                let pieces = pieces
                    .iter()
                    .map(|p| {
                        let rule = p.rule.iter().map(load_rule).collect::<Result<Vec<_>>>()?;
                        Ok(Piece { domain: load_set(*dimension, &p.domain)?, rule })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let map = PiecewiseAffineMap::new(*dimension, pieces)?;
                Ok(Model::Interval { sys: IntervalSystem::new(map), subsets: load_sets(*dimension, subsets)? })
            }
            SystemDocument::Semiflow { carrier, axes, subsets } => {
                let carrier = load_box(carrier)?;
                let dim = carrier.dim();
                let axes = axes.iter().map(load_axis).collect::<Result<Vec<_>>>()?;
                let sys = ExactSemiflow::new(carrier, axes)?;
                Ok(Model::Semiflow { sys, subsets: load_sets(dim, subsets)? })
            }
            SystemDocument::BasedEndos { endos, morphisms } => {
                let endos: BTreeMap<String, BasedEndo> = endos
                    .iter()
                    .map(|(name, doc)| {
                        let endo = match &doc.labels {
                            None => BasedEndo::from_table(doc.table.clone())?,
                            Some(labels) => {
                                let labels = std::iter::once(BASEPOINT.to_string()).chain(labels.iter().cloned()).collect();
                                BasedEndo::new(labels, doc.table.clone())?
                            }
                        };
                        Ok((name.clone(), endo))
                    })
                    .collect::<Result<_>>()?;
                let find = |name: &str| {
                    endos.get(name).ok_or_else(|| KernelError::InvalidInput(format!("unknown endomorphism {name:?}")))
                };
                let morphisms = morphisms
                    .iter()
                    .map(|(name, m)| {
                        let map = EquivariantMap::new(find(&m.source)?, find(&m.target)?, m.table.clone())?;
                        let morphism = SzMorphism { map, shift: m.shift };
                        Ok((name.clone(), NamedMorphism { source: m.source.clone(), target: m.target.clone(), morphism }))
                    })
                    .collect::<Result<_>>()?;
                Ok(Model::Endos { endos, morphisms })
            }
        }
    }
}

impl Model {
    /// The document describing this model.
    pub fn to_document(&self) -> SystemDocument {
        match self {
            Model::Finite { sys, subsets } => {
                let space = sys.map.space();
                let table = (0..space.len())
                    .map(|x| (space.label(x).to_string(), sys.map.apply(x).map(|y| space.label(y).to_string())))
                    .collect();
                SystemDocument::FiniteMap {
                    points: space.points().to_vec(),
                    table,
                    subsets: subsets.iter().map(|(k, s)| (k.clone(), s.labels())).collect(),
                }
            }
            Model::Interval { sys, subsets } => SystemDocument::IntervalMap {
                dimension: sys.map.dim(),
                pieces: sys
                    .map
                    .pieces()
                    .iter()
                    .map(|p| PieceDoc {
                        domain: set_doc(&p.domain),
                        rule: p
                            .rule
                            .iter()
                            .map(|r| RuleDoc { slope: format_rational(&r.slope), intercept: format_rational(&r.intercept) })
                            .collect(),
                    })
                    .collect(),
                subsets: subsets.iter().map(|(k, s)| (k.clone(), set_doc(s))).collect(),
            },
            Model::Semiflow { sys, subsets } => SystemDocument::Semiflow {
                carrier: box_doc(sys.carrier()),
                axes: sys.axes().iter().map(axis_doc).collect(),
                subsets: subsets.iter().map(|(k, s)| (k.clone(), set_doc(s))).collect(),
            },
            Model::Endos { endos, morphisms } => SystemDocument::BasedEndos {
                endos: endos
                    .iter()
                    .map(|(k, e)| {
                        let labels = e.labels()[1..].to_vec();
                        let numbered = labels.iter().enumerate().all(|(i, l)| *l == (i + 1).to_string());
                        (k.clone(), EndoDoc { labels: (!numbered).then_some(labels), table: e.table().to_vec() })
                    })
                    .collect(),
                morphisms: morphisms
                    .iter()
                    .map(|(k, m)| {
                        let doc = MorphismDoc {
                            source: m.source.clone(),
                            target: m.target.clone(),
                            table: m.morphism.map.table().to_vec(),
                            shift: m.morphism.shift,
                        };
                        (k.clone(), doc)
                    })
                    .collect(),
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Finite { .. } => "finite_map",
            Model::Interval { .. } => "interval_map",
            Model::Semiflow { .. } => "semiflow",
            Model::Endos { .. } => "based_endos",
        }
    }
}

fn parse_q(text: &str) -> Result<Rational> {
    parse_rational(text)
}

fn load_rule(doc: &RuleDoc) -> Result<AxisRule> {
    Ok(AxisRule::new(parse_q(&doc.slope)?, parse_q(&doc.intercept)?))
}

fn load_axis(doc: &AxisDoc) -> Result<AxisFlow> {
    Ok(match doc {
        AxisDoc::Still => AxisFlow::Still,
        AxisDoc::Translate { velocity } => AxisFlow::Translate { velocity: parse_q(velocity)? },
        AxisDoc::Floor { velocity, level } => AxisFlow::Floor { velocity: parse_q(velocity)?, level: parse_q(level)? },
        AxisDoc::Ceil { velocity, level } => AxisFlow::Ceil { velocity: parse_q(velocity)?, level: parse_q(level)? },
    })
}

pub fn load_interval(doc: &IntervalDoc) -> Result<Interval> {
    let (lo, lo_closed, hi, hi_closed) = doc;
    let (lo, hi) = (Cut::parse(lo)?, Cut::parse(hi)?);
    if (*lo_closed && !lo.is_finite()) || (*hi_closed && !hi.is_finite()) {
        return Err(KernelError::Parse("an infinite endpoint cannot be closed".into()));
    }
    Interval::strict(lo, *lo_closed, hi, *hi_closed)
}

pub fn load_box(doc: &BoxDoc) -> Result<Rect> {
    Ok(Rect::new(doc.iter().map(load_interval).collect::<Result<_>>()?))
}

pub fn load_set(dim: usize, doc: &SetDoc) -> Result<BoxSet> {
    let rects = doc
        .iter()
        .map(|b| {
            let r = load_box(b)?;
            crate::error::ensure_dim(dim, r.dim())?;
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    BoxSet::from_rects(dim, rects)
}

fn load_sets(dim: usize, docs: &BTreeMap<String, SetDoc>) -> Result<BTreeMap<String, BoxSet>> {
    docs.iter().map(|(k, d)| Ok((k.clone(), load_set(dim, d)?))).collect()
}

pub fn interval_doc(i: &Interval) -> IntervalDoc {
    (i.lo().to_string(), i.lo_closed(), i.hi().to_string(), i.hi_closed())
}

pub fn box_doc(r: &Rect) -> BoxDoc {
    r.axes().iter().map(interval_doc).collect()
}

pub fn set_doc(s: &BoxSet) -> SetDoc {
    s.rects().iter().map(box_doc).collect()
}

fn axis_doc(a: &AxisFlow) -> AxisDoc {
    match a {
        AxisFlow::Still => AxisDoc::Still,
        AxisFlow::Translate { velocity } => AxisDoc::Translate { velocity: format_rational(velocity) },
        AxisFlow::Floor { velocity, level } => {
            AxisDoc::Floor { velocity: format_rational(velocity), level: format_rational(level) }
        }
        AxisFlow::Ceil { velocity, level } => {
            AxisDoc::Ceil { velocity: format_rational(velocity), level: format_rational(level) }
        }
    }
}

/// JSON rendering of kernel values for reports.
pub trait Describe {
    fn describe(&self) -> Value;
}

impl Describe for usize {
    fn describe(&self) -> Value {
        json!(self)
    }
}

impl Describe for Rational {
    fn describe(&self) -> Value {
        json!(format_rational(self))
    }
}

impl Describe for FiniteSubset {
    fn describe(&self) -> Value {
        json!(self.labels())
    }
}

impl Describe for BoxSet {
    fn describe(&self) -> Value {
        json!(set_doc(self))
    }
}

impl Describe for FinitePartialMap {
    fn describe(&self) -> Value {
        let pairs: BTreeMap<String, String> = self.pairs().into_iter().collect();
        json!(pairs)
    }
}

impl Describe for PiecewiseAffineMap {
    fn describe(&self) -> Value {
        let pieces: Vec<Value> = self
            .pieces()
            .iter()
            .map(|p| {
                let rule: Vec<Value> = p
                    .rule
                    .iter()
                    .map(|r| json!({"slope": format_rational(&r.slope), "intercept": format_rational(&r.intercept)}))
                    .collect();
                json!({"domain": set_doc(&p.domain), "rule": rule})
            })
            .collect();
        json!(pieces)
    }
}

impl Describe for BasedEndo {
    fn describe(&self) -> Value {
        json!({"labels": self.labels(), "table": self.table()})
    }
}
