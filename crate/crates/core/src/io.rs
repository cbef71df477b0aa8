//! JSON document formats and set expressions.
//!
//! Mass file:
//! `{"frame": ["P1","P2","P3"], "mode": "closed", "masses": [{"set": ["P1"], "mass": "1/3"}, ...]}`
//!
//! Belief file (a mass file with `bel` in place of `masses`, one entry per
//! nonempty subset):
//! `{"frame": ["a","b"], "bel": [{"set": ["a"], "value": "1/2"}, ...]}`
//!
//! Source file:
//! `{"X": ["S1","S2"], "p": ["1/2","1/2"], "Y": ["P1","P2"], "M": {"S1": ["P1"], "S2": ["P1","P2"]}}`
//!
//! Scenario file:
//! `{"outcomes": [...], "sources": [{"name": "S1", "prob": "1/3", "options": ["P1","P2"]}, ...],
//!   "killed_worlds": ["w2"], "killed_pairs": [["w4","S1"]]}`
//!
//! Numbers are `"num/den"` or decimal strings; bare JSON numbers are read as
//! their decimal text. Files are written with fractions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::{MassFunction, WorldMode};
use crate::scalar::Scalar;
use crate::scenario::{Scenario, WorldId};
use crate::source::MultivaluedSource;
use crate::transform::BeliefTable;

/// A number as written in a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Text(String),
    Number(serde_json::Number),
}

impl Literal {
    pub fn of<T: Scalar>(value: &T) -> Self {
        Literal::Text(value.to_literal())
    }

    pub fn parse<T: Scalar>(&self, field: &str) -> Result<T> {
        let text = match self {
            Literal::Text(s) => s.clone(),
            Literal::Number(n) => n.to_string(),
        };
        T::parse_literal(&text).map_err(|source| Error::Literal {
            field: field.to_string(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub set: Vec<String>,
    pub mass: Literal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BelEntry {
    pub set: Vec<String>,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassDocument {
    pub frame: Vec<String>,
    #[serde(default)]
    pub mode: WorldMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<MassEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bel: Option<Vec<BelEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDocument {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub p: Vec<Literal>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    #[serde(rename = "M")]
    pub m: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSource {
    pub name: String,
    pub prob: Literal,
    pub options: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub outcomes: Vec<String>,
    pub sources: Vec<ScenarioSource>,
    #[serde(default)]
    pub killed_worlds: Vec<String>,
    #[serde(default)]
    pub killed_pairs: Vec<(String, String)>,
}

/// Parses `{P1, P3}`. Braces are required; `{}` is the empty set.
pub fn parse_set_expression(frame: &Frame, text: &str) -> Result<SubsetMask> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::SetExpression(text.to_string()))?;
    if inner.trim().is_empty() {
        return Ok(SubsetMask::EMPTY);
    }
    let names: Vec<&str> = inner.split(',').map(str::trim).collect();
    if names.iter().any(|n| n.is_empty()) {
        return Err(Error::SetExpression(text.to_string()));
    }
    frame.subset(names)
}

fn names(frame: &Frame, set: SubsetMask) -> Vec<String> {
    frame.names(set).into_iter().map(str::to_string).collect()
}

impl MassDocument {
    pub fn from_mass<T: Scalar>(m: &MassFunction<T>) -> Self {
        MassDocument {
            frame: m.frame().labels().to_vec(),
            mode: m.mode(),
            masses: Some(
                m.focal()
                    .map(|(set, mass)| MassEntry {
                        set: names(m.frame(), set),
                        mass: Literal::of(mass),
                    })
                    .collect(),
            ),
            bel: None,
        }
    }

    /// Validates and builds the mass function. A `bel` document goes through
    /// Möbius inversion and is rejected if it is not a belief function.
    pub fn to_mass<T: Scalar>(&self) -> Result<MassFunction<T>> {
        let frame = Frame::new(self.frame.iter().cloned())?;
        match (&self.masses, &self.bel) {
            (Some(entries), None) => {
                let assignments = entries
                    .iter()
                    .map(|e| {
                        let set = frame.subset(&e.set)?;
                        let field = format!("mass of {}", frame.render(set));
                        Ok((set, e.mass.parse::<T>(&field)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                MassFunction::new(frame, assignments, self.mode)
            }
            (None, Some(entries)) => self.table_from_bel(frame, entries)?.to_mass(),
            _ => Err(Error::Document(
                "expected exactly one of \"masses\" or \"bel\"".to_string(),
            )),
        }
    }

    fn table_from_bel<T: Scalar>(&self, frame: Frame, entries: &[BelEntry]) -> Result<BeliefTable<T>> {
        let mut values: Vec<Option<T>> = vec![None; frame.powerset_len()];
        values[0] = Some(T::zero());
        for e in entries {
            let set = frame.subset(&e.set)?;
            let field = format!("bel of {}", frame.render(set));
            let v = e.value.parse::<T>(&field)?;
            if set.is_empty() {
                if !v.is_negligible() {
                    return Err(Error::InvalidBeliefTable(format!(
                        "bel of the empty set is {}, expected 0",
                        v.to_literal()
                    )));
                }
                continue;
            }
            if values[set.bits() as usize].is_some() {
                return Err(Error::InvalidBeliefTable(format!(
                    "{} listed twice",
                    frame.render(set)
                )));
            }
            values[set.bits() as usize] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(bits, v)| {
                v.ok_or_else(|| {
                    Error::InvalidBeliefTable(format!(
                        "missing bel for {}",
                        frame.render(SubsetMask::from_bits(bits as u32))
                    ))
                })
            })
            .collect::<Result<Vec<T>>>()?;
        BeliefTable::new(frame, values, self.mode)
    }
}

impl SourceDocument {
    pub fn from_source<T: Scalar>(s: &MultivaluedSource<T>) -> Self {
        SourceDocument {
            x: s.labels().to_vec(),
            p: s.probabilities().iter().map(Literal::of).collect(),
            y: s.target().labels().to_vec(),
            m: s
                .labels()
                .iter()
                .zip(s.images())
                .map(|(l, &img)| (l.clone(), names(s.target(), img)))
                .collect(),
        }
    }

    pub fn to_source<T: Scalar>(&self) -> Result<MultivaluedSource<T>> {
        let target = Frame::new(self.y.iter().cloned())?;
        if self.p.len() != self.x.len() {
            return Err(Error::Document(format!(
                "\"p\" has {} entries for {} states in \"X\"",
                self.p.len(),
                self.x.len()
            )));
        }
        if let Some(extra) = self.m.keys().find(|k| !self.x.contains(k)) {
            return Err(Error::UnknownSource(extra.clone()));
        }
        let entries = self
            .x
            .iter()
            .zip(&self.p)
            .map(|(label, p)| {
                let image = self
                    .m
                    .get(label)
                    .ok_or_else(|| Error::Document(format!("\"M\" has no image for {label}")))?;
                let image = target.subset(image)?;
                Ok((label.clone(), p.parse::<T>(&format!("p of {label}"))?, image))
            })
            .collect::<Result<Vec<_>>>()?;
        MultivaluedSource::new(target, entries)
    }
}

impl ScenarioDocument {
    /// Serializes the scenario's current state. Pairs are listed only for
    /// worlds that are not deleted whole.
    pub fn from_scenario<T: Scalar>(sc: &Scenario<T>) -> Self {
        let frame = sc.outcomes();
        let k = sc.sources().len();
        let mut killed_worlds = Vec::new();
        let mut killed_pairs = Vec::new();
        for w in (0..sc.world_count()).map(WorldId) {
            let dead: Vec<usize> = (0..k).filter(|&x| !sc.is_alive(w, x)).collect();
            if dead.len() == k {
                killed_worlds.push(w.to_string());
            } else {
                killed_pairs.extend(dead.into_iter().map(|x| (w.to_string(), sc.sources()[x].clone())));
            }
        }
        ScenarioDocument {
            outcomes: frame.labels().to_vec(),
            sources: sc
                .sources()
                .iter()
                .zip(sc.probabilities())
                .zip(sc.options())
                .map(|((name, p), &opts)| ScenarioSource {
                    name: name.clone(),
                    prob: Literal::of(p),
                    options: names(frame, opts),
                })
                .collect(),
            killed_worlds,
            killed_pairs,
        }
    }

    /// Builds the scenario, then applies `killed_worlds` as Case 1 and
    /// `killed_pairs` as Case 2.
    pub fn to_scenario<T: Scalar>(&self) -> Result<Scenario<T>> {
        let frame = Frame::new(self.outcomes.iter().cloned())?;
        let sources = self
            .sources
            .iter()
            .map(|s| {
                Ok((
                    s.name.clone(),
                    s.prob.parse::<T>(&format!("prob of {}", s.name))?,
                    frame.subset(&s.options)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sc = Scenario::build(frame, sources)?;
        if !self.killed_worlds.is_empty() {
            let worlds = self
                .killed_worlds
                .iter()
                .map(|w| w.parse())
                .collect::<Result<Vec<WorldId>>>()?;
            sc = sc.apply_case1(&worlds)?;
        }
        if !self.killed_pairs.is_empty() {
            let pairs = self
                .killed_pairs
                .iter()
                .map(|(w, s)| Ok((w.parse::<WorldId>()?, s.as_str())))
                .collect::<Result<Vec<_>>>()?;
            sc = sc.apply_case2(&pairs)?;
        }
        Ok(sc)
    }
}

/// What a document turned out to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Mass,
    Belief,
    Source,
    Scenario,
}

/// Recognizes a document by its keys.
pub fn document_kind(value: &Value) -> Result<DocumentKind> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Document("expected a JSON object".to_string()))?;
    if obj.contains_key("masses") {
        Ok(DocumentKind::Mass)
    } else if obj.contains_key("bel") {
        Ok(DocumentKind::Belief)
    } else if obj.contains_key("M") {
        Ok(DocumentKind::Source)
    } else if obj.contains_key("sources") {
        Ok(DocumentKind::Scenario)
    } else {
        Err(Error::Document(
            "expected a mass, belief, source or scenario document".to_string(),
        ))
    }
}

/// Reads a mass function from any document kind. Sources and scenarios give
/// their normalized induced mass.
pub fn load_mass<T: Scalar>(text: &str) -> Result<(MassFunction<T>, DocumentKind)> {
    let value: Value = serde_json::from_str(text)?;
    let kind = document_kind(&value)?;
    let mass = match kind {
        DocumentKind::Mass | DocumentKind::Belief => {
            serde_json::from_value::<MassDocument>(value)?.to_mass()?
        }
        DocumentKind::Source => serde_json::from_value::<SourceDocument>(value)?
            .to_source::<T>()?
            .induced_mass(true)?,
        DocumentKind::Scenario => serde_json::from_value::<ScenarioDocument>(value)?
            .to_scenario::<T>()?
            .induced_mass(true)?,
    };
    Ok((mass, kind))
}

pub fn load_scenario<T: Scalar>(text: &str) -> Result<Scenario<T>> {
    serde_json::from_str::<ScenarioDocument>(text)?.to_scenario()
}

pub fn load_source<T: Scalar>(text: &str) -> Result<MultivaluedSource<T>> {
    serde_json::from_str::<SourceDocument>(text)?.to_source()
}

pub fn mass_to_json<T: Scalar>(m: &MassFunction<T>) -> String {
    serde_json::to_string_pretty(&MassDocument::from_mass(m)).expect("mass documents serialize")
}
