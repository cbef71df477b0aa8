//! Tables and JSON rows. Exact fractions are primary; decimals are for the eye.

use std::cmp::Reverse;
use std::fmt::Write as _;

use serde::Serialize;
use tbm::{Frame, IntervalResult, MassFunction, Rational, Scalar, SubsetMask};

#[derive(Debug, Clone, Serialize)]
pub struct Number {
    pub exact: String,
    pub decimal: f64,
}

impl Number {
    pub fn of(x: &Rational) -> Self {
        Number {
            exact: x.to_literal(),
            decimal: x.to_f64(),
        }
    }

    fn is_integer(&self) -> bool {
        !self.exact.contains('/')
    }
}

fn decimal(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn number(x: &Rational) -> String {
    exact_cell(&Number::of(x))
}

#[derive(Debug, Clone, Serialize)]
pub struct Interval {
    pub lower: Number,
    pub upper: Number,
}

impl Interval {
    pub fn of(i: &IntervalResult<Rational>) -> Self {
        Interval {
            lower: Number::of(&i.lower),
            upper: Number::of(&i.upper),
        }
    }
}

pub fn interval(i: &IntervalResult<Rational>) -> String {
    let iv = Interval::of(i);
    let exact = format!("[{}, {}]", iv.lower.exact, iv.upper.exact);
    if iv.lower.is_integer() && iv.upper.is_integer() {
        exact
    } else {
        format!("{exact} ≈ [{}, {}]", decimal(iv.lower.decimal), decimal(iv.upper.decimal))
    }
}

/// One query row; absent fields are left out of the JSON.
#[derive(Debug, Clone, Default, Serialize)]
pub struct OutputRow {
    pub set: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub given: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bel: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pl: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dempster: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub robust: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contained: Option<bool>,
}

pub fn belief_row(m: &MassFunction<Rational>, set: SubsetMask) -> tbm::Result<OutputRow> {
    Ok(OutputRow {
        set: m.frame().render(set),
        bel: Some(Number::of(&m.bel(set)?)),
        pl: Some(Number::of(&m.pl(set)?)),
        ..OutputRow::default()
    })
}

pub fn belief_table(rows: &[OutputRow]) -> Table {
    let mut t = Table::new(["set", "bel", "pl"]);
    for r in rows {
        let show = |n: &Option<Number>| n.as_ref().map(exact_cell).unwrap_or_default();
        t.push([r.set.clone(), show(&r.bel), show(&r.pl)]);
    }
    t
}

fn exact_cell(n: &Number) -> String {
    if n.is_integer() {
        n.exact.clone()
    } else {
        format!("{} ≈ {}", n.exact, decimal(n.decimal))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalEntry {
    pub set: String,
    pub mass: Number,
}

pub fn focal_entries(m: &MassFunction<Rational>) -> Vec<FocalEntry> {
    m.focal()
        .map(|(s, v)| FocalEntry {
            set: m.frame().render(s),
            mass: Number::of(v),
        })
        .collect()
}

pub fn focal_table(entries: &[FocalEntry]) -> Table {
    let mut t = Table::new(["focal set", "mass"]);
    for e in entries {
        t.push([e.set.clone(), exact_cell(&e.mass)]);
    }
    t
}

/// Every nonempty subset by size, then by index order. Large frames fall
/// back to the singletons and the whole frame.
pub fn display_sets(frame: &Frame) -> Vec<SubsetMask> {
    const ALL_SUBSETS_UP_TO: usize = 8;
    let mut sets: Vec<SubsetMask> = if frame.len() <= ALL_SUBSETS_UP_TO {
        frame.subsets().skip(1).collect()
    } else {
        frame.singletons().chain([frame.full()]).collect()
    };
    sets.sort_by_key(|s| (s.len(), Reverse(s.bits().reverse_bits())));
    sets
}

/// Left-aligned plain-text table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<const N: usize>(&mut self, row: [String; N]) {
        self.rows.push(row.to_vec());
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i + 1 == cells.len() {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ");
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&self.header);
        for row in &self.rows {
            line(row);
        }
        out
    }
}
