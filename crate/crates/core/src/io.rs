//! Reading and writing diagrams, tableaux and reports.
//!
//! Two diagram formats are supported: a JSON document with one object per
//! nonzero entry, and a Betti table whose rows are labelled by `j - i`. See
//! `docs/formats.md` for the grammar.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::decompose::Decomposition;
use crate::diagram::{BettiDiagram, Rational};
use crate::functionals::{BoundaryFacet, FacetInequality, Functional};
use crate::poset::{Chain, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate entry at ({i}, {j})")]
    DuplicateEntry { i: usize, j: i64 },
    #[error("homological index {i} is outside 0..={n}")]
    Index { i: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Json,
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format {other:?}, expected json or table")),
        }
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses `p` or `p/q` with integer `p` and nonzero `q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(p) || !valid(q) {
        return None;
    }
    let p = BigInt::from_str(p).ok()?;
    let q = BigInt::from_str(q).ok()?;
    (!q.is_zero()).then(|| Rational::new(p, q))
}

pub fn ser_rational<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum ValueDoc {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    i: usize,
    j: i64,
    value: ValueDoc,
}

/// JSON shape of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub n: usize,
    entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl DiagramDocument {
    pub fn from_diagram(b: &BettiDiagram) -> Self {
        Self {
            n: b.n(),
            entries: b
                .entries()
                .map(|(i, j, v)| EntryDoc {
                    i,
                    j,
                    value: ValueDoc::Text(v.to_string()),
                })
                .collect(),
            name: None,
            source: None,
        }
    }

    pub fn to_diagram(&self) -> Result<BettiDiagram, IoError> {
        let mut seen = BTreeSet::new();
        let mut b = BettiDiagram::zero(self.n);
        for e in &self.entries {
            if e.i > self.n {
                return Err(IoError::Index { i: e.i, n: self.n });
            }
            if !seen.insert((e.i, e.j)) {
                return Err(IoError::DuplicateEntry { i: e.i, j: e.j });
            }
            let v = match &e.value {
                ValueDoc::Int(v) => Rational::from_integer((*v).into()),
                ValueDoc::Text(t) => parse_rational(t.trim()).ok_or_else(|| {
                    parse_err(0, 0, format!("entry ({}, {}): {t:?} is not a rational", e.i, e.j))
                })?,
            };
            b.set(e.i, e.j, v);
        }
        Ok(b)
    }
}

fn json_err(e: serde_json::Error) -> IoError {
    parse_err(e.line(), e.column(), e.to_string())
}

pub fn parse_diagram(text: &str, format: Format) -> Result<BettiDiagram, IoError> {
    match format {
        Format::Json => serde_json::from_str::<DiagramDocument>(text)
            .map_err(json_err)?
            .to_diagram(),
        Format::Table => parse_table(text),
    }
}

/// Guesses the format from the first non-blank character.
pub fn parse_diagram_auto(text: &str) -> Result<BettiDiagram, IoError> {
    if text.trim_start().starts_with('{') {
        parse_diagram(text, Format::Json)
    } else {
        parse_diagram(text, Format::Table)
    }
}

pub fn emit_diagram(b: &BettiDiagram, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&DiagramDocument::from_diagram(b))
                .expect("documents always serialize");
            s.push('\n');
            s
        }
        Format::Table => emit_table(b),
    }
}

fn is_zero_cell(t: &str) -> bool {
    matches!(t, "-" | "\u{2212}" | "." | "0")
}

fn parse_table(text: &str) -> Result<BettiDiagram, IoError> {
    let mut declared_n: Option<usize> = None;
    let mut rows: Vec<(usize, i64, Vec<(usize, &str)>)> = Vec::new();
    let mut labels = BTreeSet::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(parse_err(line_no, col, "expected `<row label>:` or `n: <count>`"));
        };
        let head = content[..colon].trim();
        let rest = &content[colon + 1..];
        let offset = colon + 1;
        let cells: Vec<(usize, &str)> = rest
            .split_whitespace()
            .map(|t| {
                let pos = t.as_ptr() as usize - rest.as_ptr() as usize;
                (offset + pos + 1, t)
            })
            .collect();
        if head == "n" {
            if declared_n.is_some() || !rows.is_empty() {
                return Err(parse_err(line_no, 1, "`n:` must appear once, before the rows"));
            }
            let [(col, t)] = cells.as_slice() else {
                return Err(parse_err(line_no, offset + 1, "expected a single count after `n:`"));
            };
            declared_n = Some(t.parse().map_err(|_| parse_err(line_no, *col, format!("{t:?} is not a count")))?);
            continue;
        }
        let label_col = content.len() - content.trim_start().len() + 1;
        let label: i64 = head
            .parse()
            .map_err(|_| parse_err(line_no, label_col, format!("{head:?} is not an integer row label")))?;
        if !labels.insert(label) {
            return Err(parse_err(line_no, label_col, format!("row {label} appears twice")));
        }
        rows.push((line_no, label, cells));
    }

    let widest = rows.iter().map(|(_, _, c)| c.len()).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) => n,
        None if widest == 0 => {
            return Err(parse_err(1, 1, "empty table needs an `n:` line"));
        }
        None => widest - 1,
    };
    let mut b = BettiDiagram::zero(n);
    for (line_no, label, cells) in rows {
        if cells.len() > n + 1 {
            return Err(IoError::Index { i: cells.len() - 1, n });
        }
        for (i, (col, t)) in cells.into_iter().enumerate() {
            if is_zero_cell(t) {
                continue;
            }
            let v = parse_rational(t)
                .ok_or_else(|| parse_err(line_no, col, format!("{t:?} is not a rational or `-`")))?;
            b.set(i, label + i as i64, v);
        }
    }
    Ok(b)
}

/// Betti table over the smallest row range containing the support, with all
/// `n + 1` columns. The zero diagram prints only its `n:` line.
pub fn emit_table(b: &BettiDiagram) -> String {
    let Ok((lo, hi)) = crate::diagram::window_of(b) else {
        return format!("n: {}\n", b.n());
    };
    let cell = |i: usize, r: i64| {
        let v = b.get(i, r + i as i64);
        if v.is_zero() {
            "-".to_string()
        } else {
            v.to_string()
        }
    };
    let width = (lo..=hi)
        .flat_map(|r| (0..=b.n()).map(move |i| (i, r)))
        .map(|(i, r)| cell(i, r).len())
        .max()
        .unwrap_or(1);
    let label_width = (lo..=hi).map(|r| r.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for r in lo..=hi {
        let _ = write!(out, "{:>label_width$}:", r);
        for i in 0..=b.n() {
            let _ = write!(out, " {:>width$}", cell(i, r));
        }
        out.push('\n');
    }
    out
}

/// A tableau file, optionally carrying the window bottom row and minimal
/// codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauDocument {
    pub tableau: Tableau,
    pub low: Option<i64>,
    pub min_codim: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableauJson {
    rows: Vec<Vec<usize>>,
    #[serde(rename = "M")]
    low: Option<i64>,
    #[serde(rename = "s")]
    min_codim: Option<usize>,
}

/// JSON `{"rows": [[...]], "M": m, "s": s}` or a whitespace separated grid.
pub fn parse_tableau(text: &str) -> Result<TableauDocument, IoError> {
    let invalid = |e: crate::poset::PosetError| parse_err(1, 1, e.to_string());
    if text.trim_start().starts_with('{') {
        let doc: TableauJson = serde_json::from_str(text).map_err(json_err)?;
        return Ok(TableauDocument {
            tableau: Tableau::new(doc.rows).map_err(invalid)?,
            low: doc.low,
            min_codim: doc.min_codim,
        });
    }
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let row = content
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln + 1, 1, format!("{t:?} is not a cell number"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(TableauDocument {
        tableau: Tableau::new(rows).map_err(invalid)?,
        low: None,
        min_codim: None,
    })
}

fn big_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn functional_json(f: &Functional) -> Value {
    let (lower, center, upper) = f.anchors();
    let grid: Vec<Vec<Value>> = f
        .grid()
        .iter()
        .map(|row| row.iter().map(big_to_json).collect())
        .collect();
    json!({
        "lower": lower,
        "removed": center,
        "upper": upper,
        "case": f.case(),
        "grid": grid,
    })
}

pub fn chain_json(c: &Chain) -> Value {
    json!(c.elements())
}

pub fn inequality_json(f: &FacetInequality) -> Value {
    let mut v = functional_json(&f.functional);
    v["kind"] = json!(f.kind);
    v
}

pub fn facet_json(f: &BoundaryFacet) -> Value {
    let mut v = functional_json(&f.functional);
    v["kind"] = json!(f.kind);
    v["facet"] = chain_json(&f.facet);
    v
}

pub fn decomposition_json(dec: &Decomposition) -> Value {
    let terms: Vec<Value> = dec
        .terms()
        .iter()
        .map(|(c, p)| json!([c.to_string(), p.degrees()]))
        .collect();
    json!({
        "n": dec.n(),
        "terms": terms,
        "residual_zero": dec.has_zero_residual(),
    })
}

pub fn emit_decomposition(dec: &Decomposition) -> String {
    emit_report(&decomposition_json(dec))
}

/// Pretty JSON with sorted object keys and a trailing newline.
pub fn emit_report<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("reports always serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::int;

    const EXAMPLE: &str = "0: 1 - - -\n1: - 2 1 -\n2: - 1 2 1\n";

    fn example() -> BettiDiagram {
        BettiDiagram::from_ints(3, &[(0, 0, 1), (1, 2, 2), (1, 3, 1), (2, 3, 1), (2, 4, 2), (3, 5, 1)])
            .unwrap()
    }

    #[test]
    fn parses_example_table() {
        assert_eq!(parse_diagram(EXAMPLE, Format::Table).unwrap(), example());
        let unicode = "0: 1 \u{2212} \u{2212} \u{2212}\n1: \u{2212} 2 1 \u{2212}\n2: \u{2212} 1 2 1\n";
        assert_eq!(parse_diagram(unicode, Format::Table).unwrap(), example());
    }

    #[test]
    fn table_round_trip() {
        let b = example();
        let t = emit_table(&b);
        assert_eq!(t, "0: 1 - - -\n1: - 2 1 -\n2: - 1 2 1\n");
        assert_eq!(parse_diagram(&t, Format::Table).unwrap(), b);
        let z = BettiDiagram::zero(4);
        assert_eq!(parse_diagram(&emit_table(&z), Format::Table).unwrap(), z);
    }

    #[test]
    fn fractions_and_negative_rows() {
        let b = parse_diagram("-1: 1/6 -\n", Format::Table).unwrap();
        assert_eq!(b.get(0, -1), Rational::new(1.into(), 6.into()));
        assert_eq!(b.n(), 1);
        assert_eq!(parse_diagram(&emit_table(&b), Format::Table).unwrap(), b);
    }

    #[test]
    fn json_round_trip() {
        let b = example();
        let s = emit_diagram(&b, Format::Json);
        assert_eq!(parse_diagram(&s, Format::Json).unwrap(), b);
        let z = parse_diagram(r#"{"n": 2, "entries": []}"#, Format::Json).unwrap();
        assert!(z.is_zero());
        let mixed = parse_diagram(r#"{"n": 1, "entries": [{"i": 0, "j": 0, "value": 2}, {"i": 1, "j": 1, "value": "-3/6"}]}"#, Format::Json).unwrap();
        assert_eq!(mixed.get(1, 1), Rational::new((-1).into(), 2.into()));
        assert_eq!(mixed.get(0, 0), int(2));
    }

    #[test]
    fn errors() {
        let dup = r#"{"n": 1, "entries": [{"i": 0, "j": 0, "value": "1"}, {"i": 0, "j": 0, "value": "2"}]}"#;
        assert_eq!(parse_diagram(dup, Format::Json), Err(IoError::DuplicateEntry { i: 0, j: 0 }));
        let range = r#"{"n": 1, "entries": [{"i": 2, "j": 0, "value": "1"}]}"#;
        assert_eq!(parse_diagram(range, Format::Json), Err(IoError::Index { i: 2, n: 1 }));
        assert!(matches!(parse_diagram("{\"n\": 1,", Format::Json), Err(IoError::Parse { .. })));
        match parse_diagram("0: 1 x\n", Format::Table) {
            Err(IoError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_diagram("n: 1\n0: 1 2 3\n", Format::Table), Err(IoError::Index { .. })));
        assert!(matches!(parse_diagram("0 1 2\n", Format::Table), Err(IoError::Parse { .. })));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("1.5").is_none());
    }

    #[test]
    fn tableau_formats() {
        let plain = parse_tableau("5 3 1\n6 4 2\n").unwrap();
        let json = parse_tableau(r#"{"rows": [[5,3,1],[6,4,2]], "M": 0, "s": 0}"#).unwrap();
        assert_eq!(plain.tableau, json.tableau);
        assert_eq!((json.low, json.min_codim), (Some(0), Some(0)));
        assert!(parse_tableau("1 2\n3 4\n").is_err());
    }

    #[test]
    fn empty_list_json() {
        let empty: Vec<Value> = Vec::new();
        assert_eq!(emit_report(&empty), "[]\n");
    }
}
