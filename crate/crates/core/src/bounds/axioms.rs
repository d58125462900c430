//! Line-oriented data files: quoted results (`AxiomSet`) and reference tables.
//!
//! Axiom lines read `a b kind value # citation`, where `kind` is `upper`, `exact`
//! or `regular` (value `inf`). Reference lines read `a b lower upper`, optionally
//! followed by the word `known` to acknowledge an expected mismatch. Blank lines
//! and lines starting with `#` are skipped.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Dor;
use crate::error::{Error, Result};

/// Axiom set shipped with the crate: quoted bounds the engine cannot derive.
pub const SHIPPED_AXIOMS: &str = include_str!("../../data/axioms-v1.txt");

/// Reference table the engine output is compared against.
pub const SHIPPED_REFERENCE: &str = include_str!("../../data/reference-table.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxiomKind {
    Upper,
    Exact,
    Regular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub a: u32,
    pub b: u32,
    pub kind: AxiomKind,
    /// `None` for `Regular`.
    pub value: Option<u32>,
    pub citation: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSet {
    axioms: Vec<Axiom>,
}

impl AxiomSet {
    pub fn empty() -> Self {
        AxiomSet::default()
    }

    pub fn shipped() -> Self {
        SHIPPED_AXIOMS
            .parse()
            .expect("shipped axiom file is well-formed")
    }

    pub fn iter(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn for_family(&self, a: u32, b: u32) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(move |ax| ax.a == a && ax.b == b)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_u32(tok: Option<&str>, what: &str, line: usize) -> Result<u32> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn check_family(a: u32, b: u32, line: usize) -> Result<()> {
    if a == 0 || a > b {
        return Err(parse_err(line, format!("need 1 <= a <= b, got ({a},{b})")));
    }
    Ok(())
}

impl FromStr for AxiomSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut axioms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let (body, citation) = match raw.split_once('#') {
                Some((body, cite)) => (body, cite.trim()),
                None => (raw, ""),
            };
            let mut toks = body.split_whitespace();
            let Some(first) = toks.next() else { continue };
            let a = parse_u32(Some(first), "a", line)?;
            let b = parse_u32(toks.next(), "b", line)?;
            check_family(a, b, line)?;
            let kind = match toks.next() {
                Some("upper") => AxiomKind::Upper,
                Some("exact") => AxiomKind::Exact,
                Some("regular") => AxiomKind::Regular,
                Some(other) => return Err(parse_err(line, format!("unknown kind `{other}`"))),
                None => return Err(parse_err(line, "missing kind")),
            };
            let value = match kind {
                AxiomKind::Regular => match toks.next() {
                    Some("inf") => None,
                    _ => return Err(parse_err(line, "regular axioms take the value `inf`")),
                },
                _ => {
                    let v = parse_u32(toks.next(), "value", line)?;
                    if v == 0 {
                        return Err(parse_err(line, "degree of regularity is at least 1"));
                    }
                    Some(v)
                }
            };
            if let Some(extra) = toks.next() {
                return Err(parse_err(line, format!("unexpected `{extra}`")));
            }
            if citation.is_empty() {
                return Err(parse_err(line, "axioms need a citation after `#`"));
            }
            axioms.push(Axiom {
                a,
                b,
                kind,
                value,
                // `;` separates provenance tags in table output.
                citation: citation.replace(';', ","),
            });
        }
        Ok(AxiomSet { axioms })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub a: u32,
    pub b: u32,
    pub lower: Dor,
    pub upper: Dor,
    /// A mismatch on this row is expected and documented.
    pub known_mismatch: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTable {
    entries: Vec<ReferenceEntry>,
}

impl ReferenceTable {
    pub fn shipped() -> Self {
        SHIPPED_REFERENCE
            .parse()
            .expect("shipped reference table is well-formed")
    }

    pub fn get(&self, a: u32, b: u32) -> Option<&ReferenceEntry> {
        self.entries.iter().find(|e| e.a == a && e.b == b)
    }

    pub fn entries(&self) -> &[ReferenceEntry] {
        &self.entries
    }
}

fn parse_dor(tok: Option<&str>, what: &str, line: usize) -> Result<Dor> {
    match tok {
        Some("inf") => Ok(Dor::Infinite),
        other => parse_u32(other, what, line).map(Dor::Finite),
    }
}

impl FromStr for ReferenceTable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let mut toks = body.split_whitespace();
            let Some(first) = toks.next() else { continue };
            let a = parse_u32(Some(first), "a", line)?;
            let b = parse_u32(toks.next(), "b", line)?;
            check_family(a, b, line)?;
            let lower = parse_dor(toks.next(), "lower", line)?;
            let upper = parse_dor(toks.next(), "upper", line)?;
            let known_mismatch = match toks.next() {
                None => false,
                Some("known") => true,
                Some(other) => return Err(parse_err(line, format!("unexpected `{other}`"))),
            };
            entries.push(ReferenceEntry {
                a,
                b,
                lower,
                upper,
                known_mismatch,
            });
        }
        Ok(ReferenceTable { entries })
    }
}
