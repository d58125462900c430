//! Bounds on the degree of regularity `dor(a,b)` with provenance.
//!
//! Upper bounds come from the block-coloring criteria, the logarithmic bound,
//! `dor(a,2a) = 1`, quoted axioms and the shift closure `dor(a+i, b+2i) <= dor(a,b)`.
//! Lower bounds come from axioms and from actually computing `n(a,b;r)`.

pub mod axioms;
pub mod criteria;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coloring::{verify_coloring, Coloring, Verdict};
use crate::colorings::{gamma_prefix, GammaParams};
use crate::error::{Error, Result};
use crate::solver::{find_n, FindN, SearchConfig};
use crate::triple::FamilyParams;

pub use axioms::{Axiom, AxiomKind, AxiomSet, ReferenceEntry, ReferenceTable};
pub use criteria::{lemma2_upper, rule1_exact, theorem2_upper, theorem3_upper};

/// A degree of regularity: finite, or infinite for regular families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dor {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Dor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dor::Finite(v) => write!(f, "{v}"),
            Dor::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Dor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dor::Finite(v) => s.serialize_u32(*v),
            Dor::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Dor::Finite(v)),
            Raw::Text(t) if t == "inf" => Ok(Dor::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad dor `{t}`"))),
        }
    }
}

/// Why a bound holds. Variant order is the display order among tied sources.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Justification {
    Theorem2 {
        c: u32,
    },
    Theorem3 {
        c: u32,
    },
    Lemma2,
    Rule1,
    /// Inherited from `(a, b)` through the shift `(a, b) -> (a + i, b + 2i)`.
    Lemma1 {
        a: u32,
        b: u32,
    },
    Axiom {
        citation: String,
    },
    Search {
        r: u32,
        n: u32,
    },
    Regular {
        citation: String,
    },
    /// `n(a,b;1) = b + 2` is finite, so every family is 1-regular.
    OneColor,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Theorem2 { c } => write!(f, "theorem2(c={c})"),
            Justification::Theorem3 { c } => write!(f, "theorem3(c={c})"),
            Justification::Lemma2 => f.write_str("lemma2"),
            Justification::Rule1 => f.write_str("rule1"),
            Justification::Lemma1 { a, b } => write!(f, "lemma1(from=({a},{b}))"),
            Justification::Axiom { citation } => write!(f, "axiom({citation})"),
            Justification::Search { r, n } => write!(f, "search(r={r},n={n})"),
            Justification::Regular { citation } => write!(f, "regular({citation})"),
            Justification::OneColor => f.write_str("one-color"),
        }
    }
}

impl FromStr for Justification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("bad justification `{s}`"),
        };
        let num = |v: &str| v.parse::<u32>().map_err(|_| bad());
        match s {
            "lemma2" => return Ok(Justification::Lemma2),
            "rule1" => return Ok(Justification::Rule1),
            "one-color" => return Ok(Justification::OneColor),
            _ => {}
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        match head {
            "theorem2" => Ok(Justification::Theorem2 {
                c: num(inner.strip_prefix("c=").ok_or_else(bad)?)?,
            }),
            "theorem3" => Ok(Justification::Theorem3 {
                c: num(inner.strip_prefix("c=").ok_or_else(bad)?)?,
            }),
            "lemma1" => {
                let pair = inner
                    .strip_prefix("from=(")
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let (a, b) = pair.split_once(',').ok_or_else(bad)?;
                Ok(Justification::Lemma1 {
                    a: num(a)?,
                    b: num(b)?,
                })
            }
            "search" => {
                let (r, n) = inner.split_once(',').ok_or_else(bad)?;
                Ok(Justification::Search {
                    r: num(r.strip_prefix("r=").ok_or_else(bad)?)?,
                    n: num(n.strip_prefix("n=").ok_or_else(bad)?)?,
                })
            }
            "axiom" => Ok(Justification::Axiom {
                citation: inner.to_string(),
            }),
            "regular" => Ok(Justification::Regular {
                citation: inner.to_string(),
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Justification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Justification {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub a: u32,
    pub b: u32,
    pub lower: Dor,
    /// `None` when no implemented source bounds `dor(a,b)` from above.
    pub upper: Option<Dor>,
    pub lower_provenance: Vec<Justification>,
    pub upper_provenance: Vec<Justification>,
    pub flags: Vec<String>,
}

impl BoundRecord {
    fn blank(a: u32, b: u32) -> Self {
        BoundRecord {
            a,
            b,
            lower: Dor::Finite(1),
            upper: None,
            lower_provenance: vec![Justification::OneColor],
            upper_provenance: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn family(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }

    fn offer_upper(&mut self, value: Dor, why: Justification) {
        match self.upper {
            Some(current) if value > current => {}
            Some(current) if value == current => {
                if !self.upper_provenance.contains(&why) {
                    self.upper_provenance.push(why);
                    self.upper_provenance.sort();
                }
            }
            _ => {
                self.upper = Some(value);
                self.upper_provenance = vec![why];
            }
        }
    }

    fn offer_lower(&mut self, value: Dor, why: Justification) {
        if value < self.lower {
            return;
        }
        if value > self.lower {
            self.lower = value;
            self.lower_provenance.clear();
        }
        if !self.lower_provenance.contains(&why) {
            self.lower_provenance.push(why);
            self.lower_provenance.sort();
        }
    }

    fn check_consistent(&self) -> Result<()> {
        match self.upper {
            Some(upper) if self.lower > upper => Err(Error::InconsistentBounds {
                a: self.a,
                b: self.b,
                lower: self.lower.to_string(),
                upper: upper.to_string(),
            }),
            _ => Ok(()),
        }
    }
}

/// Source of `n(a,b;r)` values for the lower-bound pass.
pub trait NumberOracle: Sync {
    fn find_n(&self, params: FamilyParams, r: u32) -> Result<FindN>;
}

/// Runs the solver directly.
pub struct LiveSearch {
    pub config: SearchConfig,
}

impl NumberOracle for LiveSearch {
    fn find_n(&self, params: FamilyParams, r: u32) -> Result<FindN> {
        find_n(params, r, &self.config)
    }
}

/// Tries `r = 2, 3, ..., max_r`, stopping at the first `r` above the proven upper
/// bound or the first `r` without a finite `n(a,b;r)`.
pub struct SearchPlan<'a> {
    pub max_r: u32,
    pub oracle: &'a dyn NumberOracle,
}

#[derive(Default)]
pub struct TableOptions<'a> {
    pub search: Option<SearchPlan<'a>>,
    pub reference: Option<&'a ReferenceTable>,
    /// Re-checks every block-coloring source on `[1, n]` and flags the record
    /// when the coloring contains a monochromatic triple.
    pub audit_n: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// A disagreement between the engine and a reference table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub a: u32,
    pub b: u32,
    pub side: BoundSide,
    pub engine: Option<Dor>,
    pub reference: Dor,
    pub known: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub records: Vec<BoundRecord>,
    pub mismatches: Vec<Mismatch>,
}

impl Table {
    pub fn get(&self, a: u32, b: u32) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.a == a && r.b == b)
    }

    pub fn unacknowledged(&self) -> impl Iterator<Item = &Mismatch> {
        self.mismatches.iter().filter(|m| !m.known)
    }
}

/// Bounds that need no search, for one family.
fn direct_bounds(a: u32, b: u32, axioms: &AxiomSet) -> BoundRecord {
    let mut rec = BoundRecord::blank(a, b);
    if let Some((c, u)) = criteria::best_theorem2(a, b) {
        rec.offer_upper(Dor::Finite(u), Justification::Theorem2 { c });
    }
    if a == 1 {
        if let Some((c, u)) = criteria::best_theorem3(b) {
            rec.offer_upper(Dor::Finite(u), Justification::Theorem3 { c });
        }
    }
    if let Some(u) = lemma2_upper(a, b) {
        rec.offer_upper(Dor::Finite(u), Justification::Lemma2);
    }
    if let Some(v) = rule1_exact(a, b) {
        rec.offer_upper(Dor::Finite(v), Justification::Rule1);
        rec.offer_lower(Dor::Finite(v), Justification::Rule1);
    }
    for ax in axioms.for_family(a, b) {
        let why = Justification::Axiom {
            citation: ax.citation.clone(),
        };
        match (ax.kind, ax.value) {
            (AxiomKind::Upper, Some(v)) => rec.offer_upper(Dor::Finite(v), why),
            (AxiomKind::Exact, Some(v)) => {
                rec.offer_upper(Dor::Finite(v), why.clone());
                rec.offer_lower(Dor::Finite(v), why);
            }
            (AxiomKind::Regular, _) => {
                let why = Justification::Regular {
                    citation: ax.citation.clone(),
                };
                rec.offer_upper(Dor::Infinite, why.clone());
                rec.offer_lower(Dor::Infinite, why);
            }
            _ => {}
        }
    }
    rec
}

/// Propagates finite upper bounds along `(a, b) -> (a + i, b + 2i)` to a fixpoint.
/// Returns the number of passes made.
fn close_in_place(records: &mut BTreeMap<(u32, u32), BoundRecord>) -> usize {
    let keys: Vec<(u32, u32)> = records.keys().copied().collect();
    let mut passes = 0;
    loop {
        passes += 1;
        let mut changed = false;
        for &(a, b) in &keys {
            let Some(Dor::Finite(u)) = records[&(a, b)].upper else {
                continue;
            };
            for i in 1.. {
                let target = (a + i, b + 2 * i);
                let Some(rec) = records.get_mut(&target) else {
                    if target.0 > keys.last().map_or(0, |k| k.0) {
                        break;
                    }
                    continue;
                };
                let before = (rec.upper, rec.upper_provenance.len());
                rec.offer_upper(Dor::Finite(u), Justification::Lemma1 { a, b });
                changed |= before != (rec.upper, rec.upper_provenance.len());
            }
        }
        if !changed {
            return passes;
        }
    }
}

pub fn lemma1_closure(records: Vec<BoundRecord>) -> Vec<BoundRecord> {
    let mut map: BTreeMap<(u32, u32), BoundRecord> =
        records.into_iter().map(|r| (r.family(), r)).collect();
    close_in_place(&mut map);
    map.into_values().collect()
}

fn upper_map(a_max: u32, b_max: u32, axioms: &AxiomSet) -> BTreeMap<(u32, u32), BoundRecord> {
    let mut map = BTreeMap::new();
    for a in 1..=a_max {
        for b in a..=b_max {
            map.insert((a, b), direct_bounds(a, b, axioms));
        }
    }
    close_in_place(&mut map);
    map
}

fn search_lower(rec: &mut BoundRecord, plan: &SearchPlan<'_>) -> Result<()> {
    if rec.lower == Dor::Infinite {
        return Ok(());
    }
    let params = FamilyParams::new(rec.a, rec.b)?;
    for r in 2..=plan.max_r {
        if matches!(rec.upper, Some(Dor::Finite(u)) if r > u) {
            break;
        }
        match plan.oracle.find_n(params, r)? {
            FindN::Exact { n, .. } => {
                rec.offer_lower(Dor::Finite(r), Justification::Search { r, n });
            }
            FindN::LowerBoundOnly { lower, cutoff, .. } => {
                let why = if cutoff { "cutoff" } else { "max-n" };
                rec.flags.push(format!("search-{why}(r={r},n>{lower})"));
                break;
            }
        }
    }
    Ok(())
}

fn compare(rec: &mut BoundRecord, reference: &ReferenceTable, out: &mut Vec<Mismatch>) {
    let Some(entry) = reference.get(rec.a, rec.b) else {
        return;
    };
    let sides = [
        (BoundSide::Lower, Some(rec.lower), entry.lower),
        (BoundSide::Upper, rec.upper, entry.upper),
    ];
    for (side, engine, expected) in sides {
        if engine == Some(expected) {
            continue;
        }
        let name = match side {
            BoundSide::Lower => "lower",
            BoundSide::Upper => "upper",
        };
        let known = if entry.known_mismatch { ",known" } else { "" };
        rec.flags
            .push(format!("reference-{name}(expected={expected}{known})"));
        out.push(Mismatch {
            a: rec.a,
            b: rec.b,
            side,
            engine,
            reference: expected,
            known: entry.known_mismatch,
        });
    }
}

/// Flags each block-coloring source whose coloring fails on `[1, n]`.
fn audit(records: &mut [BoundRecord], n: u64) -> Result<()> {
    let mut colors: Vec<u32> = records
        .iter()
        .flat_map(|r| &r.upper_provenance)
        .filter_map(|j| match j {
            Justification::Theorem2 { c } | Justification::Theorem3 { c } => Some(*c),
            _ => None,
        })
        .collect();
    colors.sort_unstable();
    colors.dedup();
    let prefixes: BTreeMap<u32, Coloring> = colors
        .into_iter()
        .map(|c| Ok((c, gamma_prefix(GammaParams::new(c)?, n)?)))
        .collect::<Result<_>>()?;
    records.par_iter_mut().try_for_each(|rec| {
        let params = FamilyParams::new(rec.a, rec.b)?;
        let mut flags = Vec::new();
        for why in &rec.upper_provenance {
            let (Justification::Theorem2 { c } | Justification::Theorem3 { c }) = why else {
                continue;
            };
            if let Verdict::Violation(t) = verify_coloring(params, &prefixes[c]) {
                flags.push(format!("refuted({why},x={},y={},z={})", t.x, t.y, t.z));
            }
        }
        rec.flags.extend(flags);
        Ok(())
    })
}

/// Order of the published table: rows of constant `b - a`, then by `a`.
fn row_key(rec: &BoundRecord) -> (u32, u32) {
    (rec.b - rec.a, rec.a)
}

/// All families with `a <= a_max` and `a <= b <= b_max`.
pub fn generate_table(
    a_max: u32,
    b_max: u32,
    axioms: &AxiomSet,
    opts: &TableOptions<'_>,
) -> Result<Table> {
    let mut records: Vec<BoundRecord> = upper_map(a_max, b_max, axioms).into_values().collect();
    if let Some(plan) = &opts.search {
        records
            .par_iter_mut()
            .try_for_each(|rec| search_lower(rec, plan))?;
    }
    if let Some(n) = opts.audit_n {
        audit(&mut records, n)?;
    }
    let mut mismatches = Vec::new();
    for rec in &mut records {
        if rec.upper.is_none() {
            rec.flags.push("upper-unknown".to_string());
        }
        rec.check_consistent()?;
        if let Some(reference) = opts.reference {
            compare(rec, reference, &mut mismatches);
        }
    }
    records.sort_by_key(row_key);
    mismatches.sort_by_key(|m| (m.b - m.a, m.a));
    Ok(Table {
        records,
        mismatches,
    })
}

/// Best known bounds for one family. Upper bounds are inherited from every
/// family `(a - i, b - 2i)`; only `(a, b)` itself is searched.
pub fn best_bounds(
    a: u32,
    b: u32,
    axioms: &AxiomSet,
    search: Option<&SearchPlan<'_>>,
) -> Result<BoundRecord> {
    FamilyParams::new(a, b)?;
    let mut rec = upper_map(a, b, axioms)
        .remove(&(a, b))
        .expect("target lies in its own ancestor range");
    if let Some(plan) = search {
        search_lower(&mut rec, plan)?;
    }
    if rec.upper.is_none() {
        rec.flags.push("upper-unknown".to_string());
    }
    rec.check_consistent()?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upper(rec: &BoundRecord) -> Option<Dor> {
        rec.upper
    }

    #[test]
    fn closure_examples() {
        let mut ax: AxiomSet = "1 3 upper 3 # q".parse().unwrap();
        let t = generate_table(3, 7, &ax, &TableOptions::default()).unwrap();
        assert_eq!(upper(t.get(2, 5).unwrap()), Some(Dor::Finite(3)));
        assert!(t
            .get(2, 5)
            .unwrap()
            .upper_provenance
            .contains(&Justification::Lemma1 { a: 1, b: 3 }));
        assert_eq!(upper(t.get(3, 7).unwrap()), Some(Dor::Finite(3)));

        ax = "2 3 exact 2 # q".parse().unwrap();
        let t = generate_table(3, 5, &ax, &TableOptions::default()).unwrap();
        assert_eq!(upper(t.get(3, 5).unwrap()), Some(Dor::Finite(2)));

        let t = generate_table(2, 9, &AxiomSet::empty(), &TableOptions::default()).unwrap();
        let rec = t.get(2, 9).unwrap();
        assert_eq!(rec.upper, Some(Dor::Finite(4)));
        assert!(rec
            .upper_provenance
            .contains(&Justification::Lemma1 { a: 1, b: 7 }));
    }

    #[test]
    fn closure_passes_and_soundness() {
        let mut map = upper_map(4, 12, &AxiomSet::shipped());
        let before: BTreeMap<_, _> = map.iter().map(|(k, r)| (*k, r.upper)).collect();
        let passes = close_in_place(&mut map);
        // Already closed: one confirming pass.
        assert_eq!(passes, 1);
        for (k, r) in &map {
            assert_eq!(r.upper, before[k]);
        }

        let raw: Vec<BoundRecord> = (1..=4)
            .flat_map(|a| (a..=12).map(move |b| (a, b)))
            .map(|(a, b)| direct_bounds(a, b, &AxiomSet::shipped()))
            .collect();
        let mut raw_map: BTreeMap<_, _> = raw.iter().map(|r| (r.family(), r.clone())).collect();
        let passes = close_in_place(&mut raw_map);
        assert!(passes <= 12, "passes = {passes}");
        for r in &raw {
            let closed = &raw_map[&r.family()];
            // Never raised, and never below any contributing source.
            assert!(closed.upper <= r.upper || r.upper.is_none());
            for why in &closed.upper_provenance {
                if let Justification::Lemma1 { a, b } = why {
                    assert_eq!(raw_map[&(*a, *b)].upper, closed.upper);
                }
            }
        }
    }

    #[test]
    fn exact_rule1() {
        let rec = best_bounds(1, 2, &AxiomSet::empty(), None).unwrap();
        assert_eq!(rec.lower, Dor::Finite(1));
        assert_eq!(rec.upper, Some(Dor::Finite(1)));
        assert!(rec.is_exact());
    }

    #[test]
    fn axiom_lemma1_for_three_eight() {
        let ax: AxiomSet = "2 6 upper 3 # q".parse().unwrap();
        let rec = best_bounds(3, 8, &ax, None).unwrap();
        assert_eq!(rec.upper, Some(Dor::Finite(3)));
        assert_eq!(
            rec.upper_provenance,
            vec![Justification::Lemma1 { a: 2, b: 6 }]
        );
    }

    #[test]
    fn empty_axioms_one_four() {
        let rec = best_bounds(1, 4, &AxiomSet::empty(), None).unwrap();
        assert_eq!(rec.lower, Dor::Finite(1));
        assert_eq!(rec.upper, Some(Dor::Finite(4)));
        assert!(rec.upper_provenance.contains(&Justification::Lemma2));
    }

    #[test]
    fn false_axiom_is_inconsistent() {
        let ax: AxiomSet = "1 2 exact 3 # wrong".parse().unwrap();
        assert!(matches!(
            best_bounds(1, 2, &ax, None),
            Err(Error::InconsistentBounds { a: 1, b: 2, .. })
        ));
    }

    #[test]
    fn justification_round_trip() {
        let all = [
            Justification::Theorem2 { c: 5 },
            Justification::Theorem3 { c: 6 },
            Justification::Lemma2,
            Justification::Rule1,
            Justification::Lemma1 { a: 2, b: 2 },
            Justification::Axiom {
                citation: "Discrete Math. 256 (2002), 279".into(),
            },
            Justification::Search { r: 3, n: 88 },
            Justification::Regular {
                citation: "vdW (1927)".into(),
            },
            Justification::OneColor,
        ];
        for j in all {
            assert_eq!(j.to_string().parse::<Justification>().unwrap(), j);
        }
        assert!("theorem9(c=1)".parse::<Justification>().is_err());
    }

    #[test]
    fn audit_flags_refuted_block_colorings() {
        let opts = TableOptions {
            audit_n: Some(1000),
            ..TableOptions::default()
        };
        let t = generate_table(2, 7, &AxiomSet::empty(), &opts).unwrap();
        assert_eq!(
            t.get(1, 7).unwrap().flags,
            vec!["refuted(theorem3(c=5),x=25,y=26,z=177)".to_string()]
        );
        assert!(t.get(2, 2).unwrap().flags.is_empty());
        assert!(t.get(1, 6).unwrap().flags.is_empty());
    }

    #[test]
    fn row_order() {
        let t = generate_table(3, 5, &AxiomSet::empty(), &TableOptions::default()).unwrap();
        let order: Vec<_> = t.records.iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(
            &order[..6],
            &[(1, 1), (2, 2), (3, 3), (1, 2), (2, 3), (3, 4)]
        );
    }
}
