use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bits::Bits;
use crate::error::{invalid, Error, Result};
use crate::rational::{pow2, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Plain complexity `C`.
    Plain,
    /// Prefix complexity `K`.
    Prefix,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Plain => "plain",
            ModelKind::Prefix => "prefix",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(ModelKind::Plain),
            "prefix" => Ok(ModelKind::Prefix),
            _ => Err(invalid(format!("unknown model kind {s:?}"))),
        }
    }
}

/// Provenance recorded in a table header.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableMeta {
    pub machine_id: String,
    pub max_program_length: Option<usize>,
    pub step_budget: Option<u64>,
}

impl Default for TableMeta {
    fn default() -> Self {
        TableMeta {
            machine_id: "manual".to_string(),
            max_program_length: None,
            step_budget: None,
        }
    }
}

/// Complexity values for every string of length at most `n_max`.
/// `None` is UNDEFINED.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    kind: ModelKind,
    n_max: usize,
    meta: TableMeta,
    entries: BTreeMap<Bits, Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingViolation {
    pub m: u32,
    /// `|{x : C(x) < m}|`, which should be below `2^m`.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub kind: ModelKind,
    pub passed: bool,
    pub defined_entries: usize,
    pub counting_violations: Vec<CountingViolation>,
    /// Exact `Σ 2^{-K(x)}` for prefix tables.
    pub kraft_sum: Option<Rational>,
}

impl ComplexityTable {
    /// Strings of length `≤ n_max` that are not listed become UNDEFINED.
    pub fn new(
        kind: ModelKind,
        n_max: usize,
        meta: TableMeta,
        listed: impl IntoIterator<Item = (Bits, Option<u32>)>,
    ) -> Result<Self> {
        if n_max > 24 {
            return Err(Error::Resource(format!("n_max {n_max} exceeds 24")));
        }
        let mut entries: BTreeMap<Bits, Option<u32>> = Bits::all_up_to(n_max).map(|x| (x, None)).collect();
        for (x, v) in listed {
            match entries.get_mut(&x) {
                Some(slot) => *slot = v,
                None => return Err(invalid(format!("string {x:?} is longer than n_max = {n_max}"))),
            }
        }
        Ok(ComplexityTable {
            kind,
            n_max,
            meta,
            entries,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    pub fn entries(&self) -> &BTreeMap<Bits, Option<u32>> {
        &self.entries
    }

    /// Lookup; strings longer than `n_max` are outside the table.
    pub fn get(&self, x: &Bits) -> Result<Option<u32>> {
        self.entries
            .get(x)
            .copied()
            .ok_or_else(|| Error::Domain(format!("{x:?} is not in the table (n_max = {})", self.n_max)))
    }

    pub fn defined(&self) -> impl Iterator<Item = (&Bits, u32)> {
        self.entries.iter().filter_map(|(x, v)| v.map(|v| (x, v)))
    }

    /// Counting bound `|{x : v(x) < m}| < 2^m` for every `m`.
    pub fn counting_violations(&self) -> Vec<CountingViolation> {
        let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
        for (_, v) in self.defined() {
            *hist.entry(v).or_default() += 1;
        }
        let Some(&max) = hist.keys().next_back() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for m in 0..=max.saturating_add(1) {
            let count: usize = hist.range(..m).map(|(_, c)| c).sum();
            let bound = BigInt::one() << m;
            if BigInt::from(count) >= bound {
                out.push(CountingViolation { m, count });
            }
        }
        out
    }

    /// `Σ_x 2^{-v(x)}` over defined entries.
    pub fn kraft_sum(&self) -> Rational {
        self.defined()
            .fold(Rational::zero(), |acc, (_, v)| acc + pow2(-(v as i64)))
    }

    pub fn validate(&self) -> ValidationReport {
        let defined_entries = self.defined().count();
        match self.kind {
            ModelKind::Plain => {
                let counting_violations = self.counting_violations();
                ValidationReport {
                    kind: self.kind,
                    passed: counting_violations.is_empty(),
                    defined_entries,
                    counting_violations,
                    kraft_sum: None,
                }
            }
            ModelKind::Prefix => {
                let kraft = self.kraft_sum();
                ValidationReport {
                    kind: self.kind,
                    passed: kraft <= Rational::one(),
                    defined_entries,
                    counting_violations: Vec::new(),
                    kraft_sum: Some(kraft),
                }
            }
        }
    }

    /// SHA-256 of the canonical table body, hex encoded.
    pub fn digest(&self) -> String {
        crate::format::table_digest(self)
    }
}

/// A plain complexity table `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainModel(ComplexityTable);

/// A prefix complexity table `K`, source of `m(x) = 2^{-K(x)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixModel(ComplexityTable);

impl PlainModel {
    pub fn new(table: ComplexityTable) -> Result<Self> {
        if table.kind != ModelKind::Plain {
            return Err(invalid("expected a plain complexity table"));
        }
        Ok(PlainModel(table))
    }

    pub fn table(&self) -> &ComplexityTable {
        &self.0
    }

    pub fn get(&self, x: &Bits) -> Result<Option<u32>> {
        self.0.get(x)
    }

    pub fn validate(&self) -> ValidationReport {
        self.0.validate()
    }
}

impl PrefixModel {
    pub fn new(table: ComplexityTable) -> Result<Self> {
        if table.kind != ModelKind::Prefix {
            return Err(invalid("expected a prefix complexity table"));
        }
        Ok(PrefixModel(table))
    }

    pub fn table(&self) -> &ComplexityTable {
        &self.0
    }

    pub fn get(&self, x: &Bits) -> Result<Option<u32>> {
        self.0.get(x)
    }

    pub fn validate(&self) -> ValidationReport {
        self.0.validate()
    }

    /// `m(x) = 2^{-K(x)}`, zero where `K` is undefined.
    pub fn semimeasure(&self, x: &Bits) -> Result<Rational> {
        Ok(match self.0.get(x)? {
            Some(k) => pow2(-(k as i64)),
            None => Rational::zero(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rational::{int, ratio};

    fn table(kind: ModelKind, n_max: usize, xs: &[(&str, Option<u32>)]) -> ComplexityTable {
        ComplexityTable::new(kind, n_max, TableMeta::default(), xs.iter().map(|(x, v)| (bits(x), *v))).unwrap()
    }

    #[test]
    fn singleton_plain_table_passes() {
        let t = table(ModelKind::Plain, 0, &[("", Some(0))]);
        let r = t.validate();
        assert!(r.passed);
        assert_eq!(r.defined_entries, 1);
    }

    #[test]
    fn duplicate_zero_complexity_fails_at_one() {
        let t = table(ModelKind::Plain, 1, &[("0", Some(0)), ("1", Some(0))]);
        let r = t.validate();
        assert!(!r.passed);
        assert_eq!(r.counting_violations[0], CountingViolation { m: 1, count: 2 });
    }

    #[test]
    fn geometric_prefix_table_kraft_sum() {
        let listed: Vec<(Bits, Option<u32>)> =
            Bits::all_up_to(6).map(|x| { let k = 2 * x.len() as u32 + 1; (x, Some(k)) }).collect();
        let t = ComplexityTable::new(ModelKind::Prefix, 6, TableMeta::default(), listed).unwrap();
        let r = t.validate();
        // (1/2) Σ_{n≤6} 2^{-n}, summed independently.
        let expected = (0..=6).fold(int(0), |acc, n| acc + ratio(1, 2) * pow2(-n));
        assert_eq!(r.kraft_sum, Some(expected.clone()));
        assert_eq!(expected, ratio(127, 128));
        assert!(r.passed);
    }

    #[test]
    fn semimeasure_lookups() {
        let t = table(ModelKind::Prefix, 2, &[("01", Some(3))]);
        let m = PrefixModel::new(t).unwrap();
        assert_eq!(m.semimeasure(&bits("01")).unwrap(), ratio(1, 8));
        assert_eq!(m.semimeasure(&bits("1")).unwrap(), int(0));
        assert!(matches!(m.semimeasure(&bits("011")), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_overlong_entries_and_wrong_kind() {
        assert!(ComplexityTable::new(ModelKind::Plain, 1, TableMeta::default(), [(bits("00"), Some(1))]).is_err());
        let t = table(ModelKind::Plain, 0, &[]);
        assert!(PrefixModel::new(t).is_err());
    }
}
