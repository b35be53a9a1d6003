use super::table::{ComplexityTable, PlainModel, PrefixModel};
use crate::bits::Bits;

/// Result of one table lookup inside a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    Value(u32),
    Undefined,
    /// The key is longer than the table's `n_max`.
    Missing,
}

impl Lookup {
    fn of(table: &ComplexityTable, x: &Bits) -> Lookup {
        match table.get(x) {
            Ok(Some(v)) => Lookup::Value(v),
            Ok(None) => Lookup::Undefined,
            Err(_) => Lookup::Missing,
        }
    }

    pub fn value(self) -> Option<u32> {
        match self {
            Lookup::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub n: usize,
    pub plain: Lookup,
    pub prefix: Lookup,
    /// `K(n)` with `n` written in binary.
    pub prefix_of_n: Lookup,
    /// `n - C(x_1..x_n)`.
    pub plain_gap: Option<i64>,
    /// `n + K(n) - K(x_1..x_n)`.
    pub prefix_gap: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub rows: Vec<ProfileRow>,
    /// Running minima of the defined gaps, one entry per row.
    pub plain_running_min: Vec<Option<i64>>,
    pub prefix_running_min: Vec<Option<i64>>,
}

fn running_min(gaps: impl Iterator<Item = Option<i64>>) -> Vec<Option<i64>> {
    gaps.scan(None::<i64>, |acc, g| {
        if let Some(g) = g {
            *acc = Some(acc.map_or(g, |a| a.min(g)));
        }
        Some(*acc)
    })
    .collect()
}

pub fn profile(plain: &PlainModel, prefix: &PrefixModel, x: &Bits) -> Profile {
    let rows: Vec<ProfileRow> = (1..=x.len())
        .map(|n| {
            let head = x.prefix(n);
            let c = Lookup::of(plain.table(), &head);
            let k = Lookup::of(prefix.table(), &head);
            let kn = Lookup::of(prefix.table(), &Bits::binary(n as u64));
            let plain_gap = c.value().map(|c| n as i64 - c as i64);
            let prefix_gap = match (k.value(), kn.value()) {
                (Some(k), Some(kn)) => Some(n as i64 + kn as i64 - k as i64),
                _ => None,
            };
            ProfileRow {
                n,
                plain: c,
                prefix: k,
                prefix_of_n: kn,
                plain_gap,
                prefix_gap,
            }
        })
        .collect();
    Profile {
        plain_running_min: running_min(rows.iter().map(|r| r.plain_gap)),
        prefix_running_min: running_min(rows.iter().map(|r| r.prefix_gap)),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::complexity::{ModelKind, TableMeta};

    fn models(n_max: usize, c: impl Fn(&Bits) -> Option<u32>, k: impl Fn(&Bits) -> Option<u32>) -> (PlainModel, PrefixModel) {
        let p = ComplexityTable::new(ModelKind::Plain, n_max, TableMeta::default(), Bits::all_up_to(n_max).map(|x| { let v = c(&x); (x, v) })).unwrap();
        let q = ComplexityTable::new(ModelKind::Prefix, n_max, TableMeta::default(), Bits::all_up_to(n_max).map(|x| { let v = k(&x); (x, v) })).unwrap();
        (PlainModel::new(p).unwrap(), PrefixModel::new(q).unwrap())
    }

    #[test]
    fn empty_string_has_empty_profile() {
        let (c, k) = models(2, |_| Some(1), |_| Some(1));
        let p = profile(&c, &k, &Bits::new());
        assert!(p.rows.is_empty() && p.plain_running_min.is_empty());
    }

    #[test]
    fn incompressible_plain_gives_zero_gaps() {
        let (c, k) = models(4, |x| Some(x.len() as u32), |x| Some(2 * x.len() as u32 + 1));
        let p = profile(&c, &k, &bits("0110"));
        assert!(p.rows.iter().all(|r| r.plain_gap == Some(0)));
        // n + K(n) - K(x) = n + (2|bin n| + 1) - (2n + 1)
        let expected: Vec<i64> = (1..=4i64)
            .map(|n| { let b = 64 - (n as u64).leading_zeros() as i64; n + 2 * b - 2 * n })
            .collect();
        assert_eq!(p.rows.iter().map(|r| r.prefix_gap.unwrap()).collect::<Vec<_>>(), expected);
        assert_eq!(p.prefix_running_min.last().unwrap(), &expected.iter().copied().min());
    }

    #[test]
    fn missing_and_undefined_are_flagged() {
        let (c, k) = models(2, |x| (x.len() != 1).then_some(3), |_| None);
        let p = profile(&c, &k, &bits("011"));
        assert_eq!(p.rows[0].plain, Lookup::Undefined);
        assert_eq!(p.rows[1].plain_gap, Some(-1));
        assert_eq!(p.rows[2].plain, Lookup::Missing);
        assert_eq!(p.plain_running_min, vec![None, Some(-1), Some(-1)]);
        assert!(p.rows.iter().all(|r| r.prefix_gap.is_none()));
    }
}
