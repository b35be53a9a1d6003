use crate::bits::Bits;
use crate::measure::LazyPoint;
use crate::rational::{pow2, Rational};
use num_traits::Zero;

/// `P(xΩ) = 2^{-|x|}`.
pub fn cylinder_measure(c: &Bits) -> Rational {
    pow2(-(c.len() as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
}

/// A finite union of cylinders.
///
/// Canonical form: sorted, no member is a prefix of another, and no two
/// siblings `x0`, `x1` are both present (they are merged into `x`). Two
/// open sets are equal as sets iff their canonical forms are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OpenSet {
    cylinders: Vec<Bits>,
}

impl OpenSet {
    pub fn empty() -> Self {
        OpenSet::default()
    }

    /// All of `Ω`.
    pub fn full() -> Self {
        OpenSet {
            cylinders: vec![Bits::new()],
        }
    }

    pub fn cylinder(prefix: Bits) -> Self {
        OpenSet {
            cylinders: vec![prefix],
        }
    }

    pub fn from_cylinders(cylinders: impl IntoIterator<Item = Bits>) -> Self {
        let mut v: Vec<Bits> = cylinders.into_iter().collect();
        v.sort();
        v.dedup();
        let mut out: Vec<Bits> = Vec::with_capacity(v.len());
        for c in v {
            if out.last().is_some_and(|p| p.is_prefix_of(&c)) {
                continue;
            }
            out.push(c);
            while out.len() >= 2 && Bits::are_siblings(&out[out.len() - 2], &out[out.len() - 1]) {
                let parent = out.pop().and_then(|c| c.parent()).expect("sibling has parent");
                out.pop();
                out.push(parent);
            }
        }
        OpenSet { cylinders: out }
    }

    pub fn cylinders(&self) -> &[Bits] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.cylinders.iter().map(Bits::len).max().unwrap_or(0)
    }

    pub fn measure(&self) -> Rational {
        self.cylinders
            .iter()
            .fold(Rational::zero(), |acc, c| acc + cylinder_measure(c))
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        OpenSet::from_cylinders(self.cylinders.iter().chain(&other.cylinders).cloned())
    }

    pub fn intersect(&self, other: &OpenSet) -> OpenSet {
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if a.is_prefix_of(b) {
                    out.push(b.clone());
                } else if b.is_prefix_of(a) {
                    out.push(a.clone());
                }
            }
        }
        OpenSet::from_cylinders(out)
    }

    pub fn apply(&self, op: SetOp, other: &OpenSet) -> OpenSet {
        match op {
            SetOp::Union => self.union(other),
            SetOp::Intersect => self.intersect(other),
        }
    }

    /// Whether the whole cylinder `xΩ` lies inside the set.
    pub fn contains_cylinder(&self, x: &Bits) -> bool {
        (0..=x.len()).any(|n| self.cylinders.binary_search(&x.prefix(n)).is_ok())
    }

    pub fn contains_point(&self, p: &LazyPoint) -> bool {
        self.contains_cylinder(&p.first(self.max_depth()))
    }

    pub fn is_subset_of(&self, other: &OpenSet) -> bool {
        self.cylinders.iter().all(|c| other.contains_cylinder(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rational::{int, ratio};

    fn set(xs: &[&str]) -> OpenSet {
        OpenSet::from_cylinders(xs.iter().map(|s| bits(s)))
    }

    #[test]
    fn cylinder_measures() {
        assert_eq!(cylinder_measure(&bits("")), int(1));
        assert_eq!(cylinder_measure(&bits("01")), ratio(1, 4));
        assert_eq!(cylinder_measure(&bits("0000000000")), ratio(1, 1024));
    }

    #[test]
    fn union_and_intersection_examples() {
        let u = set(&["0"]).union(&set(&["1"]));
        assert_eq!(u, OpenSet::full());
        assert_eq!(u.measure(), int(1));

        let i = set(&["0"]).intersect(&set(&["1"]));
        assert!(i.is_empty());
        assert_eq!(i.measure(), int(0));

        let a = set(&["00"]).apply(SetOp::Union, &set(&["0"]));
        assert_eq!(a, set(&["0"]));
        assert_eq!(a.measure(), ratio(1, 2));
    }

    #[test]
    fn canonical_merging_cascades() {
        let s = set(&["000", "001", "01", "1"]);
        assert_eq!(s, OpenSet::full());
        let s = set(&["010", "011", "00", "110"]);
        assert_eq!(s.cylinders(), &[bits("0"), bits("110")]);
    }

    #[test]
    fn containment() {
        let s = set(&["01", "1"]);
        assert!(s.contains_cylinder(&bits("011")));
        assert!(s.contains_cylinder(&bits("1")));
        assert!(!s.contains_cylinder(&bits("0")));
        assert!(set(&["011"]).is_subset_of(&s));
        assert!(!set(&["00"]).is_subset_of(&s));
    }
}
