use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::bits::Bits;
use crate::measure::cylinder_measure;
use crate::rational::Rational;

/// Disjoint, sorted, merged half-open intervals `[a, b)` with `0 ≤ a < b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IntervalSet(Vec<(Rational, Rational)>);

impl IntervalSet {
    pub fn from_intervals(iv: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut v: Vec<(Rational, Rational)> = iv.into_iter().filter(|(a, b)| a < b).collect();
        v.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some((_, hi)) if a <= *hi => {
                    if b > *hi {
                        *hi = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet(out)
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn length(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.0.iter().any(|(a, b)| a <= r && r < b)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.0.iter().chain(&other.0).cloned())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (a, b) in &self.0 {
            for (c, d) in &other.0 {
                let lo = a.max(c).clone();
                let hi = b.min(d).clone();
                if lo < hi {
                    out.push((lo, hi));
                }
            }
        }
        IntervalSet::from_intervals(out)
    }

    /// Length of the contiguous covered stretch starting at 0.
    pub fn coverage_from_zero(&self) -> Rational {
        match self.0.first() {
            Some((a, b)) if a.is_zero() => b.clone(),
            _ => Rational::zero(),
        }
    }
}

/// `xΩ × [lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Box2D {
    pub cylinder: Bits,
    pub lo: Rational,
    pub hi: Rational,
}

impl Box2D {
    pub fn new(cylinder: Bits, lo: Rational, hi: Rational) -> Option<Self> {
        (!lo.is_negative() && lo < hi).then_some(Box2D { cylinder, lo, hi })
    }

    pub fn measure(&self) -> Rational {
        cylinder_measure(&self.cylinder) * (&self.hi - &self.lo)
    }
}

/// A finite union of boxes in `Ω × ℝ≥0`.
///
/// Canonical form: the cylinders carrying slices form a prefix-free set,
/// each slice is a merged [`IntervalSet`], and sibling cylinders with equal
/// slices are merged into their parent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OpenSet2D {
    slices: BTreeMap<Bits, IntervalSet>,
}

impl OpenSet2D {
    pub fn empty() -> Self {
        OpenSet2D::default()
    }

    pub fn from_boxes(boxes: impl IntoIterator<Item = Box2D>) -> Self {
        Self::from_slices(
            boxes
                .into_iter()
                .map(|b| (b.cylinder, IntervalSet::from_intervals([(b.lo, b.hi)]))),
        )
    }

    /// Union of `xΩ × I_x` over the given pairs; cylinders may overlap.
    pub fn from_slices(slices: impl IntoIterator<Item = (Bits, IntervalSet)>) -> Self {
        let slices: Vec<(Bits, IntervalSet)> = slices.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        let depth = slices.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut fine: BTreeMap<Bits, IntervalSet> = BTreeMap::new();
        for (k, s) in slices {
            for cyl in k.extensions(depth) {
                let merged = match fine.get(&cyl) {
                    Some(prev) => prev.union(&s),
                    None => s.clone(),
                };
                fine.insert(cyl, merged);
            }
        }
        // Merge uniform siblings bottom-up.
        for level in (1..=depth).rev() {
            let at_level: Vec<Bits> = fine.keys().filter(|k| k.len() == level && k.last() == Some(false)).cloned().collect();
            for left in at_level {
                let parent = left.parent().expect("nonempty");
                let right = parent.child(true);
                if fine.contains_key(&right) && fine.get(&right) == fine.get(&left) {
                    let s = fine.remove(&left).expect("present");
                    fine.remove(&right);
                    fine.insert(parent, s);
                }
            }
        }
        OpenSet2D { slices: fine }
    }

    pub fn slices(&self) -> &BTreeMap<Bits, IntervalSet> {
        &self.slices
    }

    pub fn boxes(&self) -> impl Iterator<Item = Box2D> + '_ {
        self.slices.iter().flat_map(|(k, s)| {
            s.intervals().iter().map(move |(a, b)| Box2D {
                cylinder: k.clone(),
                lo: a.clone(),
                hi: b.clone(),
            })
        })
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.slices.keys().map(Bits::len).max().unwrap_or(0)
    }

    pub fn measure(&self) -> Rational {
        self.slices
            .iter()
            .fold(Rational::zero(), |acc, (k, s)| acc + cylinder_measure(k) * s.length())
    }

    /// The r-slice over the cylinder `xΩ`, valid when `x` is at least as
    /// deep as every slice cylinder that overlaps it.
    pub fn slice_at(&self, x: &Bits) -> IntervalSet {
        (0..=x.len())
            .find_map(|n| self.slices.get(&x.prefix(n)).cloned())
            .unwrap_or_default()
    }

    pub fn contains(&self, x: &Bits, r: &Rational) -> bool {
        self.slice_at(x).contains(r)
    }

    pub fn union(&self, other: &OpenSet2D) -> OpenSet2D {
        Self::from_slices(self.slices.iter().chain(&other.slices).map(|(k, s)| (k.clone(), s.clone())))
    }

    pub fn intersect(&self, other: &OpenSet2D) -> OpenSet2D {
        let mut out = Vec::new();
        for (a, sa) in &self.slices {
            for (b, sb) in &other.slices {
                if a.is_prefix_of(b) {
                    out.push((b.clone(), sa.intersect(sb)));
                } else if b.is_prefix_of(a) {
                    out.push((a.clone(), sa.intersect(sb)));
                }
            }
        }
        Self::from_slices(out)
    }

    pub fn is_subset_of(&self, other: &OpenSet2D) -> bool {
        self.intersect(other) == *self
    }
}
