use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::bits::Bits;
use crate::error::{invalid, Result};
use crate::measure::{LazyPoint, OpenSet};
use crate::rational::{pow2, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuncOp {
    Min,
    Max,
    Sum,
    /// Multiply the first operand by a non-negative constant.
    Scale(Rational),
}

/// A non-negative rational step function on `Ω` whose value depends only on
/// the first `depth` bits.
///
/// Stored sparsely: only cylinders with a nonzero value appear, so equal
/// functions at equal depth have equal representations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BasicFunc {
    depth: usize,
    values: BTreeMap<Bits, Rational>,
}

impl BasicFunc {
    pub fn zero() -> Self {
        BasicFunc::default()
    }

    pub fn constant(c: Rational) -> Self {
        assert!(!c.is_negative(), "basic functions are non-negative");
        let mut values = BTreeMap::new();
        if !c.is_zero() {
            values.insert(Bits::new(), c);
        }
        BasicFunc { depth: 0, values }
    }

    /// `c · χ_{xΩ}` at depth `|x|`.
    pub fn scaled_indicator(x: Bits, c: Rational) -> Self {
        assert!(!c.is_negative(), "basic functions are non-negative");
        let depth = x.len();
        let mut values = BTreeMap::new();
        if !c.is_zero() {
            values.insert(x, c);
        }
        BasicFunc { depth, values }
    }

    pub fn indicator(x: Bits) -> Self {
        Self::scaled_indicator(x, Rational::from_integer(1.into()))
    }

    /// Build from explicit depth-`depth` cylinder values.
    pub fn new(depth: usize, values: impl IntoIterator<Item = (Bits, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in values {
            if k.len() != depth {
                return Err(invalid(format!("cylinder {k:?} is not of depth {depth}")));
            }
            if v.is_negative() {
                return Err(invalid(format!("negative value {v} on {k:?}")));
            }
            if map.contains_key(&k) {
                return Err(invalid(format!("cylinder {k:?} given twice")));
            }
            if !v.is_zero() {
                map.insert(k, v);
            }
        }
        Ok(BasicFunc { depth, values: map })
    }

    /// `Σ w_x · χ_{xΩ}` for cylinders of any lengths.
    pub fn from_cylinder_weights<'a>(weights: impl IntoIterator<Item = (&'a Bits, Rational)>) -> Self {
        let weights: Vec<(&Bits, Rational)> = weights
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .collect();
        let depth = weights.iter().map(|(x, _)| x.len()).max().unwrap_or(0);
        let mut values: BTreeMap<Bits, Rational> = BTreeMap::new();
        for (x, w) in weights {
            assert!(!w.is_negative(), "basic functions are non-negative");
            for cyl in x.extensions(depth) {
                *values.entry(cyl).or_insert_with(Rational::zero) += &w;
            }
        }
        BasicFunc { depth, values }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Nonzero values keyed by depth-`depth` cylinder.
    pub fn values(&self) -> &BTreeMap<Bits, Rational> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on the cylinder `xΩ`; `x` must be at least `depth` bits long.
    pub fn eval(&self, x: &Bits) -> Rational {
        assert!(x.len() >= self.depth, "prefix shorter than function depth");
        self.values
            .get(&x.prefix(self.depth))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval_point(&self, p: &LazyPoint) -> Rational {
        self.eval(&p.first(self.depth))
    }

    /// Same function, represented at a greater depth.
    pub fn refine(&self, depth: usize) -> BasicFunc {
        assert!(depth >= self.depth, "cannot refine to a shallower depth");
        if depth == self.depth {
            return self.clone();
        }
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            for cyl in k.extensions(depth) {
                values.insert(cyl, v.clone());
            }
        }
        BasicFunc { depth, values }
    }

    fn zip_with(&self, other: &BasicFunc, f: impl Fn(&Rational, &Rational) -> Rational) -> BasicFunc {
        let depth = self.depth.max(other.depth);
        let a = self.refine(depth);
        let b = other.refine(depth);
        let zero = Rational::zero();
        let mut values = BTreeMap::new();
        for k in a.values.keys().chain(b.values.keys()) {
            if values.contains_key(k) {
                continue;
            }
            let v = f(a.values.get(k).unwrap_or(&zero), b.values.get(k).unwrap_or(&zero));
            if !v.is_zero() {
                values.insert(k.clone(), v);
            }
        }
        BasicFunc { depth, values }
    }

    pub fn min(&self, other: &BasicFunc) -> BasicFunc {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    pub fn max(&self, other: &BasicFunc) -> BasicFunc {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    pub fn sum(&self, other: &BasicFunc) -> BasicFunc {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: &Rational) -> BasicFunc {
        assert!(!c.is_negative(), "scale factor must be non-negative");
        if c.is_zero() {
            return BasicFunc {
                depth: self.depth,
                values: BTreeMap::new(),
            };
        }
        BasicFunc {
            depth: self.depth,
            values: self.values.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Pointwise combination; both operands are refined to the larger depth.
    /// `Scale` ignores `other` apart from that refinement.
    pub fn combine(&self, op: &FuncOp, other: &BasicFunc) -> BasicFunc {
        match op {
            FuncOp::Min => self.min(other),
            FuncOp::Max => self.max(other),
            FuncOp::Sum => self.sum(other),
            FuncOp::Scale(c) => self.scale(c).refine(self.depth.max(other.depth)),
        }
    }

    /// `(f - δ)⁺`.
    pub fn lower_by(&self, delta: &Rational) -> BasicFunc {
        BasicFunc {
            depth: self.depth,
            values: self
                .values
                .iter()
                .filter(|(_, v)| *v > delta)
                .map(|(k, v)| (k.clone(), v - delta))
                .collect(),
        }
    }

    pub fn integral(&self) -> Rational {
        let total = self
            .values
            .values()
            .fold(Rational::zero(), |acc, v| acc + v);
        total * pow2(-(self.depth as i64))
    }

    /// `{ω : f(ω) > t}`, strict.
    pub fn exceedance(&self, t: &Rational) -> OpenSet {
        if t.is_negative() {
            return OpenSet::full();
        }
        OpenSet::from_cylinders(
            self.values
                .iter()
                .filter(|(_, v)| *v > t)
                .map(|(k, _)| k.clone()),
        )
    }

    /// Measure of `{f = v}` for every positive value `v`.
    pub fn level_masses(&self) -> BTreeMap<Rational, Rational> {
        let cell = pow2(-(self.depth as i64));
        let mut out: BTreeMap<Rational, Rational> = BTreeMap::new();
        for v in self.values.values() {
            *out.entry(v.clone()).or_insert_with(Rational::zero) += &cell;
        }
        out
    }

    /// Whether the function takes the value 0 somewhere.
    pub fn has_zero_region(&self) -> bool {
        self.values.len() < (1usize.checked_shl(self.depth as u32).unwrap_or(usize::MAX))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rational::{int, ratio};

    fn chi(x: &str) -> BasicFunc {
        BasicFunc::indicator(bits(x))
    }

    #[test]
    fn combine_examples() {
        let f = BasicFunc::constant(int(2));
        let g = BasicFunc::constant(int(3));
        assert_eq!(f.combine(&FuncOp::Min, &g), BasicFunc::constant(int(2)));

        let s = chi("0").combine(&FuncOp::Sum, &chi("0"));
        assert_eq!(s, BasicFunc::scaled_indicator(bits("0"), int(2)));
        assert_eq!(s.integral(), int(1));

        let m = chi("0").combine(&FuncOp::Max, &chi("1"));
        assert_eq!(m.eval(&bits("0")), int(1));
        assert_eq!(m.eval(&bits("1")), int(1));
        assert_eq!(m.integral(), int(1));
    }

    #[test]
    fn integrals() {
        assert_eq!(chi("01").integral(), ratio(1, 4));
        let f = BasicFunc::new(3, Bits::all_of_length(3).enumerate().map(|(k, x)| (x, int(k as i64)))).unwrap();
        assert_eq!(f.integral(), ratio(7, 2));
    }

    #[test]
    fn exceedance_is_strict() {
        let f = BasicFunc::scaled_indicator(bits("0"), int(2));
        let e = f.exceedance(&int(1));
        assert_eq!(e, OpenSet::cylinder(bits("0")));
        assert_eq!(e.measure(), ratio(1, 2));
        assert!(f.exceedance(&int(2)).is_empty());
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(BasicFunc::new(2, [(bits("0"), int(1))]).is_err());
        assert!(BasicFunc::new(1, [(bits("0"), int(-1))]).is_err());
    }

    #[test]
    fn weights_and_lowering() {
        let f = BasicFunc::from_cylinder_weights([(&bits(""), ratio(1, 2)), (&bits("01"), int(1))]);
        assert_eq!(f.depth(), 2);
        assert_eq!(f.eval(&bits("01")), ratio(3, 2));
        assert_eq!(f.eval(&bits("11")), ratio(1, 2));
        let l = f.lower_by(&ratio(1, 2));
        assert_eq!(l.values().len(), 1);
        assert_eq!(l.integral(), ratio(1, 4));
        assert!(!f.has_zero_region());
        assert!(l.has_zero_region());
    }
}
