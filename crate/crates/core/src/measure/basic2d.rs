use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::bits::Bits;
use crate::error::{invalid, Result};
use crate::measure::{FuncOp, IntervalSet, OpenSet2D};
use crate::rational::{pow2, Rational};

/// A non-negative step function of `r ≥ 0` with finite support.
///
/// `breaks = [0, r_1, …, r_k]`, `values[j]` holds on `[breaks[j], breaks[j+1])`
/// and the function is zero from `r_k` on. Canonical: adjacent values differ
/// and the last value is nonzero, so the zero function has no pieces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StepFn {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepFn {
    pub fn zero() -> Self {
        StepFn::default()
    }

    /// `v` on `[lo, hi)`, zero elsewhere.
    pub fn block(lo: Rational, hi: Rational, v: Rational) -> Result<Self> {
        if lo.is_negative() || lo >= hi {
            return Err(invalid(format!("bad interval [{lo}, {hi})")));
        }
        if lo.is_zero() {
            StepFn::new(vec![lo, hi], vec![v])
        } else {
            StepFn::new(vec![Rational::zero(), lo, hi], vec![Rational::zero(), v])
        }
    }

    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() && breaks.len() <= 1 {
            return Ok(StepFn::zero());
        }
        if breaks.len() != values.len() + 1 {
            return Err(invalid("step function needs one more breakpoint than values"));
        }
        if !breaks[0].is_zero() {
            return Err(invalid("first breakpoint must be 0"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        if values.iter().any(Signed::is_negative) {
            return Err(invalid("step function values must be non-negative"));
        }
        Ok(Self::canonical(breaks, values))
    }

    fn canonical(breaks: Vec<Rational>, values: Vec<Rational>) -> Self {
        let mut b: Vec<Rational> = vec![breaks[0].clone()];
        let mut v: Vec<Rational> = Vec::new();
        for (j, val) in values.into_iter().enumerate() {
            if v.last() == Some(&val) {
                *b.last_mut().expect("nonempty") = breaks[j + 1].clone();
            } else {
                v.push(val);
                b.push(breaks[j + 1].clone());
            }
        }
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
            b.pop();
        }
        if v.is_empty() {
            return StepFn::zero();
        }
        StepFn { breaks: b, values: v }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    /// `(lo, hi, value)` for every piece, zero pieces included.
    pub fn pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(j, v)| (&self.breaks[j], &self.breaks[j + 1], v))
    }

    pub fn support_end(&self) -> Rational {
        self.breaks.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        if self.values.is_empty() || r.is_negative() {
            return Rational::zero();
        }
        // index of the last break <= r
        let idx = self.breaks.partition_point(|b| b <= r);
        if idx == 0 || idx > self.values.len() {
            Rational::zero()
        } else {
            self.values[idx - 1].clone()
        }
    }

    pub fn integral(&self) -> Rational {
        self.pieces()
            .fold(Rational::zero(), |acc, (lo, hi, v)| acc + v * (hi - lo))
    }

    pub fn zip_with(&self, other: &StepFn, f: impl Fn(&Rational, &Rational) -> Rational) -> StepFn {
        let mut pts: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        pts.push(Rational::zero());
        pts.sort();
        pts.dedup();
        if pts.len() < 2 {
            return StepFn::zero();
        }
        let values = pts[..pts.len() - 1]
            .iter()
            .map(|r| f(&self.eval(r), &other.eval(r)))
            .collect();
        Self::canonical(pts, values)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> StepFn {
        if self.is_zero() {
            return StepFn::zero();
        }
        Self::canonical(self.breaks.clone(), self.values.iter().map(f).collect())
    }

    /// Maximal intervals on which the value exceeds `t`.
    pub fn above(&self, t: &Rational) -> IntervalSet {
        IntervalSet::from_intervals(
            self.pieces()
                .filter(|(_, _, v)| *v > t)
                .map(|(lo, hi, _)| (lo.clone(), hi.clone())),
        )
    }
}

/// A non-negative function on `Ω × ℝ≥0` that depends on the first `depth`
/// bits of `ω` and is a finitely supported step function of `r` on each
/// depth-`depth` cylinder.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BasicFunc2D {
    depth: usize,
    slices: BTreeMap<Bits, StepFn>,
}

impl BasicFunc2D {
    pub fn zero() -> Self {
        BasicFunc2D::default()
    }

    pub fn new(depth: usize, slices: impl IntoIterator<Item = (Bits, StepFn)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, s) in slices {
            if k.len() != depth {
                return Err(invalid(format!("cylinder {k:?} is not of depth {depth}")));
            }
            if map.contains_key(&k) {
                return Err(invalid(format!("cylinder {k:?} given twice")));
            }
            if !s.is_zero() {
                map.insert(k, s);
            }
        }
        Ok(BasicFunc2D { depth, slices: map })
    }

    /// `v` on `xΩ × [lo, hi)`.
    pub fn block(x: Bits, lo: Rational, hi: Rational, v: Rational) -> Result<Self> {
        let depth = x.len();
        BasicFunc2D::new(depth, [(x, StepFn::block(lo, hi, v)?)])
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn slices(&self) -> &BTreeMap<Bits, StepFn> {
        &self.slices
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    /// The slice over cylinder `xΩ`; `x` must be at least `depth` bits long.
    pub fn slice(&self, x: &Bits) -> StepFn {
        assert!(x.len() >= self.depth, "prefix shorter than function depth");
        self.slices.get(&x.prefix(self.depth)).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Bits, r: &Rational) -> Rational {
        assert!(x.len() >= self.depth, "prefix shorter than function depth");
        self.slices
            .get(&x.prefix(self.depth))
            .map(|s| s.eval(r))
            .unwrap_or_else(Rational::zero)
    }

    pub fn refine(&self, depth: usize) -> BasicFunc2D {
        assert!(depth >= self.depth, "cannot refine to a shallower depth");
        if depth == self.depth {
            return self.clone();
        }
        let mut slices = BTreeMap::new();
        for (k, s) in &self.slices {
            for cyl in k.extensions(depth) {
                slices.insert(cyl, s.clone());
            }
        }
        BasicFunc2D { depth, slices }
    }

    fn zip_with(&self, other: &BasicFunc2D, f: impl Fn(&Rational, &Rational) -> Rational + Copy) -> BasicFunc2D {
        let depth = self.depth.max(other.depth);
        let a = self.refine(depth);
        let b = other.refine(depth);
        let zero = StepFn::zero();
        let mut slices = BTreeMap::new();
        for k in a.slices.keys().chain(b.slices.keys()) {
            if slices.contains_key(k) {
                continue;
            }
            let s = a.slices.get(k).unwrap_or(&zero).zip_with(b.slices.get(k).unwrap_or(&zero), f);
            if !s.is_zero() {
                slices.insert(k.clone(), s);
            }
        }
        BasicFunc2D { depth, slices }
    }

    pub fn min(&self, other: &BasicFunc2D) -> BasicFunc2D {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    pub fn max(&self, other: &BasicFunc2D) -> BasicFunc2D {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    pub fn sum(&self, other: &BasicFunc2D) -> BasicFunc2D {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: &Rational) -> BasicFunc2D {
        assert!(!c.is_negative(), "scale factor must be non-negative");
        let slices = self
            .slices
            .iter()
            .map(|(k, s)| (k.clone(), s.map(|v| v * c)))
            .filter(|(_, s)| !s.is_zero())
            .collect();
        BasicFunc2D {
            depth: self.depth,
            slices,
        }
    }

    pub fn combine(&self, op: &FuncOp, other: &BasicFunc2D) -> BasicFunc2D {
        match op {
            FuncOp::Min => self.min(other),
            FuncOp::Max => self.max(other),
            FuncOp::Sum => self.sum(other),
            FuncOp::Scale(c) => self.scale(c).refine(self.depth.max(other.depth)),
        }
    }

    /// `(g - δ)⁺`.
    pub fn lower_by(&self, delta: &Rational) -> BasicFunc2D {
        let slices = self
            .slices
            .iter()
            .map(|(k, s)| {
                let lowered = s.map(|v| if v > delta { v - delta } else { Rational::zero() });
                (k.clone(), lowered)
            })
            .filter(|(_, s)| !s.is_zero())
            .collect();
        BasicFunc2D {
            depth: self.depth,
            slices,
        }
    }

    pub fn integral(&self) -> Rational {
        let total = self
            .slices
            .values()
            .fold(Rational::zero(), |acc, s| acc + s.integral());
        total * pow2(-(self.depth as i64))
    }

    /// `{(ω, r) : g(ω, r) > t}` for `t ≥ 0`.
    pub fn exceedance(&self, t: &Rational) -> OpenSet2D {
        assert!(!t.is_negative(), "2-D exceedance needs a non-negative threshold");
        OpenSet2D::from_slices(
            self.slices
                .iter()
                .map(|(k, s)| (k.clone(), s.above(t))),
        )
    }

    /// Measure of `{g = v}` for every positive value `v`.
    pub fn level_masses(&self) -> BTreeMap<Rational, Rational> {
        let cell = pow2(-(self.depth as i64));
        let mut out: BTreeMap<Rational, Rational> = BTreeMap::new();
        for s in self.slices.values() {
            for (lo, hi, v) in s.pieces() {
                if v.is_zero() {
                    continue;
                }
                *out.entry(v.clone()).or_insert_with(Rational::zero) += &cell * (hi - lo);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rational::{int, ratio};

    #[test]
    fn integral_of_single_block() {
        let g = BasicFunc2D::block(bits("0"), int(0), int(2), ratio(1, 2)).unwrap();
        assert_eq!(g.integral(), ratio(1, 2));
    }

    #[test]
    fn exceedance_box() {
        let g = BasicFunc2D::block(bits("1"), int(0), int(1), int(3)).unwrap();
        let w = g.exceedance(&int(2));
        let boxes: Vec<_> = w.boxes().collect();
        assert_eq!(boxes.len(), 1);
        assert_eq!(boxes[0].cylinder, bits("1"));
        assert_eq!((boxes[0].lo.clone(), boxes[0].hi.clone()), (int(0), int(1)));
        assert!(g.exceedance(&int(3)).is_empty());
    }

    #[test]
    fn step_fn_canonical_and_eval() {
        let s = StepFn::new(
            vec![int(0), int(1), int(2), int(3)],
            vec![int(1), int(1), int(0)],
        )
        .unwrap();
        assert_eq!(s.breaks(), &[int(0), int(2)]);
        assert_eq!(s.eval(&ratio(3, 2)), int(1));
        assert_eq!(s.eval(&int(2)), int(0));
        assert!(StepFn::new(vec![int(0), int(0)], vec![int(1)]).is_err());
        assert!(StepFn::new(vec![int(1), int(2)], vec![int(1)]).is_err());
    }

    #[test]
    fn combine_refines_breakpoints_and_depth() {
        let f = BasicFunc2D::block(bits("0"), int(0), int(2), int(1)).unwrap();
        let g = BasicFunc2D::block(bits("01"), int(1), int(3), int(2)).unwrap();
        let s = f.sum(&g);
        assert_eq!(s.depth(), 2);
        assert_eq!(s.integral(), f.integral() + g.integral());
        assert_eq!(s.eval(&bits("01"), &ratio(3, 2)), int(3));
        assert_eq!(s.eval(&bits("00"), &ratio(3, 2)), int(1));
        let m = f.min(&g);
        assert_eq!(m.integral(), ratio(1, 4));
        let lowered = s.lower_by(&int(1));
        assert_eq!(lowered.eval(&bits("01"), &ratio(5, 2)), int(1));
        assert_eq!(lowered.eval(&bits("00"), &int(0)), int(0));
    }
}
