//! Slow-convergence threshold covers on `Ω` and on `Ω × ℝ≥0`.
//!
//! After step `i` the running function is `S_i = max(S_{i-1} + f_i, t_i)`,
//! kept as `t_i + E_i` with `E_i ≥ 0`. Only `E` is stored: on the
//! half-line `max(S, t)` has infinite support while `E` stays finite.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::bits::Bits;
use crate::error::{invalid, Error, Result};
use crate::measure::{BasicFunc, BasicFunc2D, OpenSet, OpenSet2D, SeqSpec, StepFn};
use crate::randomness::SeriesSpec;
use crate::rational::Rational;

/// The operations the threshold iteration needs from a step function.
pub trait Excess: Clone {
    type Cover: Clone;
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    /// `(self - d)⁺`.
    fn lowered(&self, d: &Rational) -> Self;
    /// Mass of each positive level set.
    fn levels(&self) -> BTreeMap<Rational, Rational>;
    fn total(&self) -> Rational;
    /// `{self > 0}`.
    fn support(&self) -> Self::Cover;
}

impl Excess for BasicFunc {
    type Cover = OpenSet;
    fn zero() -> Self {
        BasicFunc::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.sum(other)
    }
    fn lowered(&self, d: &Rational) -> Self {
        self.lower_by(d)
    }
    fn levels(&self) -> BTreeMap<Rational, Rational> {
        self.level_masses()
    }
    fn total(&self) -> Rational {
        self.integral()
    }
    fn support(&self) -> OpenSet {
        self.exceedance(&Rational::zero())
    }
}

impl Excess for BasicFunc2D {
    type Cover = OpenSet2D;
    fn zero() -> Self {
        BasicFunc2D::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.sum(other)
    }
    fn lowered(&self, d: &Rational) -> Self {
        self.lower_by(d)
    }
    fn levels(&self) -> BTreeMap<Rational, Rational> {
        self.level_masses()
    }
    fn total(&self) -> Rational {
        self.integral()
    }
    fn support(&self) -> OpenSet2D {
        self.exceedance(&Rational::zero())
    }
}

/// One row of the audit trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub i: usize,
    pub integral_added: Rational,
    pub t: Rational,
    pub delta_t: Rational,
    /// Measure of `{S_i > t_i}`.
    pub measure_exceedance: Rational,
    pub i1_ok: bool,
    /// `ε t_i + ∫(S_i - t_i)`.
    pub i2_lhs: Rational,
    /// `Σ_{k≤i} ∫f_k`.
    pub i2_rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlowCoverTrace {
    pub eps: Rational,
    pub steps: Vec<StepRecord>,
    /// Final threshold `T`.
    pub threshold: Rational,
    pub total_integral: Rational,
}

impl SlowCoverTrace {
    /// `T ε ≤ Σ ∫f_i`.
    pub fn threshold_bound_ok(&self) -> bool {
        &self.threshold * &self.eps <= self.total_integral
    }

    pub fn all_ok(&self) -> bool {
        self.steps.iter().all(|s| s.i1_ok && s.i2_lhs <= s.i2_rhs) && self.threshold_bound_ok()
    }

    pub fn deltas(&self) -> Vec<Rational> {
        self.steps.iter().map(|s| s.delta_t.clone()).collect()
    }

    /// `t_{i-1}` for `i = 1..=L+1`, starting from `t_0 = 0`.
    pub fn previous_thresholds(&self) -> Vec<Rational> {
        std::iter::once(Rational::zero())
            .chain(self.steps.iter().map(|s| s.t.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlowCover<F: Excess> {
    /// `E_L = S_L - T`.
    pub excess: F,
    pub threshold: Rational,
    /// `W = {S_L > T}`.
    pub cover: F::Cover,
    pub trace: SlowCoverTrace,
}

/// Smallest `Δ ∈ {0} ∪ values(e)` with `μ{e > Δ} ≤ eps`, and `μ{e > Δ}`.
fn minimal_raise(levels: &BTreeMap<Rational, Rational>, eps: &Rational) -> Result<(Rational, Rational)> {
    // above[v] = μ{e > v}, built from the top level down.
    let mut above: Vec<(Rational, Rational)> = Vec::with_capacity(levels.len() + 1);
    let mut acc = Rational::zero();
    for (v, m) in levels.iter().rev() {
        above.push((v.clone(), acc.clone()));
        acc += m;
    }
    above.push((Rational::zero(), acc));
    above.reverse();
    let pos = above
        .iter()
        .position(|(_, m)| m <= eps)
        .ok_or_else(|| Error::Internal("no threshold candidate meets eps".into()))?;
    let (delta, mass) = above[pos].clone();
    if delta.is_positive() {
        // No smaller rational works: μ{e ≥ Δ} > eps.
        let at_least = &mass + &levels[&delta];
        if at_least <= *eps {
            return Err(Error::Internal(format!("threshold raise {delta} is not minimal")));
        }
    }
    Ok((delta, mass))
}

fn run<F: Excess>(items: &[F], eps: &Rational) -> Result<SlowCover<F>> {
    if !eps.is_positive() {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    let mut t = Rational::zero();
    let mut e = F::zero();
    let mut rhs = Rational::zero();
    let mut steps = Vec::with_capacity(items.len());
    for (idx, f) in items.iter().enumerate() {
        let added = f.total();
        rhs += &added;
        let raised = e.plus(f);
        let (delta, _) = minimal_raise(&raised.levels(), eps)?;
        t += &delta;
        e = raised.lowered(&delta);
        let exceed: Rational = e.levels().values().sum();
        let i1_ok = exceed <= *eps;
        let lhs = eps * &t + e.total();
        let rec = StepRecord {
            i: idx + 1,
            integral_added: added,
            t: t.clone(),
            delta_t: delta,
            measure_exceedance: exceed,
            i1_ok,
            i2_lhs: lhs,
            i2_rhs: rhs.clone(),
        };
        if !rec.i1_ok {
            return Err(Error::Internal(format!("I1 fails at step {}", rec.i)));
        }
        if rec.i2_lhs > rec.i2_rhs {
            return Err(Error::Internal(format!("I2 fails at step {}", rec.i)));
        }
        steps.push(rec);
    }
    let trace = SlowCoverTrace {
        eps: eps.clone(),
        steps,
        threshold: t.clone(),
        total_integral: rhs,
    };
    if !trace.threshold_bound_ok() {
        return Err(Error::Internal("T eps exceeds the total integral".into()));
    }
    Ok(SlowCover {
        cover: e.support(),
        excess: e,
        threshold: t,
        trace,
    })
}

/// Threshold cover on `Ω` for a finite sequence of basic functions.
pub fn slow_cover(fs: &SeqSpec<BasicFunc>, eps: &Rational) -> Result<SlowCover<BasicFunc>> {
    fs.require_zero_tail("slow_cover")?;
    let r = run(fs.items(), eps)?;
    if r.cover.measure() > *eps {
        return Err(Error::Internal("measure of W exceeds eps".into()));
    }
    Ok(r)
}

/// Threshold cover on `Ω × ℝ≥0`.
pub fn slow_cover_2d(gs: &SeqSpec<BasicFunc2D>, eps: &Rational) -> Result<SlowCover<BasicFunc2D>> {
    gs.require_zero_tail("slow_cover_2d")?;
    let r = run(gs.items(), eps)?;
    if r.cover.measure() > *eps {
        return Err(Error::Internal("measure of W exceeds eps".into()));
    }
    Ok(r)
}

impl SlowCover<BasicFunc> {
    /// `S_L = T + E_L`.
    pub fn limit(&self) -> BasicFunc {
        self.excess.sum(&BasicFunc::constant(self.threshold.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub i: usize,
    pub cylinder: Bits,
    /// `None` on `Ω`; the sampled `r` on `Ω × ℝ≥0`.
    pub r: Option<Rational>,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverageReport {
    /// Number of (point, index) pairs whose hypothesis held.
    pub triggered: usize,
    pub checked_points: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Suffix sums `Σ_{j ≥ i} v_j`, indexed by `i - 1`.
fn suffix_sums(values: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); values.len()];
    let mut acc = Rational::zero();
    for (k, v) in values.iter().enumerate().rev() {
        acc += v;
        out[k] = acc.clone();
    }
    out
}

/// Every cylinder whose `f`-tail from some `i` exceeds `T - t_{i-1}` must lie in `W`.
pub fn slow_cover_coverage_check(fs: &SeqSpec<BasicFunc>, res: &SlowCover<BasicFunc>) -> CoverageReport {
    let depth = fs
        .items()
        .iter()
        .map(BasicFunc::depth)
        .chain([res.cover.max_depth()])
        .max()
        .unwrap_or(0);
    let prev = res.trace.previous_thresholds();
    let mut report = CoverageReport::default();
    for x in Bits::all_of_length(depth) {
        report.checked_points += 1;
        let vals: Vec<Rational> = fs.items().iter().map(|f| f.eval(&x)).collect();
        let tails = suffix_sums(&vals);
        let inside = res.cover.contains_cylinder(&x);
        for (k, tail) in tails.iter().enumerate() {
            if *tail > &res.threshold - &prev[k] {
                report.triggered += 1;
                if !inside {
                    report.counterexamples.push(Counterexample {
                        i: k + 1,
                        cylinder: x.clone(),
                        r: None,
                        reason: "tail exceeds T - t_{i-1}",
                    });
                }
            }
        }
    }
    report
}

/// Corner-grid check on `Ω × ℝ≥0`. Every function involved is constant on
/// the cells of the common refinement, so left corners are exhaustive.
/// Cylinders where every `g_i` and `W` vanish are skipped.
/// With `rho`, also checks points whose `g`-tail beats the `ρ`-tail from an
/// index after which every `Δt_j ≤ ρ(j)`.
pub fn slow_cover_2d_coverage_check(
    gs: &SeqSpec<BasicFunc2D>,
    res: &SlowCover<BasicFunc2D>,
    rho: Option<&SeriesSpec>,
) -> CoverageReport {
    let depth = gs
        .items()
        .iter()
        .map(BasicFunc2D::depth)
        .chain([res.cover.max_depth()])
        .max()
        .unwrap_or(0);
    let gaps: Vec<Rational> = res.trace.previous_thresholds().iter().map(|t| &res.threshold - t).collect();
    let deltas = res.trace.deltas();
    let l = gs.len();
    let rho_tails: Vec<Option<Rational>> = (0..l).map(|k| rho.map(|rho| rho.tail(k + 1))).collect();
    // dominated_from[k]: Δt_j ≤ ρ(j) for every j in k+1..=L.
    let dominated_from: Vec<bool> = match rho {
        Some(rho) => {
            let mut v = vec![true; l + 1];
            for k in (0..l).rev() {
                v[k] = v[k + 1] && deltas[k] <= rho.term(k + 1);
            }
            v
        }
        None => vec![false; l + 1],
    };
    let mut report = CoverageReport::default();
    for x in Bits::all_of_length(depth) {
        let slices: Vec<_> = gs.items().iter().map(|g| g.slice(&x)).collect();
        let w = res.cover.slice_at(&x);
        // All tails vanish here, and no threshold gap is negative.
        if w.is_empty() && slices.iter().all(StepFn::is_zero) {
            continue;
        }
        let mut corners: Vec<Rational> = slices
            .iter()
            .flat_map(|s| s.breaks().iter().cloned())
            .chain(w.intervals().iter().flat_map(|(a, b)| [a.clone(), b.clone()]))
            .chain([Rational::zero()])
            .collect();
        corners.sort();
        corners.dedup();
        for r in corners {
            report.checked_points += 1;
            let vals: Vec<Rational> = slices.iter().map(|s| s.eval(&r)).collect();
            let tails = suffix_sums(&vals);
            let inside = w.contains(&r);
            for (k, tail) in tails.iter().enumerate() {
                let by_delta = *tail > gaps[k];
                let by_rho = dominated_from[k] && rho_tails[k].as_ref().is_some_and(|rt| tail > rt);
                for (hit, reason) in [(by_delta, "tail exceeds T - t_{i-1}"), (by_rho, "tail exceeds rho-tail")] {
                    if hit {
                        report.triggered += 1;
                        if !inside {
                            report.counterexamples.push(Counterexample {
                                i: k + 1,
                                cylinder: x.clone(),
                                r: Some(r.clone()),
                                reason,
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::measure::Tail;
    use crate::rational::{int, ratio};

    fn spec(fs: Vec<BasicFunc>) -> SeqSpec<BasicFunc> {
        SeqSpec::new(fs, Tail::Zero).unwrap()
    }

    #[test]
    fn all_zero() {
        let fs = spec(vec![BasicFunc::zero(), BasicFunc::zero()]);
        let r = slow_cover(&fs, &ratio(1, 4)).unwrap();
        assert_eq!(r.threshold, int(0));
        assert!(r.cover.is_empty() && r.limit().is_zero());
        assert!(slow_cover_coverage_check(&fs, &r).triggered == 0);
    }

    #[test]
    fn single_tall_half() {
        let fs = spec(vec![BasicFunc::scaled_indicator(bits("0"), int(2))]);
        let r = slow_cover(&fs, &ratio(1, 4)).unwrap();
        let s = &r.trace.steps[0];
        assert_eq!((s.t.clone(), s.delta_t.clone()), (int(2), int(2)));
        assert_eq!(r.limit(), BasicFunc::constant(int(2)).refine(1));
        assert!(r.cover.is_empty());
        assert_eq!((s.i2_lhs.clone(), s.i2_rhs.clone()), (ratio(1, 2), int(1)));
        let c = slow_cover_coverage_check(&fs, &r);
        assert_eq!((c.triggered, c.passed()), (0, true));
    }

    #[test]
    fn two_indicators_stay_below_eps() {
        let f = BasicFunc::indicator(bits("0"));
        let fs = spec(vec![f.clone(), f]);
        let r = slow_cover(&fs, &ratio(3, 4)).unwrap();
        assert_eq!(r.threshold, int(0));
        assert_eq!(r.cover, OpenSet::cylinder(bits("0")));
        assert_eq!(r.cover.measure(), ratio(1, 2));
        let c = slow_cover_coverage_check(&fs, &r);
        assert!(c.passed() && c.triggered == 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let fs = spec(vec![BasicFunc::zero()]);
        assert!(slow_cover(&fs, &int(0)).is_err());
        let rl = SeqSpec::new(vec![BasicFunc::zero()], Tail::RepeatLast).unwrap();
        assert!(slow_cover(&rl, &int(1)).is_err());
    }

    #[test]
    fn minimal_raise_picks_a_level() {
        let levels: BTreeMap<_, _> = [(int(1), ratio(1, 2)), (int(3), ratio(1, 4))].into_iter().collect();
        assert_eq!(minimal_raise(&levels, &ratio(3, 4)).unwrap(), (int(0), ratio(3, 4)));
        assert_eq!(minimal_raise(&levels, &ratio(1, 2)).unwrap(), (int(1), ratio(1, 4)));
        assert_eq!(minimal_raise(&levels, &ratio(1, 8)).unwrap(), (int(3), int(0)));
    }

    #[test]
    fn two_d_examples() {
        let z = SeqSpec::new(vec![BasicFunc2D::zero()], Tail::Zero).unwrap();
        assert!(slow_cover_2d(&z, &int(1)).unwrap().cover.is_empty());
        let g = BasicFunc2D::block(bits("0"), int(0), int(1), int(2)).unwrap();
        let gs = SeqSpec::new(vec![g], Tail::Zero).unwrap();
        let r = slow_cover_2d(&gs, &ratio(1, 4)).unwrap();
        assert_eq!(r.threshold, int(2));
        assert!(r.cover.is_empty());
        assert!(r.trace.threshold_bound_ok());
        assert!(slow_cover_2d_coverage_check(&gs, &r, None).passed());
    }
}
