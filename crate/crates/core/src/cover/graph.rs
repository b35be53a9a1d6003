//! Lower graphs on `Ω × ℝ≥0` and the function `Q` read back from a cover.

use std::ops::RangeInclusive;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::slow::{slow_cover_2d, slow_cover_2d_coverage_check, CoverageReport, SlowCover};
use crate::bits::Bits;
use crate::error::{invalid, Error, Result};
use crate::measure::{BasicFunc, BasicFunc2D, OpenSet2D, SeqSpec, StepFn};
use crate::randomness::{tails_bounded, SeriesSpec, TailsVerdict};
use crate::rational::{pow2, Extended, Rational};

/// `g(ω, u) = a` for `0 ≤ u < f(ω)/a`, zero above.
pub fn lift_to_graph(f: &BasicFunc, a: &Rational) -> Result<BasicFunc2D> {
    if !a.is_positive() {
        return Err(invalid(format!("graph height must be positive, got {a}")));
    }
    let slices = f
        .values()
        .iter()
        .map(|(x, v)| StepFn::block(Rational::zero(), v / a, a.clone()).map(|s| (x.clone(), s)))
        .collect::<Result<Vec<_>>>()?;
    BasicFunc2D::new(f.depth(), slices)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QResult {
    /// `Q(ω) = sup{v : {ω} × [0, v) ⊆ W}`. Finite inputs never give `+∞`.
    pub q: BasicFunc,
    pub q_integral: Rational,
    /// `μ(W)`, an upper bound for `∫Q`.
    pub integral_bound: Rational,
}

impl QResult {
    /// `Q` on the cylinder `xΩ`; `x` must be at least `q.depth()` bits long.
    pub fn value(&self, x: &Bits) -> Rational {
        self.q.eval(x)
    }
}

pub fn extract_q(w: &OpenSet2D) -> QResult {
    let weights: Vec<(&Bits, Rational)> = w
        .slices()
        .iter()
        .map(|(x, s)| (x, s.coverage_from_zero()))
        .collect();
    let q = BasicFunc::from_cylinder_weights(weights);
    QResult {
        q_integral: q.integral(),
        integral_bound: w.measure(),
        q,
    }
}

/// One slow-cover run of the `ε = 2^k` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonRun {
    pub k: i64,
    pub eps: Rational,
    pub threshold: Rational,
    /// `max_i Δt_i / ρ(i)`; infinite when some `Δt_i > 0 = ρ(i)`.
    pub max_delta_ratio: Extended,
    pub admissible: bool,
    pub w_measure: Rational,
    pub run: SlowCover<BasicFunc2D>,
    pub coverage: CoverageReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPipelineResult {
    pub k: i64,
    pub eps: Rational,
    pub q: QResult,
    /// Exact lower bound for `Q` on depth-`D` cylinders: the largest
    /// `min_{j=i..L} f_j/a(j)` over indices `i` with `Σ_{j=i..L} a(j) > T - t_{i-1}`.
    pub surrogate: BasicFunc,
    pub runs: Vec<EpsilonRun>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QOutcome {
    Admissible(Box<QPipelineResult>),
    NoAdmissibleEpsilon { runs: Vec<EpsilonRun> },
}

fn max_ratio(deltas: &[Rational], rho: &SeriesSpec) -> Extended {
    let mut best = Rational::zero();
    for (k, d) in deltas.iter().enumerate() {
        let r = rho.term(k + 1);
        if r.is_zero() {
            if d.is_positive() {
                return Extended::PosInfinity;
            }
        } else if d / &r > best {
            best = d / r;
        }
    }
    Extended::Finite(best)
}

fn surrogate(fs: &SeqSpec<BasicFunc>, a: &SeriesSpec, run: &SlowCover<BasicFunc2D>, depth: usize) -> BasicFunc {
    let l = fs.len();
    let prev = run.trace.previous_thresholds();
    let a_tail: Vec<Rational> = {
        let mut acc = Rational::zero();
        let mut v = vec![Rational::zero(); l];
        for k in (0..l).rev() {
            acc += a.term(k + 1);
            v[k] = acc.clone();
        }
        v
    };
    let live: Vec<usize> = (0..l).filter(|&k| a_tail[k] > &run.threshold - &prev[k]).collect();
    let values = Bits::all_of_length(depth).filter_map(|x| {
        let ratios: Vec<Rational> = fs.items().iter().enumerate().map(|(k, f)| f.eval(&x) / a.term(k + 1)).collect();
        let best = live
            .iter()
            .map(|&k| ratios[k..].iter().min().cloned().unwrap_or_else(Rational::zero))
            .max()?;
        Some((x, best))
    });
    BasicFunc::new(depth, values.collect::<Vec<_>>()).expect("ratios are non-negative")
}

/// Runs the `ε = 2^k` grid over the lifted graphs of `fs` and extracts `Q`
/// from the smallest `k` whose threshold increments stay below `ρ`.
pub fn q_pipeline(fs: &SeqSpec<BasicFunc>, a: &SeriesSpec, rho: &SeriesSpec, k_range: RangeInclusive<i64>) -> Result<QOutcome> {
    fs.require_zero_tail("q_pipeline")?;
    let l = fs.len();
    for i in 1..=l {
        if !a.term(i).is_positive() {
            return Err(invalid(format!("a({i}) must be positive")));
        }
    }
    match tails_bounded(rho, a, &Rational::from_integer(1.into()), l)? {
        TailsVerdict::BoundedWitnessed => {}
        v => return Err(invalid(format!("rho-tails are not witnessed below a-tails: {v:?}"))),
    }
    let gs: Vec<BasicFunc2D> = fs
        .items()
        .iter()
        .enumerate()
        .map(|(k, f)| lift_to_graph(f, &a.term(k + 1)))
        .collect::<Result<_>>()?;
    let gs = SeqSpec::new(gs, fs.tail())?;
    let ks: Vec<i64> = k_range.collect();
    let runs: Vec<EpsilonRun> = ks
        .par_iter()
        .map(|&k| {
            let eps = pow2(k);
            let run = slow_cover_2d(&gs, &eps)?;
            let deltas = run.trace.deltas();
            let admissible = deltas.iter().enumerate().all(|(j, d)| *d <= rho.term(j + 1));
            let coverage = slow_cover_2d_coverage_check(&gs, &run, Some(rho));
            if !coverage.passed() {
                return Err(Error::Internal(format!("2-D coverage fails for k = {k}")));
            }
            Ok(EpsilonRun {
                k,
                max_delta_ratio: max_ratio(&deltas, rho),
                admissible,
                threshold: run.threshold.clone(),
                w_measure: run.cover.measure(),
                eps,
                run,
                coverage,
            })
        })
        .collect::<Result<_>>()?;
    let Some(chosen) = runs.iter().find(|r| r.admissible) else {
        return Ok(QOutcome::NoAdmissibleEpsilon { runs });
    };
    let q = extract_q(&chosen.run.cover);
    if q.q_integral > q.integral_bound {
        return Err(Error::Internal("integral of Q exceeds the measure of W".into()));
    }
    let depth = fs
        .items()
        .iter()
        .map(BasicFunc::depth)
        .chain([q.q.depth()])
        .max()
        .unwrap_or(0);
    let sur = surrogate(fs, a, &chosen.run, depth);
    if let Some((x, v)) = sur.values().iter().find(|(x, v)| q.q.eval(x) < **v) {
        return Err(Error::Internal(format!("Q({x:?}) = {} is below the guaranteed {v}", q.q.eval(x))));
    }
    Ok(QOutcome::Admissible(Box::new(QPipelineResult {
        k: chosen.k,
        eps: chosen.eps.clone(),
        q,
        surrogate: sur,
        runs,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::measure::{Box2D, Tail};
    use crate::rational::{int, ratio};

    fn boxes(bs: &[(&str, i64, i64)]) -> OpenSet2D {
        OpenSet2D::from_boxes(bs.iter().map(|(x, a, b)| Box2D::new(bits(x), int(*a), int(*b)).unwrap()))
    }

    #[test]
    fn lift_examples() {
        let g = lift_to_graph(&BasicFunc::indicator(bits("0")), &ratio(1, 2)).unwrap();
        assert_eq!(g, BasicFunc2D::block(bits("0"), int(0), int(2), ratio(1, 2)).unwrap());
        assert_eq!(g.integral(), ratio(1, 2));
        assert!(lift_to_graph(&BasicFunc::zero(), &int(1)).unwrap().is_zero());
        let f = BasicFunc::scaled_indicator(bits("11"), int(3));
        let g = lift_to_graph(&f, &int(3)).unwrap();
        assert_eq!(g, BasicFunc2D::block(bits("11"), int(0), int(1), int(3)).unwrap());
        assert_eq!(g.integral(), ratio(3, 4));
        assert!(lift_to_graph(&f, &int(0)).is_err());
    }

    #[test]
    fn extract_examples() {
        let q = extract_q(&boxes(&[("1", 0, 3)]));
        assert_eq!(q.q, BasicFunc::scaled_indicator(bits("1"), int(3)));
        assert_eq!((q.q_integral.clone(), q.integral_bound.clone()), (ratio(3, 2), ratio(3, 2)));
        assert!(extract_q(&boxes(&[("1", 1, 3)])).q.is_zero());
        let q = extract_q(&boxes(&[("0", 0, 1), ("0", 1, 2)]));
        assert_eq!(q.q, BasicFunc::scaled_indicator(bits("0"), int(2)));
    }

    fn family(l: usize) -> SeqSpec<BasicFunc> {
        let fs = (1..=l)
            .map(|i| BasicFunc::scaled_indicator(Bits::from_bools(vec![false; i]), ratio(1, i as i64)))
            .collect();
        SeqSpec::new(fs, Tail::Zero).unwrap()
    }

    #[test]
    fn three_step_family_by_hand() {
        let a = SeriesSpec::telescoping(int(1), 3).unwrap();
        let out = q_pipeline(&family(3), &a, &a, 0..=2).unwrap();
        let QOutcome::Admissible(r) = out else { panic!("expected an admissible epsilon") };
        assert_eq!(r.k, 0);
        assert_eq!(r.runs[0].run.trace.deltas(), vec![int(0), ratio(1, 6), ratio(1, 12)]);
        assert_eq!(r.runs[0].threshold, ratio(1, 4));
        assert_eq!(r.runs[0].run.cover, boxes(&[("0", 0, 2)]));
        assert_eq!(r.q.q, BasicFunc::scaled_indicator(bits("0"), int(2)));
        assert_eq!((r.q.q_integral.clone(), r.q.integral_bound.clone()), (int(1), int(1)));
        assert_eq!(r.surrogate.eval(&bits("000")), int(2));
        assert_eq!(r.surrogate.eval(&bits("001")), int(0));
    }

    #[test]
    fn zero_family_gives_zero_q() {
        let fs = SeqSpec::new(vec![BasicFunc::zero(); 3], Tail::Zero).unwrap();
        let a = SeriesSpec::telescoping(int(1), 3).unwrap();
        let QOutcome::Admissible(r) = q_pipeline(&fs, &a, &a, 0..=0).unwrap() else { panic!() };
        assert!(r.q.q.is_zero());
    }

    #[test]
    fn no_admissible_epsilon_is_reported() {
        let a = SeriesSpec::telescoping(int(1), 3).unwrap();
        let rho = SeriesSpec::telescoping(ratio(1, 2), 3).unwrap();
        let out = q_pipeline(&family(3), &a, &rho, -6..=-5).unwrap();
        let QOutcome::NoAdmissibleEpsilon { runs } = out else { panic!("tiny eps should not be admissible") };
        assert_eq!(runs.len(), 2);
        assert!(runs.iter().all(|r| !r.admissible));
    }
}
