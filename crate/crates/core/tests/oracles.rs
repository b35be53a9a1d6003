//! Independent re-computations of the constructions, compared against the
//! library on seeded random instances.

use num_traits::Zero;
use randlab_core::cover::{conidis_cover, fatou_bound, slow_cover, slow_cover_2d};
use randlab_core::generate::{self, rng};
use randlab_core::measure::{liminf_pointwise, liminf_sets};
use randlab_core::rational::pow2;
use randlab_core::{BasicFunc, BasicFunc2D, Bits, Extended, LazyPoint, OpenSet, Rational, SeqSpec, Tail};

/// Dense slow cover: `S` stored on every depth-`d` cylinder, thresholds
/// chosen by scanning candidate values directly.
struct DenseSlow {
    thresholds: Vec<Rational>,
    above: Vec<bool>,
}

fn dense_slow(fs: &SeqSpec<BasicFunc>, eps: &Rational) -> DenseSlow {
    let d = fs.items().iter().map(|f| f.depth()).max().unwrap_or(0);
    let cells: Vec<Bits> = Bits::all_of_length(d).collect();
    let cell = pow2(-(d as i64));
    let mut s = vec![Rational::zero(); cells.len()];
    let mut t = Rational::zero();
    let mut thresholds = Vec::new();
    for f in fs.items() {
        for (k, x) in cells.iter().enumerate() {
            s[k] += f.eval(x);
        }
        let mass_above = |t: &Rational| -> Rational {
            s.iter().filter(|v| *v > t).fold(Rational::zero(), |acc, _| acc + &cell)
        };
        let mut candidates: Vec<Rational> = s.iter().filter(|v| **v >= t).cloned().collect();
        candidates.push(t.clone());
        candidates.sort();
        t = candidates.into_iter().find(|c| mass_above(c) <= *eps).unwrap();
        for v in s.iter_mut() {
            if *v < t {
                *v = t.clone();
            }
        }
        thresholds.push(t.clone());
    }
    DenseSlow {
        above: s.iter().map(|v| *v > t).collect(),
        thresholds,
    }
}

#[test]
fn slow_cover_matches_dense_oracle() {
    let mut r = rng(0x5105);
    for _ in 0..150 {
        let inst = generate::slow_instance(&mut r);
        let res = slow_cover(&inst.fs, &inst.eps).unwrap();
        let oracle = dense_slow(&inst.fs, &inst.eps);
        let ts: Vec<Rational> = res.trace.steps.iter().map(|s| s.t.clone()).collect();
        assert_eq!(ts, oracle.thresholds);
        let d = inst.fs.items().iter().map(|f| f.depth()).max().unwrap_or(0);
        for (x, above) in Bits::all_of_length(d).zip(oracle.above) {
            assert_eq!(res.cover.contains_cylinder(&x), above, "cylinder {x:?}");
        }
    }
}

/// Cell-grid slow cover on `Ω × ℝ≥0`: cylinders of the common depth times
/// the intervals between consecutive breakpoints, plus the unbounded cell
/// past the last breakpoint, where `S` always equals the threshold.
fn grid_slow_2d(gs: &SeqSpec<BasicFunc2D>, eps: &Rational) -> (Vec<Rational>, Rational) {
    let d = gs.items().iter().map(|g| g.depth()).max().unwrap_or(0);
    let mut cells: Vec<(Bits, Rational, Rational)> = Vec::new();
    for x in Bits::all_of_length(d) {
        let mut br: Vec<Rational> = gs.items().iter().flat_map(|g| g.slice(&x).breaks().to_vec()).collect();
        br.push(Rational::zero());
        br.sort();
        br.dedup();
        for w in br.windows(2) {
            cells.push((x.clone(), w[0].clone(), w[1].clone()));
        }
    }
    let cyl = pow2(-(d as i64));
    let size: Vec<Rational> = cells.iter().map(|(_, a, b)| &cyl * (b - a)).collect();
    let mut s = vec![Rational::zero(); cells.len()];
    let mut t = Rational::zero();
    let mut ts = Vec::new();
    for g in gs.items() {
        for (k, (x, a, _)) in cells.iter().enumerate() {
            s[k] += g.eval(x, a);
        }
        let mass_above = |t: &Rational| -> Rational {
            s.iter().zip(&size).filter(|(v, _)| *v > t).fold(Rational::zero(), |acc, (_, m)| acc + m)
        };
        let mut candidates: Vec<Rational> = s.iter().filter(|v| **v >= t).cloned().collect();
        candidates.push(t.clone());
        candidates.sort();
        t = candidates.into_iter().find(|c| mass_above(c) <= *eps).unwrap();
        for v in s.iter_mut() {
            if *v < t {
                *v = t.clone();
            }
        }
        ts.push(t.clone());
    }
    let w_measure = s.iter().zip(&size).filter(|(v, _)| **v > t).fold(Rational::zero(), |acc, (_, m)| acc + m);
    (ts, w_measure)
}

#[test]
fn slow_cover_2d_matches_grid_oracle() {
    let mut r = rng(0x2d2d);
    for _ in 0..80 {
        let inst = generate::slow_2d_instance(&mut r);
        let res = slow_cover_2d(&inst.gs, &inst.eps).unwrap();
        let (ts, w) = grid_slow_2d(&inst.gs, &inst.eps);
        let got: Vec<Rational> = res.trace.steps.iter().map(|s| s.t.clone()).collect();
        assert_eq!(got, ts);
        assert_eq!(res.cover.measure(), w);
    }
}

/// `liminf U_n` for a periodic tail is the intersection of the periodic part.
fn periodic_intersection(spec: &SeqSpec<OpenSet>) -> OpenSet {
    if spec.tail() == Tail::Zero {
        return OpenSet::empty();
    }
    spec.items()[spec.periodic_start() - 1..]
        .iter()
        .fold(OpenSet::full(), |acc, u| acc.intersect(u))
}

#[test]
fn conidis_covers_the_periodic_intersection() {
    let mut r = rng(0xc0);
    for _ in 0..100 {
        let inst = generate::conidis_instance(&mut r);
        let res = conidis_cover(&inst.spec, &inst.schedule, None).unwrap();
        let lim = periodic_intersection(&inst.spec);
        assert_eq!(lim, liminf_sets(&inst.spec));
        assert!(res.stabilized);
        assert!(lim.is_subset_of(&res.cover));
        assert!(res.cover.measure() <= *inst.schedule.eps_prime());
    }
}

#[test]
fn fatou_dominates_liminf_pointwise() {
    let mut r = rng(0xfa);
    let points = LazyPoint::enumerate(5, 3);
    for _ in 0..40 {
        let inst = generate::fatou_instance(&mut r);
        let res = fatou_bound(&inst.spec, &inst.schedule, None).unwrap();
        assert!(res.stabilized);
        assert!(res.cover.integral() <= *inst.schedule.eps_prime());
        for p in &points {
            // Direct: minimum over one period of the tail.
            let start = inst.spec.periodic_start();
            let direct = (start..start + inst.spec.period())
                .map(|n| inst.spec.get(n).map_or_else(Rational::zero, |f| f.eval_point(p)))
                .min()
                .unwrap();
            assert_eq!(liminf_pointwise(&inst.spec, p), Extended::Finite(direct.clone()));
            assert!(direct <= res.cover.eval_point(p));
        }
        for b in &res.decomposition.blocks {
            assert_eq!(b.value.max(&res.cover), res.cover.refine(res.cover.depth().max(b.value.depth())));
        }
    }
}
