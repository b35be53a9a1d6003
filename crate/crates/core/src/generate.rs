//! Seeded random instances for the property suites and benchmarks.
//!
//! Every generator draws from a caller-supplied RNG, so one `u64` seed fixes
//! a whole suite.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::cover::EpsilonSchedule;
use crate::measure::{BasicFunc, BasicFunc2D, OpenSet, SeqSpec, StepFn, Tail};
use crate::randomness::ApproxMatrix;
use crate::rational::{int, ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMINATORS: [i64; 6] = [1, 2, 3, 4, 6, 8];

/// A small non-negative rational `p/q` with `p ≤ max_num`.
pub fn small_rational(rng: &mut impl Rng, max_num: i64) -> Rational {
    ratio(rng.gen_range(0..=max_num), *DENOMINATORS.choose(rng).unwrap())
}

fn random_bits(rng: &mut impl Rng, len: usize) -> Bits {
    Bits::from_bools((0..len).map(|_| rng.gen_bool(0.5)))
}

/// Union of random cylinders of depth `≤ max_depth`, kept below `max_measure`.
pub fn open_set(rng: &mut impl Rng, max_depth: usize, max_measure: &Rational) -> OpenSet {
    let mut u = OpenSet::empty();
    for _ in 0..rng.gen_range(0..=6) {
        let len = rng.gen_range(0..=max_depth);
        let x = random_bits(rng, len);
        let v = u.union(&OpenSet::cylinder(x));
        if v.measure() <= *max_measure {
            u = v;
        }
    }
    u
}

/// Random basic function of depth `≤ max_depth`, scaled so `∫f ≤ max_integral`.
pub fn basic_func(rng: &mut impl Rng, max_depth: usize, max_integral: &Rational) -> BasicFunc {
    let depth = rng.gen_range(0..=max_depth);
    let density = rng.gen_range(0.2..0.9);
    let mut values: Vec<(Bits, Rational)> = Vec::new();
    for x in Bits::all_of_length(depth) {
        if rng.gen_bool(density) {
            values.push((x, small_rational(rng, 8)));
        }
    }
    let f = BasicFunc::new(depth, values).expect("generated values are valid");
    let total = f.integral();
    if total > *max_integral {
        f.scale(&(max_integral / total))
    } else {
        f
    }
}

/// Random step function on `[0, ∞)` with at most `max_breaks` breakpoints.
pub fn step_fn(rng: &mut impl Rng, max_breaks: usize) -> StepFn {
    let n = rng.gen_range(1..=max_breaks.max(1));
    let mut breaks: Vec<Rational> = (0..n).map(|_| small_rational(rng, 12)).collect();
    breaks.push(Rational::zero());
    breaks.sort();
    breaks.dedup();
    if breaks.len() < 2 {
        breaks.push(int(1));
    }
    let values = (1..breaks.len()).map(|_| small_rational(rng, 6)).collect();
    StepFn::new(breaks, values).expect("breakpoints are sorted and distinct")
}

pub fn basic_func_2d(rng: &mut impl Rng, max_depth: usize, max_breaks: usize) -> BasicFunc2D {
    let depth = rng.gen_range(0..=max_depth);
    let mut slices: Vec<(Bits, StepFn)> = Vec::new();
    for x in Bits::all_of_length(depth) {
        if rng.gen_bool(0.6) {
            slices.push((x, step_fn(rng, max_breaks)));
        }
    }
    BasicFunc2D::new(depth, slices).expect("generated slices are valid")
}

fn tail(rng: &mut impl Rng, len: usize) -> Tail {
    if rng.gen_bool(0.5) {
        Tail::RepeatLast
    } else {
        Tail::Cycle(rng.gen_range(1..=len.min(4)))
    }
}

fn schedule(rng: &mut impl Rng) -> EpsilonSchedule {
    let eps = if rng.gen_bool(0.5) { ratio(1, 4) } else { ratio(1, 2) };
    let eps_prime = if rng.gen_bool(0.5) { &eps + ratio(1, 8) } else { ratio(3, 4) };
    EpsilonSchedule::geometric(eps, eps_prime).expect("eps < eps'")
}

#[derive(Debug, Clone)]
pub struct ConidisInstance {
    pub spec: SeqSpec<OpenSet>,
    pub schedule: EpsilonSchedule,
}

/// Depth `≤ 6`, list length `≤ 20`, repeating or cycling (period `≤ 4`) tails.
pub fn conidis_instance(rng: &mut impl Rng) -> ConidisInstance {
    let schedule = schedule(rng);
    let len = rng.gen_range(1..=20);
    let items = (0..len).map(|_| open_set(rng, 6, schedule.eps())).collect();
    ConidisInstance {
        spec: SeqSpec::new(items, tail(rng, len)).expect("valid tail"),
        schedule,
    }
}

#[derive(Debug, Clone)]
pub struct FatouInstance {
    pub spec: SeqSpec<BasicFunc>,
    pub schedule: EpsilonSchedule,
}

/// Depth `≤ 5`, list length `≤ 12`, every `∫f_i ≤ ε`.
pub fn fatou_instance(rng: &mut impl Rng) -> FatouInstance {
    let schedule = schedule(rng);
    let len = rng.gen_range(1..=12);
    let items = (0..len).map(|_| basic_func(rng, 5, schedule.eps())).collect();
    FatouInstance {
        spec: SeqSpec::new(items, tail(rng, len)).expect("valid tail"),
        schedule,
    }
}

const SLOW_EPS: [(i64, i64); 6] = [(1, 8), (1, 4), (1, 2), (3, 4), (1, 1), (2, 1)];

#[derive(Debug, Clone)]
pub struct SlowInstance {
    pub fs: SeqSpec<BasicFunc>,
    pub eps: Rational,
}

/// List length `≤ 15`, depth `≤ 5`, ZERO tail.
pub fn slow_instance(rng: &mut impl Rng) -> SlowInstance {
    let (p, q) = *SLOW_EPS.choose(rng).unwrap();
    let len = rng.gen_range(1..=15);
    let items = (0..len).map(|_| basic_func(rng, 5, &int(2))).collect();
    SlowInstance {
        fs: SeqSpec::new(items, Tail::Zero).expect("valid tail"),
        eps: ratio(p, q),
    }
}

#[derive(Debug, Clone)]
pub struct Slow2dInstance {
    pub gs: SeqSpec<BasicFunc2D>,
    pub eps: Rational,
}

/// List length `≤ 8`, depth `≤ 3`, `≤ 8` breakpoints per slice.
pub fn slow_2d_instance(rng: &mut impl Rng) -> Slow2dInstance {
    let (p, q) = *SLOW_EPS.choose(rng).unwrap();
    let len = rng.gen_range(1..=8);
    let items = (0..len).map(|_| basic_func_2d(rng, 3, 8)).collect();
    Slow2dInstance {
        gs: SeqSpec::new(items, Tail::Zero).expect("valid tail"),
        eps: ratio(p, q),
    }
}

/// Up to 8 rows of up to 5 non-decreasing approximations.
pub fn approx_matrix(rng: &mut impl Rng) -> ApproxMatrix {
    let rows = (0..rng.gen_range(1..=8))
        .map(|_| {
            let mut acc = Rational::zero();
            (0..rng.gen_range(1..=5))
                .map(|_| {
                    acc += small_rational(rng, 4);
                    acc.clone()
                })
                .collect()
        })
        .collect();
    ApproxMatrix::new(rows).expect("generated rows are non-negative")
}
