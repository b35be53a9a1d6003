//! Fixed inputs shared by the benchmarks.

use randlab_core::generate::{self, ConidisInstance, FatouInstance, Slow2dInstance, SlowInstance};
use randlab_core::rational::ratio;
use randlab_core::{BasicFunc, Bits, SeqSpec, SeriesSpec, Tail};

pub const SEED: u64 = 7;

pub fn conidis_suite(n: usize) -> Vec<ConidisInstance> {
    let mut rng = generate::rng(SEED);
    (0..n).map(|_| generate::conidis_instance(&mut rng)).collect()
}

pub fn fatou_suite(n: usize) -> Vec<FatouInstance> {
    let mut rng = generate::rng(SEED);
    (0..n).map(|_| generate::fatou_instance(&mut rng)).collect()
}

pub fn slow_suite(n: usize) -> Vec<SlowInstance> {
    let mut rng = generate::rng(SEED);
    (0..n).map(|_| generate::slow_instance(&mut rng)).collect()
}

pub fn slow_2d_suite(n: usize) -> Vec<Slow2dInstance> {
    let mut rng = generate::rng(SEED);
    (0..n).map(|_| generate::slow_2d_instance(&mut rng)).collect()
}

/// `f_i = (1/i) χ_{0^i Ω}` for `i = 1..=l`, ZERO tail.
pub fn shrinking_family(l: usize) -> SeqSpec<BasicFunc> {
    let items = (1..=l)
        .map(|i| BasicFunc::scaled_indicator(Bits::from_bools(vec![false; i]), ratio(1, i as i64)))
        .collect();
    SeqSpec::new(items, Tail::Zero).expect("non-empty")
}

/// `a(i) = 1/(i(i+1))` listed up to `l`.
pub fn telescoping(l: usize) -> SeriesSpec {
    SeriesSpec::telescoping(ratio(1, 1), l).expect("valid series")
}
