//! Concrete randomness tests built from complexity tables, and exact
//! tools for comparing tails of series.

mod functions;
mod series;

pub use functions::{gacs_sum, plain_test_fn, prefix_test_seq};
pub use series::{
    series_delay, tail_domination_violations, tails_bounded, ApproxMatrix, DelayedSeries, Schedule, SeriesSpec,
    TailSum, TailsVerdict,
};
