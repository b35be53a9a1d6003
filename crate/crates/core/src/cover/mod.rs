//! Covers of liminf sets and of slowly converging series.

mod blocks;
mod graph;
mod schedule;
mod slow;

pub use blocks::{block_cover, conidis_cover, fatou_bound, Block, BlockCover, BlockDecomposition, Lattice};
pub use graph::{extract_q, lift_to_graph, q_pipeline, EpsilonRun, QOutcome, QPipelineResult, QResult};
pub use schedule::{EpsilonRule, EpsilonSchedule};
pub use slow::{
    slow_cover, slow_cover_2d, slow_cover_2d_coverage_check, slow_cover_coverage_check, Counterexample,
    CoverageReport, Excess, SlowCover, SlowCoverTrace, StepRecord,
};
