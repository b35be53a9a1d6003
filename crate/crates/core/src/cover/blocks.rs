//! Block-intersection covers of a liminf: `V = U_{1..k_1} ∪ U_{k_1+1..k_2} ∪ ...`.
//!
//! Block `j` starts as the single item `U_s`. While some later item `U_i`
//! makes `V ∪ B ∪ U_i` heavier than `ε_j`, the block absorbs every item up
//! to `i`. Each absorption removes more than `ε_j - ε_{j-1}` of mass from the
//! block, so a block absorbs finitely often, and closing it keeps
//! `V ∪ U_i ≤ ε_j` for every later `i`.

use num_traits::{Signed, Zero};

use super::schedule::EpsilonSchedule;
use crate::error::{invalid, Error, Result};
use crate::measure::{BasicFunc, OpenSet, SeqSpec};
use crate::rational::Rational;

/// Meet and join with a finite mass: open sets under `∩`/`∪`, or basic
/// functions under `min`/`max` (their lower graphs).
pub trait Lattice: Clone {
    fn bottom() -> Self;
    fn meet(&self, other: &Self) -> Self;
    fn join(&self, other: &Self) -> Self;
    fn mass(&self) -> Rational;
}

impl Lattice for OpenSet {
    fn bottom() -> Self {
        OpenSet::empty()
    }
    fn meet(&self, other: &Self) -> Self {
        self.intersect(other)
    }
    fn join(&self, other: &Self) -> Self {
        self.union(other)
    }
    fn mass(&self) -> Rational {
        self.measure()
    }
}

impl Lattice for BasicFunc {
    fn bottom() -> Self {
        BasicFunc::zero()
    }
    fn meet(&self, other: &Self) -> Self {
        self.min(other)
    }
    fn join(&self, other: &Self) -> Self {
        self.max(other)
    }
    fn mass(&self) -> Rational {
        self.integral()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<T> {
    /// First item index `s_j` (1-based).
    pub start: usize,
    /// Cut point `k_j`.
    pub end: usize,
    /// `U_{s..k}` or `f_{s..k}`.
    pub value: T,
    /// Masses of the block before and after every absorption.
    pub masses: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition<T> {
    pub blocks: Vec<Block<T>>,
}

impl<T> BlockDecomposition<T> {
    pub fn cut_points(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.end).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCover<T> {
    /// `V`, or `φ` for functions.
    pub cover: T,
    pub decomposition: BlockDecomposition<T>,
    /// Some closed block starts inside the periodic part of the sequence,
    /// so the cover contains the liminf.
    pub stabilized: bool,
}

fn item<T: Lattice>(spec: &SeqSpec<T>, n: usize) -> T {
    spec.get(n).cloned().unwrap_or_else(T::bottom)
}

/// Indices past `k` that together show every distinct later item.
fn witness_range<T>(spec: &SeqSpec<T>, k: usize) -> std::ops::RangeInclusive<usize> {
    let (l, p) = (spec.len(), spec.period());
    if k < l {
        k + 1..=l + p
    } else {
        k + 1..=k + p
    }
}

fn default_block_cap<T>(spec: &SeqSpec<T>) -> usize {
    spec.len() + spec.period() + 2
}

pub fn block_cover<T: Lattice>(spec: &SeqSpec<T>, sched: &EpsilonSchedule, block_cap: Option<usize>) -> Result<BlockCover<T>> {
    let eps = sched.eps();
    for n in 1..=spec.horizon() {
        let m = item(spec, n).mass();
        if &m > eps {
            return Err(invalid(format!("item {n} has mass {m} > eps = {eps}")));
        }
    }
    let cap = block_cap.unwrap_or_else(|| default_block_cap(spec));
    let mut cover = T::bottom();
    let mut blocks = Vec::new();
    let mut stabilized = false;
    let mut s = 1;
    for j in 1..=cap {
        let (Some(eps_j), Some(eps_prev)) = (sched.get(j), sched.get(j - 1)) else {
            break;
        };
        let gap = &eps_j - &eps_prev;
        let max_absorptions = (eps / &gap).ceil();
        let mut k = s;
        let mut block = item(spec, s);
        let mut masses = vec![block.mass()];
        while let Some(i) = witness_range(spec, k).find(|&i| cover.join(&block).join(&item(spec, i)).mass() > eps_j) {
            let before = masses.last().unwrap().clone();
            for n in k + 1..=i {
                block = block.meet(&item(spec, n));
            }
            let after = block.mass();
            if before - &after <= gap {
                return Err(Error::Internal(format!("absorbing item {i} into block {j} removed too little mass")));
            }
            masses.push(after);
            if Rational::from_integer((masses.len() - 1).into()) > max_absorptions {
                return Err(Error::Internal(format!("block {j} absorbed more than {max_absorptions} times")));
            }
            k = i;
        }
        cover = cover.join(&block);
        if cover.mass() > eps_j {
            return Err(Error::Internal(format!("cover mass exceeds eps_{j} after block {j}")));
        }
        blocks.push(Block {
            start: s,
            end: k,
            value: block,
            masses,
        });
        if s >= spec.periodic_start() {
            stabilized = true;
            break;
        }
        s = k + 1;
    }
    if cover.mass() > *sched.eps_prime() || cover.mass().is_negative() {
        return Err(Error::Internal("cover mass exceeds eps'".into()));
    }
    if blocks.is_empty() && !cover.mass().is_zero() {
        return Err(Error::Internal("empty decomposition with nonzero cover".into()));
    }
    Ok(BlockCover {
        cover,
        decomposition: BlockDecomposition { blocks },
        stabilized,
    })
}

/// An open set of measure `≤ ε'` containing `liminf U_n`.
pub fn conidis_cover(spec: &SeqSpec<OpenSet>, sched: &EpsilonSchedule, block_cap: Option<usize>) -> Result<BlockCover<OpenSet>> {
    block_cover(spec, sched, block_cap)
}

/// A basic function `φ` with `∫φ ≤ ε'` and `liminf f_n ≤ φ`.
pub fn fatou_bound(spec: &SeqSpec<BasicFunc>, sched: &EpsilonSchedule, block_cap: Option<usize>) -> Result<BlockCover<BasicFunc>> {
    block_cover(spec, sched, block_cap)
}
