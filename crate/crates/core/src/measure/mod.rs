//! Exact measure theory on Cantor space and on `Ω × ℝ≥0`.
//!
//! Open sets are finite unions of cylinders `xΩ` kept in canonical form,
//! step functions depend on a finite prefix, and every measure and
//! integral is an exact [`Rational`](crate::Rational).

mod basic;
mod basic2d;
mod liminf;
mod openset;
mod openset2d;
mod point;
mod seq;

pub use basic::{BasicFunc, FuncOp};
pub use basic2d::{BasicFunc2D, StepFn};
pub use liminf::{liminf_pointwise, liminf_sets};
pub use openset::{cylinder_measure, OpenSet, SetOp};
pub use openset2d::{Box2D, IntervalSet, OpenSet2D};
pub use point::LazyPoint;
pub use seq::{SeqSpec, Tail};
