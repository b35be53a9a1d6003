//! Exact finite-scale constructions from effective measure theory on
//! Cantor space: liminf covers, threshold covers of slowly converging
//! series, complexity tables from a toy machine and the randomness tests
//! built from them.

pub mod bits;
pub mod complexity;
pub mod cover;
pub mod error;
pub mod format;
pub mod generate;
pub mod measure;
pub mod randomness;
pub mod rational;

pub use bits::Bits;
pub use complexity::{ComplexityTable, ModelKind, PlainModel, PrefixModel};
pub use error::{Error, Result};
pub use measure::{BasicFunc, BasicFunc2D, Box2D, LazyPoint, OpenSet, OpenSet2D, SeqSpec, StepFn, Tail};
pub use randomness::SeriesSpec;
pub use rational::{Extended, Rational};
