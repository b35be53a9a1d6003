//! TOML job configurations.
//!
//! Every number that feeds a construction is an exact rational written as
//! a string `"p/q"` or an integer. Decimal literals are rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use randlab_core::rational::{int, parse_rational};
use randlab_core::Rational;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config error at line {line}, column {column}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ConfigError {
    pub fn general(message: impl Into<String>) -> Self {
        ConfigError {
            line: 1,
            column: 1,
            message: message.into(),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses `text` as the config type `T`, mapping errors to line and column.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ConfigError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        ConfigError {
            line,
            column,
            message: e.message().to_string(),
        }
    })
}

/// An exact rational from `"p/q"` or an integer literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact rational written as \"p/q\" or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                i64::try_from(v).map(|v| Q(int(v))).map_err(|_| E::custom("integer out of range"))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
                Err(E::custom(format!("inexact decimal literal {v}; write it as \"p/q\"")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// A file-format object given by path or inline text.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectRef {
    pub file: Option<PathBuf>,
    pub inline: Option<String>,
}

impl ObjectRef {
    pub fn load(&self, base: &Path) -> Result<String, ConfigError> {
        match (&self.file, &self.inline) {
            (Some(f), None) => {
                let path = base.join(f);
                std::fs::read_to_string(&path)
                    .map_err(|e| ConfigError::general(format!("cannot read {}: {e}", path.display())))
            }
            (None, Some(text)) => Ok(text.clone()),
            _ => Err(ConfigError::general("an object needs exactly one of `file` or `inline`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKindConfig {
    Plain,
    Prefix,
}

impl From<ModelKindConfig> for randlab_core::ModelKind {
    fn from(k: ModelKindConfig) -> Self {
        match k {
            ModelKindConfig::Plain => randlab_core::ModelKind::Plain,
            ModelKindConfig::Prefix => randlab_core::ModelKind::Prefix,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineConfig {
    pub model: ModelKindConfig,
    pub max_program_length: usize,
    pub step_budget: u64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

fn default_n_max() -> usize {
    12
}

/// A complexity table: from a file, inline, or enumerated by the toy machine.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRef {
    pub file: Option<PathBuf>,
    pub inline: Option<String>,
    pub machine: Option<MachineConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailConfig {
    Zero,
    RepeatLast,
    Cycle(usize),
}

impl From<TailConfig> for randlab_core::Tail {
    fn from(t: TailConfig) -> Self {
        match t {
            TailConfig::Zero => randlab_core::Tail::Zero,
            TailConfig::RepeatLast => randlab_core::Tail::RepeatLast,
            TailConfig::Cycle(p) => randlab_core::Tail::Cycle(p),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqConfig {
    pub items: Vec<ObjectRef>,
    pub tail: TailConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailSumConfig {
    Geometric { first: Q, ratio: Q },
    Telescoping { scale: Q },
    ExplicitZero,
}

/// Either explicit `items` (with `tail` and optional `tail_sum`), or the
/// first `listed` terms of a `tail_sum` formula.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub items: Option<Vec<Q>>,
    pub listed: Option<usize>,
    pub tail: Option<TailConfig>,
    pub tail_sum: Option<TailSumConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleConfig {
    GeometricGap,
    Explicit(Vec<Q>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayScheduleConfig {
    RowMajor,
    Diagonal,
    Explicit(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomConfig {
    pub count: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsConfig {
    pub max_prefix: usize,
    pub max_cycle: usize,
}

impl Default for PointsConfig {
    fn default() -> Self {
        PointsConfig {
            max_prefix: 5,
            max_cycle: 3,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectVerdict {
    BoundedWitnessed,
    Inconclusive,
    Violated,
    ViolatedAt(usize),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateModelJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub model: TableRef,
    pub expect_digest: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateMachineJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub machine: MachineConfig,
    pub expect_digest: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub plain: TableRef,
    pub prefix: TableRef,
    /// The string to profile; drawn from the seed when absent.
    pub x: Option<String>,
    pub length: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlainTestJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub model: TableRef,
    /// Every `m` in `0..=m_max` is evaluated.
    pub m_max: u32,
    pub depth_cap: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GacsJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub model: TableRef,
    pub depth: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailsCase {
    pub name: Option<String>,
    pub a: SeriesConfig,
    pub b: SeriesConfig,
    pub c: Q,
    pub horizon: usize,
    pub expect: Option<ExpectVerdict>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayConfig {
    #[serde(default)]
    pub matrices: Vec<Vec<Vec<Q>>>,
    pub schedule: DelayScheduleConfig,
    pub random: Option<RandomConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailsJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub cases: Vec<TailsCase>,
    pub delay: Option<DelayConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConidisJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub sets: Option<SeqConfig>,
    pub eps: Option<Q>,
    pub eps_prime: Option<Q>,
    pub schedule: Option<ScheduleConfig>,
    pub max_blocks: Option<usize>,
    pub random: Option<RandomConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FatouJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub functions: Option<SeqConfig>,
    pub eps: Option<Q>,
    pub eps_prime: Option<Q>,
    pub schedule: Option<ScheduleConfig>,
    pub max_blocks: Option<usize>,
    pub points: Option<PointsConfig>,
    pub random: Option<RandomConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlowCoverJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub functions: Option<SeqConfig>,
    pub eps: Option<Q>,
    pub random: Option<RandomConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlowCover2dJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub functions: Option<SeqConfig>,
    pub eps: Option<Q>,
    pub rho: Option<SeriesConfig>,
    pub random: Option<RandomConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QPipelineJob {
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub functions: SeqConfig,
    pub a: SeriesConfig,
    pub rho: SeriesConfig,
    pub k_min: i64,
    pub k_max: i64,
    pub points: Option<PointsConfig>,
}
