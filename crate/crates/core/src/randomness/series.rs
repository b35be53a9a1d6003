use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::measure::{SeqSpec, Tail};
use crate::rational::{int, Rational};

/// Closed form for the terms past the explicit list. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailSum {
    /// `a_i = first · ratio^{i-1}` with `0 ≤ ratio < 1`.
    Geometric { first: Rational, ratio: Rational },
    /// `a_i = scale / (i (i+1))`.
    TelescopingReciprocal { scale: Rational },
    ExplicitZero,
}

impl TailSum {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Malformed(m.to_string()));
        match self {
            TailSum::Geometric { first, ratio } => {
                if first.is_negative() {
                    return bad("geometric tail needs first >= 0");
                }
                if ratio.is_negative() || *ratio >= Rational::one() {
                    return bad("geometric tail needs 0 <= ratio < 1");
                }
            }
            TailSum::TelescopingReciprocal { scale } if scale.is_negative() => {
                return bad("telescoping tail needs scale >= 0");
            }
            _ => {}
        }
        Ok(())
    }

    pub fn term(&self, i: usize) -> Rational {
        debug_assert!(i >= 1);
        match self {
            TailSum::Geometric { first, ratio } => first * pow(ratio, i - 1),
            TailSum::TelescopingReciprocal { scale } => scale / int((i * (i + 1)) as i64),
            TailSum::ExplicitZero => Rational::zero(),
        }
    }

    /// `Σ_{i ≥ n} a_i`.
    pub fn tail_from(&self, n: usize) -> Rational {
        debug_assert!(n >= 1);
        match self {
            TailSum::Geometric { first, ratio } => first * pow(ratio, n - 1) / (Rational::one() - ratio),
            TailSum::TelescopingReciprocal { scale } => scale / int(n as i64),
            TailSum::ExplicitZero => Rational::zero(),
        }
    }
}

fn pow(r: &Rational, e: usize) -> Rational {
    num_traits::pow(r.clone(), e)
}

/// A series of non-negative terms: an explicit list followed by a closed-form
/// tail. The descriptor supplies every term past the list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSpec {
    items: Vec<Rational>,
    tail: TailSum,
}

impl SeriesSpec {
    /// A ZERO tail needs no descriptor. Repeating or cycling tails need one,
    /// unless every repeated item is zero.
    pub fn new(terms: SeqSpec<Rational>, tail_sum: Option<TailSum>) -> Result<Self> {
        if let Some(v) = terms.items().iter().find(|v| v.is_negative()) {
            return Err(Error::Malformed(format!("negative series term {v}")));
        }
        let repeats_zero = {
            let start = terms.periodic_start();
            terms.tail() == Tail::Zero || terms.items()[start - 1..].iter().all(Zero::is_zero)
        };
        let tail = match (terms.tail(), tail_sum) {
            (_, Some(d)) => d,
            _ if repeats_zero => TailSum::ExplicitZero,
            _ => {
                return Err(Error::Malformed(
                    "a series with a non-zero tail needs a closed-form tail descriptor".into(),
                ))
            }
        };
        tail.validate()?;
        Ok(SeriesSpec {
            items: terms.items().to_vec(),
            tail,
        })
    }

    /// Finitely many terms, then zeros.
    pub fn finite(items: Vec<Rational>) -> Result<Self> {
        Self::new(SeqSpec::new(items, Tail::Zero)?, None)
    }

    /// `a_i = first · ratio^{i-1}`, listing the first `listed` terms.
    pub fn geometric(first: Rational, ratio: Rational, listed: usize) -> Result<Self> {
        Self::from_formula(TailSum::Geometric { first, ratio }, listed)
    }

    /// `a_i = scale / (i(i+1))`, listing the first `listed` terms.
    pub fn telescoping(scale: Rational, listed: usize) -> Result<Self> {
        Self::from_formula(TailSum::TelescopingReciprocal { scale }, listed)
    }

    fn from_formula(tail: TailSum, listed: usize) -> Result<Self> {
        tail.validate()?;
        let items: Vec<Rational> = (1..=listed.max(1)).map(|i| tail.term(i)).collect();
        Self::new(SeqSpec::new(items, Tail::RepeatLast)?, Some(tail))
    }

    pub fn items(&self) -> &[Rational] {
        &self.items
    }

    pub fn tail_sum(&self) -> &TailSum {
        &self.tail
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn term(&self, i: usize) -> Rational {
        assert!(i >= 1, "series indices start at 1");
        match self.items.get(i - 1) {
            Some(v) => v.clone(),
            None => self.tail.term(i),
        }
    }

    /// `Σ_{i ≥ n} a_i`, exactly.
    pub fn tail(&self, n: usize) -> Rational {
        assert!(n >= 1, "series indices start at 1");
        let listed: Rational = self.items.iter().skip(n - 1).sum();
        listed + self.tail.tail_from(n.max(self.items.len() + 1))
    }

    pub fn total(&self) -> Rational {
        self.tail(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailsVerdict {
    BoundedWitnessed,
    Violated(usize),
    Inconclusive,
}

/// Does `Σ_{i≥N} a_i ≤ c Σ_{i≥N} b_i` hold for every `N ≥ 1`?
///
/// `N ≤ horizon` is checked term by term. Larger `N` are settled from the
/// closed-form tails when possible, and the answer is `Inconclusive`
/// otherwise.
pub fn tails_bounded(a: &SeriesSpec, b: &SeriesSpec, c: &Rational, horizon: usize) -> Result<TailsVerdict> {
    if !c.is_positive() {
        return Err(invalid("tails_bounded needs c > 0"));
    }
    let holds = |n: usize| a.tail(n) <= c * b.tail(n);
    if let Some(n) = (1..=horizon).find(|&n| !holds(n)) {
        return Ok(TailsVerdict::Violated(n));
    }
    // From M on, both series are pure closed forms.
    let m = a.len().max(b.len()).max(horizon) + 1;
    if !(horizon + 1..=m).all(holds) {
        return Ok(TailsVerdict::Inconclusive);
    }
    // Holds at M; decide whether the ratio of tails can grow afterwards.
    if a.tail.tail_from(m).is_zero() {
        return Ok(TailsVerdict::BoundedWitnessed);
    }
    if b.tail.tail_from(m).is_zero() {
        return Ok(TailsVerdict::Inconclusive);
    }
    use TailSum::*;
    let settled = match (&a.tail, &b.tail) {
        (Geometric { ratio: r, .. }, Geometric { ratio: r2, .. }) => r <= r2,
        (TelescopingReciprocal { .. }, TelescopingReciprocal { .. }) => true,
        (Geometric { ratio: r, .. }, TelescopingReciprocal { .. }) => {
            // N r^{N-1} is non-increasing once N ≥ r/(1-r).
            let knee = (r / (Rational::one() - r)).ceil().to_integer();
            match knee.to_usize() {
                Some(k) if k <= m => true,
                Some(k) if k - m <= 1 << 16 => (m + 1..=k).all(holds),
                _ => false,
            }
        }
        _ => false,
    };
    Ok(if settled {
        TailsVerdict::BoundedWitnessed
    } else {
        TailsVerdict::Inconclusive
    })
}

/// Row `i` approximates the `i`-th term from below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxMatrix {
    rows: Vec<Vec<Rational>>,
}

impl ApproxMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() || rows.iter().any(Vec::is_empty) {
            return Err(Error::Malformed("approximation rows must be non-empty".into()));
        }
        if let Some(v) = rows.iter().flatten().find(|v| v.is_negative()) {
            return Err(Error::Malformed(format!("negative approximation value {v}")));
        }
        Ok(ApproxMatrix { rows })
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// The series of row limits `b_i = f_i^{(J_i)}`.
    pub fn limit_series(&self) -> SeriesSpec {
        SeriesSpec::finite(self.rows.iter().map(|r| r.last().unwrap().clone()).collect())
            .expect("rows are non-empty and non-negative")
    }
}

/// Order in which the `(row, step)` increments are emitted. 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    RowMajor,
    /// Anti-diagonals `row + step = const`, lower rows first.
    Diagonal,
    Explicit(Vec<(usize, usize)>),
}

impl Schedule {
    fn order(&self, m: &ApproxMatrix) -> Result<Vec<(usize, usize)>> {
        let cells: BTreeSet<(usize, usize)> = m
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| (1..=r.len()).map(move |j| (i + 1, j)))
            .collect();
        Ok(match self {
            Schedule::RowMajor => cells.into_iter().collect(),
            Schedule::Diagonal => {
                let mut v: Vec<_> = cells.into_iter().collect();
                v.sort_by_key(|&(i, j)| (i + j, i));
                v
            }
            Schedule::Explicit(list) => {
                let given: BTreeSet<_> = list.iter().copied().collect();
                if given.len() != list.len() || given != cells {
                    return Err(Error::Malformed(
                        "schedule must list every (row, step) pair exactly once".into(),
                    ));
                }
                list.clone()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayedSeries {
    pub series: SeriesSpec,
    /// `first_position[i-1]`: 1-based position of the first increment of row `i`.
    pub first_position: Vec<usize>,
}

impl DelayedSeries {
    /// `σ(N)`: earliest position holding an increment of a row `≥ N`.
    pub fn sigma(&self, n: usize) -> usize {
        self.first_position[n - 1..].iter().copied().min().expect("row index in range")
    }
}

/// Flattens the row increments into one series in schedule order.
pub fn series_delay(m: &ApproxMatrix, schedule: &Schedule) -> Result<DelayedSeries> {
    let order = schedule.order(m)?;
    let mut terms = Vec::with_capacity(order.len());
    let mut first_position = vec![usize::MAX; m.rows.len()];
    for (pos, &(i, j)) in order.iter().enumerate() {
        let row = &m.rows[i - 1];
        let prev = if j == 1 { Rational::zero() } else { row[j - 2].clone() };
        let inc = &row[j - 1] - prev;
        if inc.is_negative() {
            return Err(Error::Malformed(format!("row {i} decreases at step {j}")));
        }
        terms.push(inc);
        first_position[i - 1] = first_position[i - 1].min(pos + 1);
    }
    Ok(DelayedSeries {
        series: SeriesSpec::finite(terms)?,
        first_position,
    })
}

/// Rows `N` where the delayed tail from `σ(N)` falls below the limit tail from `N`.
pub fn tail_domination_violations(m: &ApproxMatrix, d: &DelayedSeries) -> Vec<usize> {
    let limit = m.limit_series();
    (1..=m.rows.len())
        .filter(|&n| d.series.tail(d.sigma(n)) < limit.tail(n))
        .collect()
}
