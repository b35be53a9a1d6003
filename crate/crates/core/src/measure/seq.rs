use crate::error::{invalid, Result};

/// How a finitely listed sequence continues past its last item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Empty set / zero function / 0 forever.
    Zero,
    RepeatLast,
    /// The last `p` items repeat forever.
    Cycle(usize),
}

/// A finite list `o_1 … o_L` plus a tail rule standing in for an infinite
/// effective sequence. Indices are 1-based throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqSpec<T> {
    items: Vec<T>,
    tail: Tail,
}

impl<T> SeqSpec<T> {
    pub fn new(items: Vec<T>, tail: Tail) -> Result<Self> {
        if items.is_empty() {
            return Err(invalid("sequence needs at least one explicit item"));
        }
        if let Tail::Cycle(p) = tail {
            if p == 0 || p > items.len() {
                return Err(invalid(format!(
                    "cycle length {p} outside 1..={}",
                    items.len()
                )));
            }
        }
        Ok(SeqSpec { items, tail })
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// `L`, the number of explicit items.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length of one tail period.
    pub fn period(&self) -> usize {
        match self.tail {
            Tail::Zero | Tail::RepeatLast => 1,
            Tail::Cycle(p) => p,
        }
    }

    /// First index from which the sequence is periodic with [`period`](Self::period).
    pub fn periodic_start(&self) -> usize {
        let l = self.items.len();
        match self.tail {
            Tail::Zero => l + 1,
            Tail::RepeatLast => l,
            Tail::Cycle(p) => l - p + 1,
        }
    }

    /// Item `n ≥ 1`; `None` stands for the zero element of a `Zero` tail.
    pub fn get(&self, n: usize) -> Option<&T> {
        assert!(n >= 1, "sequence indices are 1-based");
        let l = self.items.len();
        if n <= l {
            return Some(&self.items[n - 1]);
        }
        match self.tail {
            Tail::Zero => None,
            Tail::RepeatLast => self.items.last(),
            Tail::Cycle(p) => Some(&self.items[l - p + (n - l - 1) % p]),
        }
    }

    /// The explicit list followed by one full tail period.
    pub fn horizon(&self) -> usize {
        self.items.len() + self.period()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SeqSpec<U> {
        SeqSpec {
            items: self.items.iter().map(f).collect(),
            tail: self.tail,
        }
    }

    pub fn require_zero_tail(&self, what: &str) -> Result<()> {
        if self.tail != Tail::Zero {
            return Err(invalid(format!("{what} requires a ZERO tail")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_rules() {
        let s = SeqSpec::new(vec![1, 2, 3], Tail::Cycle(2)).unwrap();
        let v: Vec<i32> = (1..=8).map(|n| *s.get(n).unwrap()).collect();
        assert_eq!(v, [1, 2, 3, 2, 3, 2, 3, 2]);
        assert_eq!(s.periodic_start(), 2);

        let r = SeqSpec::new(vec![1, 2], Tail::RepeatLast).unwrap();
        assert_eq!(r.get(5), Some(&2));
        let z = SeqSpec::new(vec![1, 2], Tail::Zero).unwrap();
        assert_eq!(z.get(3), None);
        assert_eq!(z.periodic_start(), 3);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SeqSpec::<i32>::new(vec![], Tail::Zero).is_err());
        assert!(SeqSpec::new(vec![1], Tail::Cycle(2)).is_err());
        assert!(SeqSpec::new(vec![1], Tail::Cycle(0)).is_err());
    }
}
