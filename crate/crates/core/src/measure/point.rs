use crate::bits::Bits;

/// The eventually periodic sequence `prefix · cycle · cycle · …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LazyPoint {
    prefix: Bits,
    cycle: Bits,
}

impl LazyPoint {
    pub fn new(prefix: Bits, cycle: Bits) -> Option<Self> {
        (!cycle.is_empty()).then_some(LazyPoint { prefix, cycle })
    }

    pub fn prefix(&self) -> &Bits {
        &self.prefix
    }

    pub fn cycle(&self) -> &Bits {
        &self.cycle
    }

    /// Bit `i` (0-based).
    pub fn bit(&self, i: usize) -> bool {
        match self.prefix.get(i) {
            Some(b) => b,
            None => {
                let j = (i - self.prefix.len()) % self.cycle.len();
                self.cycle.get(j).expect("cycle index in range")
            }
        }
    }

    /// The first `n` bits.
    pub fn first(&self, n: usize) -> Bits {
        Bits::from_bools((0..n).map(|i| self.bit(i)))
    }

    /// Every point with prefix length at most `max_prefix` and cycle length
    /// in `1..=max_cycle`.
    pub fn enumerate(max_prefix: usize, max_cycle: usize) -> Vec<LazyPoint> {
        let mut out = Vec::new();
        for prefix in Bits::all_up_to(max_prefix) {
            for clen in 1..=max_cycle {
                for cycle in Bits::all_of_length(clen) {
                    out.push(LazyPoint {
                        prefix: prefix.clone(),
                        cycle,
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn unrolls_cycle() {
        let p = LazyPoint::new(bits("1"), bits("01")).unwrap();
        assert_eq!(p.first(6), bits("101010"));
        assert!(LazyPoint::new(bits("1"), bits("")).is_none());
        assert_eq!(LazyPoint::enumerate(5, 3).len(), 63 * 14);
    }
}
