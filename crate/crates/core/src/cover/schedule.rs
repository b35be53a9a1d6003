use num_traits::Signed;

use crate::error::{invalid, Result};
use crate::rational::{pow2, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsilonRule {
    /// `ε_j = ε' - (ε' - ε) 2^{-j}`.
    GeometricGap,
    /// `ε_1, ε_2, ...` given explicitly; the construction stops when they run out.
    Explicit(Vec<Rational>),
}

/// A strictly increasing sequence `ε < ε_1 < ε_2 < ... < ε'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSchedule {
    eps: Rational,
    eps_prime: Rational,
    rule: EpsilonRule,
}

impl EpsilonSchedule {
    pub fn new(eps: Rational, eps_prime: Rational, rule: EpsilonRule) -> Result<Self> {
        if !eps.is_positive() || eps >= eps_prime {
            return Err(invalid(format!("need 0 < eps < eps' (got {eps}, {eps_prime})")));
        }
        if let EpsilonRule::Explicit(list) = &rule {
            let mut prev = &eps;
            for e in list {
                if e <= prev || *e >= eps_prime {
                    return Err(invalid(format!("explicit epsilons must increase strictly inside ({eps}, {eps_prime})")));
                }
                prev = e;
            }
        }
        Ok(EpsilonSchedule { eps, eps_prime, rule })
    }

    pub fn geometric(eps: Rational, eps_prime: Rational) -> Result<Self> {
        Self::new(eps, eps_prime, EpsilonRule::GeometricGap)
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn eps_prime(&self) -> &Rational {
        &self.eps_prime
    }

    pub fn rule(&self) -> &EpsilonRule {
        &self.rule
    }

    /// `ε_j`, with `ε_0 = ε`. `None` once an explicit list is exhausted.
    pub fn get(&self, j: usize) -> Option<Rational> {
        if j == 0 {
            return Some(self.eps.clone());
        }
        match &self.rule {
            EpsilonRule::GeometricGap => {
                Some(&self.eps_prime - (&self.eps_prime - &self.eps) * pow2(-(j as i64)))
            }
            EpsilonRule::Explicit(list) => list.get(j - 1).cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn geometric_gap_values() {
        let s = EpsilonSchedule::geometric(ratio(1, 2), ratio(3, 4)).unwrap();
        assert_eq!(s.get(0), Some(ratio(1, 2)));
        assert_eq!(s.get(1), Some(ratio(5, 8)));
        assert_eq!(s.get(2), Some(ratio(11, 16)));
        assert!((1..40).all(|j| s.get(j).unwrap() < s.get(j + 1).unwrap() && s.get(j).unwrap() < ratio(3, 4)));
    }

    #[test]
    fn explicit_validation() {
        let ok = EpsilonSchedule::new(ratio(1, 4), ratio(1, 2), EpsilonRule::Explicit(vec![ratio(1, 3)])).unwrap();
        assert_eq!(ok.get(1), Some(ratio(1, 3)));
        assert_eq!(ok.get(2), None);
        assert!(EpsilonSchedule::new(ratio(1, 4), ratio(1, 2), EpsilonRule::Explicit(vec![ratio(1, 2)])).is_err());
        assert!(EpsilonSchedule::new(ratio(1, 4), ratio(1, 2), EpsilonRule::Explicit(vec![ratio(1, 3), ratio(1, 3)])).is_err());
        assert!(EpsilonSchedule::geometric(int(0), int(1)).is_err());
        assert!(EpsilonSchedule::geometric(int(1), int(1)).is_err());
    }
}
