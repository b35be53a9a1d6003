//! Finite bit strings: program texts, outputs, and cylinder prefixes.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A finite binary string. Ordering is lexicographic with a prefix before
/// its extensions, which matches the textual order of `0`/`1` strings.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub const EMPTY_TOKEN: &'static str = "-";

    pub fn new() -> Self {
        Bits(Vec::new())
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Bits(bits.into_iter().collect())
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_index(value: u64, len: usize) -> Self {
        Bits((0..len).rev().map(|i| i < 64 && (value >> i) & 1 == 1).collect())
    }

    /// Binary expansion of `n` without leading zeros; `0` maps to `"0"`.
    pub fn binary(n: u64) -> Self {
        if n == 0 {
            return Bits(vec![false]);
        }
        let len = 64 - n.leading_zeros() as usize;
        Bits::from_index(n, len)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn child(&self, b: bool) -> Bits {
        let mut v = self.0.clone();
        v.push(b);
        Bits(v)
    }

    pub fn parent(&self) -> Option<Bits> {
        if self.0.is_empty() {
            None
        } else {
            Some(Bits(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<bool> {
        self.0.last().copied()
    }

    pub fn prefix(&self, n: usize) -> Bits {
        Bits(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Bits) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Bits(v)
    }

    /// `x0` and `x1` for the same `x`.
    pub fn are_siblings(a: &Bits, b: &Bits) -> bool {
        a.len() == b.len()
            && !a.is_empty()
            && a.0[..a.len() - 1] == b.0[..b.len() - 1]
            && a.0[a.len() - 1] != b.0[b.len() - 1]
    }

    /// All extensions of `self` of total length `len` in lexicographic order.
    pub fn extensions(&self, len: usize) -> impl Iterator<Item = Bits> + '_ {
        let extra = len.saturating_sub(self.len());
        (0..1u64 << extra).map(move |i| self.concat(&Bits::from_index(i, extra)))
    }

    /// Every string of exactly `len` bits, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Bits> {
        (0..1u64 << len).map(move |i| Bits::from_index(i, len))
    }

    /// Every string of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Bits> {
        (0..=max_len).flat_map(Bits::all_of_length)
    }

    /// Text token used in line formats; the empty string becomes `-`.
    pub fn token(&self) -> String {
        if self.is_empty() {
            Self::EMPTY_TOKEN.to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == Self::EMPTY_TOKEN || s == "λ" {
            return Ok(Bits::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidInput(format!("not a bit string: {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

/// Shorthand for tests and examples: `bits("0110")`.
pub fn bits(s: &str) -> Bits {
    s.parse().expect("literal bit string")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_matches_text() {
        let mut v: Vec<Bits> = ["1", "01", "", "0", "00", "10"].iter().map(|s| bits(s)).collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(s, ["", "0", "00", "01", "1", "10"]);
    }

    #[test]
    fn binary_expansion() {
        assert_eq!(Bits::binary(0), bits("0"));
        assert_eq!(Bits::binary(5), bits("101"));
        assert_eq!(Bits::binary(12), bits("1100"));
    }

    #[test]
    fn siblings_and_prefixes() {
        assert!(Bits::are_siblings(&bits("010"), &bits("011")));
        assert!(!Bits::are_siblings(&bits("010"), &bits("001")));
        assert!(!Bits::are_siblings(&bits(""), &bits("")));
        assert!(bits("01").is_prefix_of(&bits("011")));
        assert!(bits("").is_prefix_of(&bits("1")));
        assert_eq!(bits("1").extensions(3).count(), 4);
        assert_eq!(Bits::all_up_to(3).count(), 15);
        assert_eq!("-".parse::<Bits>().unwrap(), Bits::new());
    }
}
