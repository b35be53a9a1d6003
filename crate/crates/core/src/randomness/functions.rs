use std::collections::BTreeMap;

use num_traits::Zero;

use crate::bits::Bits;
use crate::complexity::{PlainModel, PrefixModel};
use crate::error::{Error, Result};
use crate::measure::BasicFunc;
use crate::rational::{pow2, Rational};

/// `f_m = Σ_{C(x) < m} 2^{|x|-m} χ_{xΩ}`.
///
/// Fails when some string with `C(x) < m` is longer than `depth_cap`.
pub fn plain_test_fn(model: &PlainModel, m: u32, depth_cap: usize) -> Result<BasicFunc> {
    let terms: Vec<(&Bits, Rational)> = model
        .table()
        .defined()
        .filter(|&(_, c)| c < m)
        .map(|(x, _)| (x, pow2(x.len() as i64 - m as i64)))
        .collect();
    if let Some((x, _)) = terms.iter().find(|(x, _)| x.len() > depth_cap) {
        return Err(Error::Resource(format!(
            "{x:?} has complexity below {m} but is longer than the depth cap {depth_cap}"
        )));
    }
    Ok(BasicFunc::from_cylinder_weights(terms))
}

fn weight(model: &PrefixModel, x: &Bits) -> Result<Rational> {
    Ok(model.semimeasure(x)? * pow2(x.len() as i64))
}

/// `f_i(ω) = 2^{i - K(ω_1..ω_i)}`, a depth-`i` function.
pub fn prefix_test_seq(model: &PrefixModel, i: usize) -> Result<BasicFunc> {
    let mut values = Vec::new();
    for x in Bits::all_of_length(i) {
        let w = weight(model, &x)?;
        values.push((x, w));
    }
    BasicFunc::new(i, values)
}

/// `Σ_{x ≺ ω, |x| ≤ depth} m(x)/P(x)`, accumulated down the prefix tree.
pub fn gacs_sum(model: &PrefixModel, depth: usize) -> Result<BasicFunc> {
    let mut level: BTreeMap<Bits, Rational> = BTreeMap::new();
    level.insert(Bits::new(), weight(model, &Bits::new())?);
    for _ in 0..depth {
        let mut next = BTreeMap::new();
        for (x, acc) in &level {
            for b in [false, true] {
                let y = x.child(b);
                let w = weight(model, &y)? + acc;
                next.insert(y, w);
            }
        }
        level = next;
    }
    BasicFunc::new(depth, level.into_iter().filter(|(_, v)| !v.is_zero()))
}
