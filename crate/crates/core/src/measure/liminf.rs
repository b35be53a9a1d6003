use num_traits::Zero;

use crate::measure::{BasicFunc, LazyPoint, OpenSet, SeqSpec, Tail};
use crate::rational::{Extended, Rational};

/// `⋃_N ⋂_{n ≥ N} U_n`, computed by brute force over the explicit list and
/// one tail period. Used as the oracle for cover constructions.
pub fn liminf_sets(spec: &SeqSpec<OpenSet>) -> OpenSet {
    if spec.tail() == Tail::Zero {
        return OpenSet::empty();
    }
    let l = spec.len();
    let cycle = (l + 1..=spec.horizon()).fold(OpenSet::full(), |acc, n| {
        acc.intersect(spec.get(n).expect("non-zero tail"))
    });
    let mut result = OpenSet::empty();
    for start in 1..=l + 1 {
        let mut inter = cycle.clone();
        for n in start..=l {
            if inter.is_empty() {
                break;
            }
            inter = inter.intersect(spec.get(n).expect("explicit item"));
        }
        result = result.union(&inter);
    }
    result
}

/// `liminf_n f_n(p)` under the tail rule.
pub fn liminf_pointwise(spec: &SeqSpec<BasicFunc>, p: &LazyPoint) -> Extended {
    if spec.tail() == Tail::Zero {
        return Extended::Finite(Rational::zero());
    }
    let start = spec.periodic_start();
    let min = (start..start + spec.period())
        .map(|n| spec.get(n).expect("non-zero tail").eval_point(p))
        .min()
        .expect("period is at least one");
    Extended::Finite(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rational::int;

    fn set(x: &str) -> OpenSet {
        OpenSet::cylinder(bits(x))
    }

    #[test]
    fn set_liminf_examples() {
        let a = OpenSet::from_cylinders([bits("01"), bits("1")]);
        let s = SeqSpec::new(vec![a.clone()], Tail::RepeatLast).unwrap();
        assert_eq!(liminf_sets(&s), a);

        let s = SeqSpec::new(vec![set("0"), set("1")], Tail::Cycle(2)).unwrap();
        assert!(liminf_sets(&s).is_empty());

        let s = SeqSpec::new(vec![set("0"), set("00")], Tail::RepeatLast).unwrap();
        assert_eq!(liminf_sets(&s), set("00"));

        let s = SeqSpec::new(vec![set("0")], Tail::Zero).unwrap();
        assert!(liminf_sets(&s).is_empty());
    }

    #[test]
    fn pointwise_liminf_examples() {
        let f = BasicFunc::scaled_indicator(bits("0"), int(2));
        let g = BasicFunc::scaled_indicator(bits("0"), int(3));
        let s = SeqSpec::new(vec![f.clone(), g.clone()], Tail::Cycle(2)).unwrap();
        let zeros = LazyPoint::new(bits(""), bits("0")).unwrap();
        let ones = LazyPoint::new(bits(""), bits("1")).unwrap();
        assert_eq!(liminf_pointwise(&s, &zeros), Extended::Finite(int(2)));
        assert_eq!(liminf_pointwise(&s, &ones), Extended::Finite(int(0)));

        let z = SeqSpec::new(vec![f, g], Tail::Zero).unwrap();
        assert_eq!(liminf_pointwise(&z, &zeros), Extended::Finite(int(0)));
    }
}
