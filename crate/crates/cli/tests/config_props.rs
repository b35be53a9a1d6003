use proptest::prelude::*;
use randlab_cli::config::{parse, Q};
use randlab_core::rational::ratio;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct One {
    v: Q,
}

proptest! {
    #[test]
    fn fractions_parse_exactly(p in -10_000i64..10_000, q in 1i64..10_000) {
        let text = format!("v = \"{p}/{q}\"\n");
        prop_assert_eq!(parse::<One>(&text).unwrap().v, Q(ratio(p, q)));
    }

    #[test]
    fn integers_parse_exactly(p in any::<i32>()) {
        let text = format!("v = {p}\n");
        prop_assert_eq!(parse::<One>(&text).unwrap().v, Q(ratio(p as i64, 1)));
    }

    #[test]
    fn decimals_are_always_rejected(int_part in 0u32..1000, frac in 1u32..1000, blank in 0usize..4) {
        let pad = "\n".repeat(blank);
        for text in [format!("{pad}v = {int_part}.{frac}\n"), format!("{pad}v = \"{int_part}.{frac}\"\n")] {
            let e = parse::<One>(&text).unwrap_err();
            prop_assert_eq!(e.line, blank + 1);
        }
    }
}
