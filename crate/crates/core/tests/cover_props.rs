mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cover_matches_brute_force((s, spec) in common::arb_cover_case(), exponent in -12i64..=12) {
        if let Err(e) = common::check_cover_case(&s, &spec, exponent) {
            prop_assert!(false, "{}", e);
        }
    }
}
