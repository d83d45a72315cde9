mod common;

use common::props::*;
use proptest::prelude::*;

#[test]
fn script_round_trip_is_exhaustive() {
    assert_eq!(check_script_block(), 279);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn empty_rule_set_is_identity(input in lexical_string()) {
        check_identity(&input)?;
    }

    #[test]
    fn realization_is_deterministic(input in lexical_string()) {
        check_determinism(&input)?;
    }

    #[test]
    fn traces_replay_to_the_output(input in prop_oneof![lexical_string(), morph_string()]) {
        check_trace(&input)?;
    }

    #[test]
    fn sequence_count_matches_brute_force(case in signature_case()) {
        check_sequence_count(&case)?;
    }

    #[test]
    fn aggregate_ignores_order(case in aggregate_case()) {
        check_aggregate_order(&case)?;
    }
}

#[test]
fn parallel_runs_are_byte_identical() {
    assert!(parallel_runs_agree());
}
