mod common;

use proptest::prelude::*;

use common::props::*;
use issuewise::adf::trade_secrets;
use issuewise::model::cato_cases;
use issuewise::precedent::{Model, Preference};
use issuewise::{FactorSet, Side};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn corpus_survives_round_trip(cases in case_lists()) {
        prop_assert!(corpus_round_trip(&cases).is_ok(), "{:?}", corpus_round_trip(&cases));
    }

    #[test]
    fn first_satisfied_rule_fires(factors in raw_factor_sets()) {
        let r = rule_order_soundness(&trade_secrets(), &factors);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn issues_are_lowest_contested_nodes(factors in factor_sets()) {
        let r = issue_lowest(&trade_secrets(), &factors);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn pruning_yields_a_subtree(factors in factor_sets(), side in sides()) {
        let r = pruned_is_subtree(&cato_cases(), &trade_secrets(), &factors, side);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn composite_factor_is_monotone(
        x in 0.0f64..120.0, y in 0.0f64..100.0, dx in 0.0f64..60.0, dy in 0.0f64..60.0,
    ) {
        let r = composite_monotone([x, y], [dx, dy]);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn a_fortiori_is_monotone(
        weaker in factor_sets(), stronger in factor_sets(),
        winning in factor_sets(), losing in factor_sets(), extra in factor_sets(),
    ) {
        let pref = Preference {
            node: "N".into(),
            weaker,
            stronger,
            model: Model::Results,
            source: "P".into(),
            winner: Side::Plaintiff,
        };
        let r = a_fortiori_monotone(&pref, &winning, &losing, &extra);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn reason_preferences_lie_within_results(
        factors in factor_sets(), picks in prop::collection::vec(0usize..8, 16),
    ) {
        let r = reason_within_results(&trade_secrets(), &factors, &picks);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn dialogue_moves_stay_on_the_tree(factors in factor_sets(), moves in dialogue_moves()) {
        let r = dialogue_safe(&trade_secrets(), &cato_cases(), &factors, &moves);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

#[test]
fn a_fortiori_holds_for_own_factors() {
    let s: FactorSet = issuewise::model::factor_set(["F6p"]);
    let w: FactorSet = issuewise::model::factor_set(["F10d"]);
    let pref = Preference {
        node: "N".into(),
        weaker: w.clone(),
        stronger: s.clone(),
        model: Model::Reason,
        source: "P".into(),
        winner: Side::Plaintiff,
    };
    assert!(pref.a_fortiori(&s, &w));
    assert!(!pref.a_fortiori(&s, &issuewise::model::factor_set(["F10d", "F24d"])));
}
