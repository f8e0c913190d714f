//! Property checks shared by the proptest suite and the acceptance run.
//! Each returns `Err` with a description of the first counterexample.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::subsequence;

use issuewise::adf::{evaluate, spans_both, spot_issues, Adf, Child};
use issuewise::argument::{build_argument_tree, prune_by_issues};
use issuewise::explain::{DialogueMove, Explainer, PhraseTable};
use issuewise::magnitude::fiscal_domicile;
use issuewise::model::parse_case_corpus;
use issuewise::precedent::{extract_preferences, Model, Preference};
use issuewise::{Case, CaseBase, FactorCatalogue, FactorId, FactorSet, Outcome, Side};

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_ids() -> Vec<String> {
    FactorCatalogue::cato().ids().map(|f| f.to_string()).collect()
}

/// Repairs a raw subset so it satisfies the catalogue's exclusions and
/// implications.
pub fn repair(mut factors: FactorSet, catalogue: &FactorCatalogue) -> FactorSet {
    for (a, b) in &catalogue.exclusions {
        if factors.contains(a) && factors.contains(b) {
            factors.remove(b);
        }
    }
    for (a, b) in &catalogue.implications {
        if factors.contains(a) {
            factors.insert(b.clone());
        }
    }
    factors
}

/// Any subset of the catalogue, valid or not.
pub fn raw_factor_sets() -> impl Strategy<Value = FactorSet> {
    let ids = all_ids();
    let n = ids.len();
    subsequence(ids, 0..=n).prop_map(|v| v.into_iter().map(FactorId::new).collect())
}

/// Subsets that pass case validation.
pub fn factor_sets() -> impl Strategy<Value = FactorSet> {
    raw_factor_sets().prop_map(|f| repair(f, &FactorCatalogue::cato()))
}

pub fn sides() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Plaintiff), Just(Side::Defendant)]
}

pub fn outcomes() -> impl Strategy<Value = Outcome> {
    prop_oneof![Just(Outcome::Plaintiff), Just(Outcome::Defendant), Just(Outcome::Undecided)]
}

pub fn case_lists() -> impl Strategy<Value = Vec<(FactorSet, Outcome, Option<u16>)>> {
    prop::collection::vec((factor_sets(), outcomes(), prop::option::of(1900u16..2030)), 0..8)
}

pub fn corpus_round_trip(cases: &[(FactorSet, Outcome, Option<u16>)]) -> Check {
    let catalogue = FactorCatalogue::cato();
    let built: Vec<Case> = cases
        .iter()
        .enumerate()
        .map(|(i, (factors, outcome, year))| {
            let case = Case::new(format!("Case-{i}"), factors.clone(), *outcome);
            match year {
                Some(y) => case.with_citation(format!("Case {i} v. Other, 1 F.2d {i} ({y})")),
                None => case,
            }
        })
        .collect();
    let base = CaseBase::new(catalogue, built.clone()).map_err(|e| e.to_string())?;
    let back = parse_case_corpus(&base.to_json()).map_err(|e| e.to_string())?;
    ensure(back.cases == built, || format!("round trip changed {built:?} into {:?}", back.cases))
}

/// The fired rule is the first whose condition holds, and the node's
/// verdict is that rule's verdict.
pub fn rule_order_soundness(adf: &Adf, factors: &FactorSet) -> Check {
    let trace = evaluate(adf, factors).map_err(|e| e.to_string())?;
    for (name, t) in &trace.nodes {
        let node = adf.node(name).map_err(|e| e.to_string())?;
        let value = |c: &Child| match c {
            Child::Factor(f) => factors.contains(f),
            Child::Node(n) => trace.nodes[n].verdict == issuewise::adf::Verdict::Accept,
        };
        let first = node
            .rules
            .iter()
            .position(|r| r.condition.as_ref().is_none_or(|c| c.holds(&value)));
        ensure(first == Some(t.rule), || {
            format!("{name}: fired rule {} but first satisfied is {first:?}", t.rule)
        })?;
        ensure(node.rules[t.rule].verdict == t.verdict, || format!("{name}: verdict mismatch"))?;
    }
    Ok(())
}

fn node_descendants(adf: &Adf, node: &str) -> Result<Vec<String>, String> {
    let mut out: Vec<String> = Vec::new();
    let mut stack = vec![node.to_string()];
    while let Some(n) = stack.pop() {
        for c in adf.node(&n).map_err(|e| e.to_string())?.child_nodes() {
            if !out.iter().any(|o| o == c) {
                out.push(c.to_string());
                stack.push(c.to_string());
            }
        }
    }
    Ok(out)
}

/// Issues span both sides, none lies above another, and a case with any
/// contested node has at least one issue.
pub fn issue_lowest(adf: &Adf, factors: &FactorSet) -> Check {
    let cat = FactorCatalogue::cato();
    let issues = spot_issues(adf, factors, &cat);
    for i in &issues {
        ensure(!i.plaintiff_factors.is_empty() && !i.defendant_factors.is_empty(), || {
            format!("{} is one-sided", i.node)
        })?;
        ensure(spans_both(adf, &i.node, factors, &cat), || format!("{} does not span", i.node))?;
        for j in &issues {
            if i.node == j.node {
                continue;
            }
            let below = node_descendants(adf, &i.node)?;
            ensure(!below.contains(&j.node), || format!("issue {} lies above issue {}", i.node, j.node))?;
        }
    }
    let contested = adf.nodes().any(|n| spans_both(adf, &n.name, factors, &cat));
    ensure(contested == !issues.is_empty(), || {
        format!("contested={contested} but {} issues", issues.len())
    })?;
    ensure(contested == spans_both(adf, adf.root(), factors, &cat), || {
        "a contested node below an uncontested root".into()
    })
}

pub fn pruned_is_subtree(base: &CaseBase, adf: &Adf, factors: &FactorSet, side: Side) -> Check {
    let case = Case::new("New", factors.clone(), Outcome::Undecided);
    let Ok(tree) = build_argument_tree(base, adf, &case, side) else {
        return Ok(());
    };
    let issues = spot_issues(adf, factors, &base.catalogue);
    let pruned = prune_by_issues(&tree, &issues, adf);
    ensure(pruned.is_subtree_of(&tree), || format!("pruned tree for {factors:?} is not a subtree"))
}

/// Raising either coordinate never removes the composite factor.
pub fn composite_monotone(point: [f64; 2], delta: [f64; 2]) -> Check {
    let spec = fiscal_domicile();
    let raised = [point[0] + delta[0], point[1] + delta[1]];
    ensure(!spec.applies_at(point) || spec.applies_at(raised), || {
        format!("applies at {point:?} but not at {raised:?}")
    })
}

/// Strengthening the winner or weakening the loser keeps a constraint.
pub fn a_fortiori_monotone(pref: &Preference, winning: &FactorSet, losing: &FactorSet, extra: &FactorSet) -> Check {
    if !pref.a_fortiori(winning, losing) {
        return Ok(());
    }
    let more: FactorSet = winning.union(extra).cloned().collect();
    let less: FactorSet = losing.difference(extra).cloned().collect();
    ensure(pref.a_fortiori(&more, &less), || format!("{pref} lost force"))
}

/// Decides a random case with the ADF, declares a random reason at each
/// contested node, and compares the two models.
pub fn reason_within_results(adf: &Adf, factors: &FactorSet, picks: &[usize]) -> Check {
    let cat = FactorCatalogue::cato();
    let trace = evaluate(adf, factors).map_err(|e| e.to_string())?;
    let outcome = match trace.outcome() {
        Side::Plaintiff => Outcome::Plaintiff,
        Side::Defendant => Outcome::Defendant,
    };
    let mut case = Case::new("Random", factors.clone(), outcome);
    let results = extract_preferences(adf, &case, Model::Results, &cat).map_err(|e| e.to_string())?;
    let mut reasons = BTreeMap::new();
    for (k, p) in results.iter().enumerate() {
        let stronger: Vec<&FactorId> = p.stronger.iter().collect();
        let pick = picks.get(k).copied().unwrap_or(0) % stronger.len();
        reasons.insert(p.node.clone(), FactorSet::from([stronger[pick].clone()]));
    }
    case.declared_reasons = reasons;
    let reason = extract_preferences(adf, &case, Model::Reason, &cat).map_err(|e| e.to_string())?;
    ensure(reason.len() == results.len(), || "models disagree on contested nodes".into())?;
    for (r, s) in reason.iter().zip(&results) {
        ensure(r.node == s.node && r.weaker == s.weaker && r.stronger.is_subset(&s.stronger), || {
            format!("{r} not within {s}")
        })?;
    }
    Ok(())
}

pub fn dialogue_moves() -> impl Strategy<Value = Vec<DialogueMove>> {
    prop::collection::vec(
        prop_oneof![Just(DialogueMove::So), Just(DialogueMove::Why { child: None })],
        0..12,
    )
}

/// SO/WHY never fail on an open dialogue and keep the focus on the path
/// from the root.
pub fn dialogue_safe(adf: &Adf, base: &CaseBase, factors: &FactorSet, moves: &[DialogueMove]) -> Check {
    let phrases = PhraseTable::default();
    let ex = Explainer::new(adf, base, &phrases, Model::Reason);
    let case = Case::new("Random", factors.clone(), Outcome::Undecided);
    let irac = ex.generate_irac(&case).map_err(|e| e.to_string())?;
    for issue in 1..=irac.items.len() {
        let mut state = ex.dialogue_start(&irac, issue).map_err(|e| e.to_string())?;
        for mv in moves {
            let (next, text) = ex.dialogue_move(state, mv.clone()).map_err(|e| e.to_string())?;
            state = next;
            ensure(!text.is_empty(), || format!("empty reply to {mv:?}"))?;
            ensure(state.path.first().map(String::as_str) == Some(adf.root()), || "path leaves the root".into())?;
            ensure(state.path.last() == Some(&state.focus), || "focus is off the path".into())?;
            for pair in state.path.windows(2) {
                let parent = adf.node(&pair[0]).map_err(|e| e.to_string())?;
                ensure(parent.child_nodes().any(|c| c == pair[1]), || {
                    format!("{} is not a child of {}", pair[1], pair[0])
                })?;
            }
        }
        let (closed, _) = ex.dialogue_move(state, DialogueMove::Ok).map_err(|e| e.to_string())?;
        ensure(ex.dialogue_move(closed, DialogueMove::So).is_err(), || "move accepted after OK".into())?;
    }
    Ok(())
}
