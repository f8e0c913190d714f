//! Bottom-up evaluation of an ADF against a set of present factors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Adf, Child, Verdict};
use crate::error::{Error, Result};
use crate::model::{FactorSet, Side};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeTrace {
    pub node: String,
    pub verdict: Verdict,
    /// Index of the fired rule in the node's rule list.
    pub rule: usize,
    pub default: bool,
    pub justification: Option<String>,
    /// Children that made the fired condition true.
    pub witnesses: Vec<Child>,
    /// The side this verdict favours.
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationTrace {
    pub root: String,
    pub factors: FactorSet,
    pub nodes: BTreeMap<String, NodeTrace>,
}

impl EvaluationTrace {
    pub fn node(&self, name: &str) -> Result<&NodeTrace> {
        self.nodes
            .get(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.nodes.get(name).map(|t| t.verdict)
    }

    pub fn root_verdict(&self) -> Verdict {
        self.nodes[&self.root].verdict
    }

    /// The side the whole framework finds for.
    pub fn outcome(&self) -> Side {
        self.nodes[&self.root].side
    }
}

/// Evaluates every node reachable from the root, children first.
pub fn evaluate(adf: &Adf, factors: &FactorSet) -> Result<EvaluationTrace> {
    let reachable = adf.reachable();
    let mut nodes: BTreeMap<String, NodeTrace> = BTreeMap::new();
    for name in adf.topological_order()? {
        if !reachable.contains(&name) {
            continue;
        }
        let node = adf.node(&name)?;
        let value = |c: &Child| match c {
            Child::Factor(f) => factors.contains(f),
            Child::Node(n) => nodes.get(n).is_some_and(|t| t.verdict.is_accept()),
        };
        let (index, rule) = node
            .rules
            .iter()
            .enumerate()
            .find(|(_, r)| r.condition.as_ref().is_none_or(|c| c.holds(&value)))
            .ok_or_else(|| Error::Undecidable(name.clone()))?;
        let witnesses = rule
            .condition
            .as_ref()
            .map(|c| c.witnesses(&value))
            .unwrap_or_default();
        let trace = NodeTrace {
            node: name.clone(),
            verdict: rule.verdict,
            rule: index,
            default: rule.is_default(),
            justification: rule.justification.clone(),
            witnesses,
            side: adf.polarity(&name).side_of(rule.verdict),
        };
        log::trace!("{name}: {} via rule {index}", trace.verdict);
        nodes.insert(name, trace);
    }
    Ok(EvaluationTrace {
        root: adf.root().to_string(),
        factors: factors.clone(),
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adf::{parse_adf, trade_secrets};
    use crate::model::factor_set;

    #[test]
    fn bribed_is_for_plaintiff() {
        let adf = trade_secrets();
        let t = evaluate(&adf, &factor_set(["F2p", "F6p", "F10d", "F16d"])).unwrap();
        assert_eq!(t.outcome(), Side::Plaintiff);
        assert_eq!(t.verdict("MeasuresOutsiders"), Some(Verdict::Reject));
        assert_eq!(t.verdict("MaintainSecrecy"), Some(Verdict::Accept));
        assert_eq!(t.verdict("InfoObtainable"), Some(Verdict::Accept));
        assert_eq!(t.verdict("InfoValuable"), Some(Verdict::Accept));
        assert_eq!(t.node("InfoValuable").unwrap().justification.as_deref(), Some("Mason"));
        assert_eq!(t.verdict("IllegalAct"), Some(Verdict::Accept));
    }

    #[test]
    fn no_measures_is_for_defendant() {
        let adf = trade_secrets();
        let t = evaluate(&adf, &factor_set(["F2p", "F10d", "F24d"])).unwrap();
        assert_eq!(t.outcome(), Side::Defendant);
        assert_eq!(t.verdict("InfoTradeSecret"), Some(Verdict::Reject));
        assert_eq!(t.verdict("InfoMisappropriated"), Some(Verdict::Accept));
    }

    #[test]
    fn undecidable_without_default() {
        let adf = parse_adf("ROOT A\nNODE A\nCHILDREN F1d\nACCEPT IF F1d\n").unwrap();
        assert!(matches!(
            evaluate(&adf, &FactorSet::new()),
            Err(Error::Undecidable(n)) if n == "A"
        ));
        assert!(evaluate(&adf, &factor_set(["F1d"])).is_ok());
    }

    #[test]
    fn or_witnesses_only_satisfied_branches() {
        let adf = trade_secrets();
        let t = evaluate(&adf, &factor_set(["F20d", "F10d"])).unwrap();
        let io = t.node("InfoObtainable").unwrap();
        assert_eq!(io.witnesses, vec![Child::Factor("F20d".into())]);
        let ms = t.node("MaintainSecrecy").unwrap();
        assert_eq!(ms.witnesses, vec![Child::Node("MeasuresOutsiders".into())]);
    }
}
