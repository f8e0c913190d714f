//! Issue spotting: the lowest nodes whose present factors favour both sides.
//!
//! The search runs top-down. A factor housed directly at a node is claimed
//! by that node, so a child only sees the present factors that neither it
//! nor an ancestor houses directly. A node is an issue when its available
//! factors span both sides and no child's available factors do.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Adf;
use crate::model::{FactorCatalogue, FactorSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub node: String,
    pub plaintiff_factors: FactorSet,
    pub defendant_factors: FactorSet,
}

impl Issue {
    pub fn factors(&self) -> FactorSet {
        self.plaintiff_factors
            .union(&self.defendant_factors)
            .cloned()
            .collect()
    }
}

fn spans(set: &FactorSet, catalogue: &FactorCatalogue) -> bool {
    let (p, d) = catalogue.split(set);
    !p.is_empty() && !d.is_empty()
}

/// Whether the present factors anywhere below `node` favour both sides.
pub fn spans_both(adf: &Adf, node: &str, factors: &FactorSet, catalogue: &FactorCatalogue) -> bool {
    adf.descendant_factors(node)
        .map(|d| spans(&d.intersection(factors).cloned().collect(), catalogue))
        .unwrap_or(false)
}

/// Issues in depth-first order from the root, children in declared order.
pub fn spot_issues(adf: &Adf, factors: &FactorSet, catalogue: &FactorCatalogue) -> Vec<Issue> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    visit(adf, adf.root(), factors, &FactorSet::new(), catalogue, &mut seen, &mut out);
    out
}

fn available(adf: &Adf, node: &str, factors: &FactorSet, claimed: &FactorSet) -> FactorSet {
    adf.descendant_factors(node)
        .map(|d| {
            d.intersection(factors)
                .filter(|f| !claimed.contains(*f))
                .cloned()
                .collect()
        })
        .unwrap_or_default()
}

fn visit(
    adf: &Adf,
    name: &str,
    factors: &FactorSet,
    claimed: &FactorSet,
    catalogue: &FactorCatalogue,
    seen: &mut BTreeSet<String>,
    out: &mut Vec<Issue>,
) {
    let here = available(adf, name, factors, claimed);
    if !spans(&here, catalogue) {
        return;
    }
    let Ok(node) = adf.node(name) else { return };
    let mut below = claimed.clone();
    below.extend(node.factor_children().cloned());
    let contested: Vec<&str> = node
        .child_nodes()
        .filter(|c| spans(&available(adf, c, factors, &below), catalogue))
        .collect();
    if contested.is_empty() {
        if seen.insert(name.to_string()) {
            let (p, d) = catalogue.split(&here);
            out.push(Issue {
                node: name.to_string(),
                plaintiff_factors: p,
                defendant_factors: d,
            });
        }
        return;
    }
    for child in contested {
        visit(adf, child, factors, &below, catalogue, seen, out);
    }
}
