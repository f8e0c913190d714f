//! IRAC explanations of decided issues and the SO?/WHY? dialogue.

mod dialogue;
mod render;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adf::{evaluate, spot_issues, Adf, Child, EvaluationTrace, Issue, Verdict};
use crate::error::Result;
use crate::model::{Case, CaseBase, FactorId, FactorSet, Side};
use crate::precedent::{constrains, corpus_preferences, Model, Preference};

pub use dialogue::{DialogueMove, DialogueState, Exchange};
pub use render::{render_irac, render_structured, render_transcript, Format};

pub const PHRASES: &str = include_str!("../../assets/phrases.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodePhrases {
    pub accepted: String,
    pub rejected: String,
}

/// Wording for node claims and factor descriptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhraseTable {
    pub nodes: BTreeMap<String, NodePhrases>,
    pub factors: BTreeMap<String, String>,
}

impl PhraseTable {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn claim(&self, node: &str, verdict: Verdict) -> String {
        match (self.nodes.get(node), verdict) {
            (Some(p), Verdict::Accept) => p.accepted.clone(),
            (Some(p), Verdict::Reject) => p.rejected.clone(),
            (None, Verdict::Accept) => format!("{node} was established"),
            (None, Verdict::Reject) => format!("{node} was not established"),
        }
    }

    pub fn factor(&self, id: &FactorId) -> String {
        self.factors
            .get(id.as_str())
            .cloned()
            .unwrap_or_else(|| format!("{id} is present"))
    }
}

impl Default for PhraseTable {
    fn default() -> Self {
        PhraseTable::from_json(PHRASES).expect("bundled phrase table parses")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IracItem {
    pub issue: Issue,
    pub issue_statement: String,
    /// The case's own contest at the issue, loser's factors below winner's.
    pub rule: Preference,
    /// The rule as stated, e.g. `Secrets-Disclosed-Outsiders ≺ Security-Measures`.
    pub rule_text: String,
    /// Precedent relied on, if any; `None` for statute or this court.
    pub precedent: Option<String>,
    pub citation: String,
    pub rule_statement: String,
    pub application: String,
    pub conclusion: String,
}

impl IracItem {
    pub fn text(&self) -> String {
        format!(
            "{} {} {} {}",
            self.issue_statement, self.rule_statement, self.application, self.conclusion
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IracExplanation {
    pub case: String,
    pub title: String,
    pub factors: FactorSet,
    pub decision: Side,
    pub items: Vec<IracItem>,
}

/// Joins with commas and a final "and".
pub(crate) fn and_list(parts: &[String]) -> String {
    match parts {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

pub(crate) fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Generates explanations against a fixed ADF, corpus and phrase table.
#[derive(Debug, Clone, Copy)]
pub struct Explainer<'a> {
    pub adf: &'a Adf,
    pub base: &'a CaseBase,
    pub phrases: &'a PhraseTable,
    pub model: Model,
}

impl<'a> Explainer<'a> {
    pub fn new(adf: &'a Adf, base: &'a CaseBase, phrases: &'a PhraseTable, model: Model) -> Self {
        Explainer {
            adf,
            base,
            phrases,
            model,
        }
    }

    fn labels(&self, set: &FactorSet) -> String {
        let labels: Vec<String> = set.iter().map(|f| self.base.catalogue.label(f)).collect();
        match labels.as_slice() {
            [one] => one.clone(),
            _ => format!("{{{}}}", labels.join(", ")),
        }
    }

    fn phrases_of(&self, set: &FactorSet) -> String {
        and_list(&set.iter().map(|f| self.phrases.factor(f)).collect::<Vec<_>>())
    }

    /// A justification as cited: case names expand to the corpus citation.
    pub fn cite(&self, justification: &str) -> String {
        self.base
            .get(justification)
            .map(|c| c.title().to_string())
            .unwrap_or_else(|| justification.to_string())
    }

    fn is_precedent(&self, justification: &str) -> bool {
        self.base.get(justification).is_some()
    }

    /// The authority for a node's claim: the fired rule's justification when
    /// it is not a precedent, otherwise the first non-precedent justification
    /// of a rule with the same verdict.
    pub fn claim_citation(&self, trace: &EvaluationTrace, node: &str) -> Option<String> {
        let t = trace.node(node).ok()?;
        let fired = t.justification.clone();
        if let Some(j) = &fired {
            if !self.is_precedent(j) {
                return fired;
            }
        }
        self.adf
            .node(node)
            .ok()?
            .rules
            .iter()
            .filter(|r| r.verdict == t.verdict)
            .filter_map(|r| r.justification.as_deref())
            .find(|j| !self.is_precedent(j))
            .map(str::to_string)
            .or_else(|| fired.map(|j| self.cite(&j)))
    }

    pub fn claim(&self, trace: &EvaluationTrace, node: &str) -> String {
        let verdict = trace.verdict(node).unwrap_or(Verdict::Reject);
        self.phrases.claim(node, verdict)
    }

    /// The claim with its authority in parentheses, as a sentence.
    pub fn cited_claim(&self, trace: &EvaluationTrace, node: &str) -> String {
        match self.claim_citation(trace, node) {
            Some(c) => format!("{} ({c}).", self.claim(trace, node)),
            None => format!("{}.", self.claim(trace, node)),
        }
    }

    pub fn decision_statement(&self, decision: Side) -> String {
        format!("The decision is for the {}.", decision.noun())
    }

    pub fn generate_irac(&self, case: &Case) -> Result<IracExplanation> {
        let trace = evaluate(self.adf, &case.factors)?;
        let issues = spot_issues(self.adf, &case.factors, &self.base.catalogue);
        let prefs = corpus_preferences(self.adf, self.base, self.model)?;
        let mut items = Vec::new();
        for issue in issues {
            let item = if issue.node == self.adf.root() {
                self.root_item(case, &trace, issue)
            } else {
                self.issue_item(case, &trace, issue, &prefs)?
            };
            items.push(item);
        }
        Ok(IracExplanation {
            case: case.name.clone(),
            title: case.title().to_string(),
            factors: case.factors.clone(),
            decision: trace.outcome(),
            items,
        })
    }

    fn issue_item(
        &self,
        case: &Case,
        trace: &EvaluationTrace,
        issue: Issue,
        prefs: &[Preference],
    ) -> Result<IracItem> {
        let node = issue.node.clone();
        let t = trace.node(&node)?;
        let winner = t.side;
        let (winning, losing) = match winner {
            Side::Plaintiff => (&issue.plaintiff_factors, &issue.defendant_factors),
            Side::Defendant => (&issue.defendant_factors, &issue.plaintiff_factors),
        };
        let own_reason = match self.model {
            Model::Reason => case.declared_reasons.get(&node).cloned(),
            Model::Results => None,
        };
        let fired = t.justification.clone().unwrap_or_default();

        let (precedent, stronger, rule_prefix, citation) = if fired == case.name {
            let s = own_reason
                .filter(|r| r.is_subset(winning))
                .unwrap_or_else(|| winning.clone());
            (None, s, "The rule used by this court is", String::new())
        } else {
            let verdict = constrains(prefs, self.adf, &case.factors, &node, &self.base.catalogue)?;
            let mut support: Vec<&Preference> = verdict
                .citations
                .iter()
                .map(|(_, p)| p)
                .filter(|p| p.winner == winner && p.source != case.name)
                .collect();
            let year = |p: &Preference| self.base.get(&p.source).and_then(Case::year).unwrap_or(u32::MAX);
            support.sort_by(|a, b| {
                (a.source != fired, year(a), &a.source).cmp(&(b.source != fired, year(b), &b.source))
            });
            match support.first() {
                Some(p) => (
                    Some(p.source.clone()),
                    p.stronger.clone(),
                    "The rule is",
                    self.cite(&p.source),
                ),
                None => (
                    self.is_precedent(&fired).then(|| fired.clone()),
                    winning.clone(),
                    "The rule is",
                    self.cite(&fired),
                ),
            }
        };

        let rule_text = format!("{} ≺ {}", self.labels(losing), self.labels(&stronger));
        let rule_statement = if citation.is_empty() {
            format!("{rule_prefix} {rule_text}.")
        } else {
            format!("{rule_prefix} {rule_text} ({citation}).")
        };
        let applied: FactorSet = losing.union(&stronger).cloned().collect();
        let ids: Vec<String> = applied.iter().map(|f| f.to_string()).collect();
        let application = format!(
            "The rule applies because {} {} present.",
            and_list(&ids),
            if ids.len() == 1 { "is" } else { "are" }
        );
        let issue_statement = format!(
            "Whether {} when {}, but {}.",
            self.phrases.claim(&node, Verdict::Accept).to_lowercase(),
            self.phrases_of(losing),
            self.phrases_of(winning)
        );
        let conclusion = format!("Therefore, {}.", self.claim(trace, &node).to_lowercase());
        Ok(IracItem {
            rule: Preference {
                node: node.clone(),
                weaker: losing.clone(),
                stronger,
                model: self.model,
                source: case.name.clone(),
                winner,
            },
            issue,
            issue_statement,
            rule_text,
            precedent,
            citation,
            rule_statement,
            application,
            conclusion,
        })
    }

    /// Child nodes with some present factor below them that favour `side`.
    fn children_for(&self, trace: &EvaluationTrace, node: &str, side: Side) -> Vec<String> {
        let Ok(n) = self.adf.node(node) else {
            return Vec::new();
        };
        n.child_nodes()
            .filter(|c| trace.node(c).is_ok_and(|t| t.side == side))
            .filter(|c| {
                self.adf
                    .descendant_factors(c)
                    .is_ok_and(|d| !d.is_disjoint(&trace.factors))
            })
            .map(str::to_string)
            .collect()
    }

    /// Follows the fired rules down from `node` to the factors that decided
    /// it, as "claim because F is present (authority)" clauses.
    fn grounds(&self, trace: &EvaluationTrace, node: &str, side: Side, out: &mut Vec<String>) {
        let Ok(t) = trace.node(node) else { return };
        let factors: Vec<&FactorId> = t
            .witnesses
            .iter()
            .filter_map(|w| match w {
                Child::Factor(f) if trace.factors.contains(f) => Some(f),
                _ => None,
            })
            .collect();
        if !factors.is_empty() {
            let ids: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
            let mut clause = format!(
                "{} because {} {} present",
                self.claim(trace, node).to_lowercase(),
                and_list(&ids),
                if ids.len() == 1 { "is" } else { "are" }
            );
            if let Some(j) = &t.justification {
                clause.push_str(&format!(" ({})", self.cite(j)));
            }
            out.push(clause);
            return;
        }
        let below: Vec<String> = if t.default {
            self.children_for(trace, node, side)
        } else {
            t.witnesses
                .iter()
                .filter_map(|w| match w {
                    Child::Node(n) => Some(n.clone()),
                    Child::Factor(_) => None,
                })
                .collect()
        };
        for child in below {
            self.grounds(trace, &child, side, out);
        }
    }

    /// When only the root is contested, the explanation descends into the
    /// branches that decided it.
    fn root_item(&self, case: &Case, trace: &EvaluationTrace, issue: Issue) -> IracItem {
        let root = self.adf.root().to_string();
        let t = &trace.nodes[&root];
        let winner = t.side;
        let (winning, losing) = match winner {
            Side::Plaintiff => (&issue.plaintiff_factors, &issue.defendant_factors),
            Side::Defendant => (&issue.defendant_factors, &issue.plaintiff_factors),
        };
        let won = self.children_for(trace, &root, winner);
        let lost = self.children_for(trace, &root, winner.opposite());
        let claims = |nodes: &[String]| {
            and_list(
                &nodes
                    .iter()
                    .map(|n| self.claim(trace, n).to_lowercase())
                    .collect::<Vec<_>>(),
            )
        };
        let literal = |n: &str| match trace.verdict(n) {
            Some(Verdict::Accept) => n.to_string(),
            _ => format!("not {n}"),
        };
        let antecedent: Vec<String> = won.iter().map(|n| literal(n)).collect();
        let rule_text = format!("if {} then {}", antecedent.join(" and "), literal(&root));
        let citation = t
            .justification
            .as_deref()
            .map(|j| self.cite(j))
            .unwrap_or_default();
        let rule_statement = if citation.is_empty() {
            format!("The rule is {rule_text}.")
        } else {
            format!("The rule is {rule_text} ({citation}).")
        };
        let mut grounds = Vec::new();
        for child in &won {
            self.grounds(trace, child, winner, &mut grounds);
        }
        let issue_statement = if lost.is_empty() {
            format!(
                "Whether {} when {}.",
                self.phrases.claim(&root, Verdict::Accept).to_lowercase(),
                claims(&won)
            )
        } else {
            format!(
                "Whether {} when {}, but {}.",
                self.phrases.claim(&root, Verdict::Accept).to_lowercase(),
                claims(&lost),
                claims(&won)
            )
        };
        IracItem {
            rule: Preference {
                node: root.clone(),
                weaker: losing.clone(),
                stronger: winning.clone(),
                model: self.model,
                source: case.name.clone(),
                winner,
            },
            issue,
            issue_statement,
            rule_text,
            precedent: None,
            citation,
            rule_statement,
            application: format!("The rule applies because {}.", and_list(&grounds)),
            conclusion: format!("Therefore, {}.", self.claim(trace, &root).to_lowercase()),
        }
    }
}
