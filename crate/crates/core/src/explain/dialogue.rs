//! SO? moves up from an issue towards the root; WHY? moves down towards the
//! factors. State is a plain value: each move takes it and returns the next.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{and_list, capitalize, Explainer, IracExplanation};
use crate::adf::{evaluate, Child, EvaluationTrace};
use crate::error::{Error, Result};
use crate::model::{FactorId, FactorSet, Side};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum DialogueMove {
    So,
    Why {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        child: Option<String>,
    },
    Ok,
}

impl DialogueMove {
    fn prompt(&self) -> &'static str {
        match self {
            DialogueMove::So => "So?",
            DialogueMove::Why { .. } => "Why?",
            DialogueMove::Ok => "OK",
        }
    }
}

impl FromStr for DialogueMove {
    type Err = String;

    /// Accepts `so`, `why`, `why:<child>` and `ok`, any case, with or
    /// without a trailing `?`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_end_matches('?');
        let (head, child) = match s.split_once(':') {
            Some((h, c)) => (h, Some(c.trim().to_string())),
            None => (s, None),
        };
        match head.to_ascii_lowercase().as_str() {
            "so" if child.is_none() => Ok(DialogueMove::So),
            "why" => Ok(DialogueMove::Why { child }),
            "ok" if child.is_none() => Ok(DialogueMove::Ok),
            _ => Err(format!("unknown dialogue move `{s}` (expected so, why or ok)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchange {
    /// The user's move as displayed, e.g. `Reply 2: Why?`.
    pub prompt: String,
    pub statement: String,
    /// Number of the reply when it states a node's claim.
    pub reply: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueState {
    pub case: String,
    pub factors: FactorSet,
    pub decision: Side,
    pub issues: Vec<String>,
    /// 1-based index of the issue under discussion.
    pub issue: usize,
    /// IRAC text of the current issue.
    pub seed: String,
    pub focus: String,
    /// Nodes from the root down to the focus.
    pub path: Vec<String>,
    pub visited: BTreeSet<String>,
    /// Set once WHY has nothing left to descend into at the focus.
    pub exhausted: bool,
    pub closed: bool,
    pub replies: usize,
    pub last_reply: Option<usize>,
    pub transcript: Vec<Exchange>,
}

impl Explainer<'_> {
    pub fn dialogue_start(&self, explanation: &IracExplanation, issue: usize) -> Result<DialogueState> {
        let mut state = DialogueState {
            case: explanation.case.clone(),
            factors: explanation.factors.clone(),
            decision: explanation.decision,
            issues: explanation.items.iter().map(|i| i.issue.node.clone()).collect(),
            issue: 0,
            seed: String::new(),
            focus: self.adf.root().to_string(),
            path: Vec::new(),
            visited: BTreeSet::new(),
            exhausted: false,
            closed: false,
            replies: 0,
            last_reply: None,
            transcript: Vec::new(),
        };
        self.focus_issue(&mut state, explanation, issue)?;
        Ok(state)
    }

    /// Turns an ongoing dialogue to another issue, keeping the transcript
    /// and reply numbering.
    pub fn dialogue_switch(
        &self,
        mut state: DialogueState,
        explanation: &IracExplanation,
        issue: usize,
    ) -> Result<DialogueState> {
        self.focus_issue(&mut state, explanation, issue)?;
        state.closed = false;
        Ok(state)
    }

    fn focus_issue(&self, state: &mut DialogueState, explanation: &IracExplanation, issue: usize) -> Result<()> {
        let item = issue
            .checked_sub(1)
            .and_then(|i| explanation.items.get(i))
            .ok_or_else(|| {
                Error::Dialogue(format!(
                    "issue {issue} out of range: {} has {} issue(s)",
                    explanation.case,
                    explanation.items.len()
                ))
            })?;
        state.issue = issue;
        state.seed = item.text();
        state.focus = item.issue.node.clone();
        state.path = self.adf.path_to(&state.focus)?;
        state.visited = BTreeSet::from([state.focus.clone()]);
        state.exhausted = false;
        state.last_reply = None;
        Ok(())
    }

    fn trace_for(&self, state: &DialogueState) -> Result<EvaluationTrace> {
        evaluate(self.adf, &state.factors)
    }

    /// The focus node's claim with its authority.
    pub fn focus_claim(&self, state: &DialogueState) -> Result<String> {
        Ok(self.cited_claim(&self.trace_for(state)?, &state.focus))
    }

    /// Child nodes of `node` with a present factor somewhere below them.
    fn live_children(&self, trace: &EvaluationTrace, node: &str) -> Result<Vec<String>> {
        Ok(self
            .adf
            .node(node)?
            .child_nodes()
            .filter(|c| {
                self.adf
                    .descendant_factors(c)
                    .is_ok_and(|d| !d.is_disjoint(&trace.factors))
            })
            .map(str::to_string)
            .collect())
    }

    fn evidence(&self, trace: &EvaluationTrace, node: &str) -> Result<Option<String>> {
        let t = trace.node(node)?;
        let present = |f: &FactorId| trace.factors.contains(f);
        let factors: Vec<FactorId> = if t.default {
            self.adf
                .node(node)?
                .factor_children()
                .filter(|f| present(f))
                .filter(|f| self.base.catalogue.factor_side(f).ok() == Some(t.side))
                .cloned()
                .collect()
        } else {
            t.witnesses
                .iter()
                .filter_map(|w| match w {
                    Child::Factor(f) if present(f) => Some(f.clone()),
                    _ => None,
                })
                .collect()
        };
        if factors.is_empty() {
            return Ok(None);
        }
        let parts: Vec<String> = factors
            .iter()
            .map(|f| format!("{} ({f})", self.phrases.factor(f)))
            .collect();
        let under: FactorSet = self
            .adf
            .descendant_factors(node)?
            .intersection(&trace.factors)
            .cloned()
            .collect();
        let unopposed = self.base.catalogue.of_side(&under, t.side.opposite()).is_empty();
        Ok(Some(if unopposed {
            format!("The issue was unopposed. Further {}.", and_list(&parts))
        } else {
            format!("{}.", capitalize(&and_list(&parts)))
        }))
    }

    pub fn dialogue_move(
        &self,
        mut state: DialogueState,
        mv: DialogueMove,
    ) -> Result<(DialogueState, String)> {
        if state.closed {
            return Err(Error::Dialogue("the dialogue is closed".into()));
        }
        let trace = self.trace_for(&state)?;
        let prompt = match (&mv, state.last_reply) {
            (DialogueMove::Ok, _) => mv.prompt().to_string(),
            (_, Some(n)) => format!("Reply {n}: {}", mv.prompt()),
            (_, None) => format!("Issue {}: {}", state.issue, mv.prompt()),
        };
        let mut numbered = false;
        let statement = match &mv {
            DialogueMove::Ok => {
                state.closed = true;
                String::new()
            }
            DialogueMove::So => {
                if state.path.len() <= 1 {
                    self.decision_statement(state.decision)
                } else {
                    state.path.pop();
                    state.focus = state.path.last().cloned().unwrap_or_default();
                    state.visited.insert(state.focus.clone());
                    state.exhausted = false;
                    numbered = true;
                    self.cited_claim(&trace, &state.focus)
                }
            }
            DialogueMove::Why { child } => {
                let evidence = self.evidence(&trace, &state.focus)?;
                // Factor evidence settles the node; child branches are only
                // offered when there is none.
                let children = match evidence {
                    Some(_) => Vec::new(),
                    None => self
                        .live_children(&trace, &state.focus)?
                        .into_iter()
                        .filter(|c| !state.visited.contains(c) || child.as_ref() == Some(c))
                        .collect(),
                };
                if let Some(c) = child {
                    if !self.adf.node(&state.focus)?.child_nodes().any(|n| n == c) {
                        return Err(Error::Dialogue(format!("`{c}` is not a child of `{}`", state.focus)));
                    }
                }
                if state.exhausted || (evidence.is_none() && children.is_empty() && child.is_none()) {
                    "No further detail.".to_string()
                } else {
                    let witnesses: Vec<String> = trace
                        .node(&state.focus)?
                        .witnesses
                        .iter()
                        .filter_map(|w| match w {
                            Child::Node(n) => Some(n.clone()),
                            Child::Factor(_) => None,
                        })
                        .collect();
                    let target = child.clone().or_else(|| {
                        children
                            .iter()
                            .find(|c| witnesses.contains(c))
                            .or_else(|| children.first())
                            .cloned()
                    });
                    let mut listed = children.clone();
                    if let Some(t) = &target {
                        if !listed.contains(t) {
                            listed.push(t.clone());
                        }
                    }
                    let mut parts: Vec<String> = evidence.into_iter().collect();
                    parts.extend(listed.iter().map(|c| self.cited_claim(&trace, c)));
                    match target {
                        Some(t) => {
                            state.path.push(t.clone());
                            state.visited.insert(t.clone());
                            state.focus = t;
                            state.exhausted = false;
                            numbered = true;
                        }
                        None => state.exhausted = true,
                    }
                    parts.join(" ")
                }
            }
        };
        let reply = numbered.then(|| {
            state.replies += 1;
            state.last_reply = Some(state.replies);
            state.replies
        });
        state.transcript.push(Exchange {
            prompt,
            statement: statement.clone(),
            reply,
        });
        Ok((state, statement))
    }
}
