//! Three-ply precedent arguments: a citation, the opponent's objections,
//! and the proponent's rebuttals, optionally pruned to the contested issues.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::adf::{Adf, Child, Issue};
use crate::error::{Error, Result};
use crate::model::{Case, CaseBase, FactorCatalogue, FactorId, FactorSet, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    Cite,
    DistinguishPrecedentExtra,
    DistinguishNewCaseExtra,
    Counterexample,
    Substitute,
    Cancel,
    Transform,
    DistinguishCounterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Proponent,
    Opponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentNode {
    pub label: String,
    #[serde(rename = "move")]
    pub kind: Move,
    pub actor: Actor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    /// The distinguished or cited factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<FactorId>,
    /// The factor brought in to downplay `factor`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterpart: Option<FactorId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closeness: Option<usize>,
    /// Nearest common ancestor of `factor` and `counterpart`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<String>,
    /// Factors of the cited case or counterexample.
    #[serde(default, skip_serializing_if = "FactorSet::is_empty")]
    pub factors: FactorSet,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ArgumentNode>,
}

impl ArgumentNode {
    fn leaf(label: String, kind: Move, actor: Actor) -> Self {
        ArgumentNode {
            label,
            kind,
            actor,
            case: None,
            factor: None,
            counterpart: None,
            closeness: None,
            via: None,
            factors: FactorSet::new(),
            children: Vec::new(),
        }
    }

    /// All nodes, pre-order.
    pub fn iter(&self) -> Vec<&ArgumentNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.iter());
        }
        out
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ArgumentNode::depth).max().unwrap_or(0)
    }

    /// Shallow equality, ignoring children.
    pub fn same_move(&self, other: &ArgumentNode) -> bool {
        self.label == other.label
            && self.kind == other.kind
            && self.actor == other.actor
            && self.case == other.case
            && self.factor == other.factor
            && self.counterpart == other.counterpart
            && self.closeness == other.closeness
    }

    /// Whether every node of `self` occurs in `other` at the same position.
    pub fn is_subtree_of(&self, other: &ArgumentNode) -> bool {
        self.same_move(other)
            && self
                .children
                .iter()
                .all(|c| other.children.iter().any(|o| c.is_subtree_of(o)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistinctionKind {
    /// A winner's factor in the precedent missing from the new case.
    PrecedentOnlyWinnerFactor,
    /// A loser's factor in the new case missing from the precedent.
    NewCaseOnlyLoserFactor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinction {
    pub kind: DistinctionKind,
    pub factor: FactorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Downplay {
    #[serde(rename = "move")]
    pub kind: Move,
    pub factor: FactorId,
    pub closeness: usize,
    pub via: String,
}

fn overlap(a: &Case, b: &Case) -> usize {
    a.factors.intersection(&b.factors).count()
}

/// Decided cases for `side` sharing the most factors with `new_case`,
/// ordered by name. Empty when no such case shares any factor.
pub fn most_on_point<'a>(base: &'a CaseBase, new_case: &Case, side: Side) -> Vec<&'a Case> {
    let candidates: Vec<&Case> = base
        .decided()
        .filter(|c| c.name != new_case.name && c.outcome.side() == Some(side))
        .collect();
    let best = candidates.iter().map(|c| overlap(c, new_case)).max().unwrap_or(0);
    if best == 0 {
        return Vec::new();
    }
    let mut out: Vec<&Case> = candidates
        .into_iter()
        .filter(|c| overlap(c, new_case) == best)
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

pub fn distinctions(
    precedent: &Case,
    new_case: &Case,
    winner: Side,
    catalogue: &FactorCatalogue,
) -> Vec<Distinction> {
    let winner_extra = catalogue.of_side(
        &precedent.factors.difference(&new_case.factors).cloned().collect(),
        winner,
    );
    let loser_extra = catalogue.of_side(
        &new_case.factors.difference(&precedent.factors).cloned().collect(),
        winner.opposite(),
    );
    winner_extra
        .into_iter()
        .map(|factor| Distinction {
            kind: DistinctionKind::PrecedentOnlyWinnerFactor,
            factor,
        })
        .chain(loser_extra.into_iter().map(|factor| Distinction {
            kind: DistinctionKind::NewCaseOnlyLoserFactor,
            factor,
        }))
        .collect()
}

/// Opposite-outcome cases at least as on point as `cited`, ordered by name.
pub fn counterexamples<'a>(base: &'a CaseBase, cited: &Case, new_case: &Case) -> Vec<&'a Case> {
    let Some(side) = cited.outcome.side() else {
        return Vec::new();
    };
    let bar = overlap(cited, new_case);
    let mut out: Vec<&Case> = base
        .decided()
        .filter(|c| c.name != new_case.name && c.outcome.side() == Some(side.opposite()))
        .filter(|c| overlap(c, new_case) >= bar)
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Edge distance from `from` up to the nearest ancestor it shares with `to`.
pub fn closeness(adf: &Adf, from: &FactorId, to: &FactorId) -> Option<(usize, String)> {
    let a = adf.ancestor_distances(&Child::Factor(from.clone()));
    let b = adf.ancestor_distances(&Child::Factor(to.clone()));
    a.iter()
        .filter(|(n, _)| b.contains_key(*n))
        .map(|(n, d)| (*d, n.clone()))
        .min()
}

fn scored(adf: &Adf, kind: Move, factor: &FactorId, pool: &FactorSet) -> Vec<Downplay> {
    pool.iter()
        .filter_map(|c| {
            closeness(adf, factor, c).map(|(closeness, via)| Downplay {
                kind,
                factor: c.clone(),
                closeness,
                via,
            })
        })
        .collect()
}

/// Ways for the proponent to downplay a distinction, most persuasive first.
pub fn downplays(
    d: &Distinction,
    adf: &Adf,
    precedent: &Case,
    new_case: &Case,
    winner: Side,
    catalogue: &FactorCatalogue,
) -> Vec<Downplay> {
    // Winner's strengths only the new case has, and loser's strengths only
    // the precedent has.
    let new_winner = catalogue.of_side(
        &new_case.factors.difference(&precedent.factors).cloned().collect(),
        winner,
    );
    let prec_loser = catalogue.of_side(
        &precedent.factors.difference(&new_case.factors).cloned().collect(),
        winner.opposite(),
    );
    let (sub_pool, cancel_pool) = match d.kind {
        DistinctionKind::PrecedentOnlyWinnerFactor => (&new_winner, &prec_loser),
        DistinctionKind::NewCaseOnlyLoserFactor => (&prec_loser, &new_winner),
    };
    let mut out = scored(adf, Move::Substitute, &d.factor, sub_pool);
    out.extend(scored(adf, Move::Cancel, &d.factor, cancel_pool));
    out.sort_by(|a, b| {
        a.closeness
            .cmp(&b.closeness)
            .then_with(|| a.factor.cmp(&b.factor))
    });
    out
}

fn letter(i: usize) -> char {
    (b'a' + (i % 26) as u8) as char
}

fn rebuttal_label(objection: char, i: usize) -> String {
    let primes = match i {
        0 => String::new(),
        1 => "′".into(),
        2 => "″".into(),
        3 => "‴".into(),
        n => format!("({n})"),
    };
    format!("P2{primes}{objection}")
}

fn downplay_node(label: String, d: &Distinction, dp: &Downplay) -> ArgumentNode {
    ArgumentNode {
        factor: Some(d.factor.clone()),
        counterpart: Some(dp.factor.clone()),
        closeness: Some(dp.closeness),
        via: Some(dp.via.clone()),
        ..ArgumentNode::leaf(label, dp.kind, Actor::Proponent)
    }
}

/// Cites a most-on-point precedent for `side`, then lays out every
/// objection and rebuttal. Objections run: precedent-only distinctions,
/// counterexamples, new-case-only distinctions.
pub fn build_argument_tree(
    base: &CaseBase,
    adf: &Adf,
    new_case: &Case,
    side: Side,
) -> Result<ArgumentNode> {
    let cat = &base.catalogue;
    let cited = *most_on_point(base, new_case, side)
        .first()
        .ok_or_else(|| Error::NoCitablePrecedent {
            case: new_case.name.clone(),
            side,
        })?;
    let all = distinctions(cited, new_case, side, cat);
    let (first, second): (Vec<_>, Vec<_>) = all
        .iter()
        .partition(|d| d.kind == DistinctionKind::PrecedentOnlyWinnerFactor);

    let mut objections = Vec::new();
    let mut next = 0;
    let distinction_objection = |d: &Distinction, next: &mut usize| {
        let tag = letter(*next);
        *next += 1;
        let kind = match d.kind {
            DistinctionKind::PrecedentOnlyWinnerFactor => Move::DistinguishPrecedentExtra,
            DistinctionKind::NewCaseOnlyLoserFactor => Move::DistinguishNewCaseExtra,
        };
        let children = downplays(d, adf, cited, new_case, side, cat)
            .iter()
            .enumerate()
            .map(|(i, dp)| downplay_node(rebuttal_label(tag, i), d, dp))
            .collect();
        ArgumentNode {
            case: Some(cited.name.clone()),
            factor: Some(d.factor.clone()),
            children,
            ..ArgumentNode::leaf(format!("O1{tag}"), kind, Actor::Opponent)
        }
    };
    for d in first {
        objections.push(distinction_objection(d, &mut next));
    }
    for counter in counterexamples(base, cited, new_case) {
        let tag = letter(next);
        next += 1;
        let mut children = Vec::new();
        // The counterexample's extra strengths for the opponent, offset by
        // the proponent's strengths it lacks.
        let opp_extra = cat.of_side(
            &counter.factors.difference(&new_case.factors).cloned().collect(),
            side.opposite(),
        );
        let prop_extra = cat.of_side(
            &new_case.factors.difference(&counter.factors).cloned().collect(),
            side,
        );
        let mut transforms: Vec<(FactorId, Downplay)> = opp_extra
            .iter()
            .flat_map(|f| {
                scored(adf, Move::Transform, f, &prop_extra)
                    .into_iter()
                    .map(move |dp| (f.clone(), dp))
            })
            .collect();
        transforms.sort_by(|a, b| {
            (a.1.closeness, &a.0, &a.1.factor).cmp(&(b.1.closeness, &b.0, &b.1.factor))
        });
        let mut i = 0;
        for (f, dp) in transforms {
            let d = Distinction {
                kind: DistinctionKind::PrecedentOnlyWinnerFactor,
                factor: f,
            };
            children.push(downplay_node(rebuttal_label(tag, i), &d, &dp));
            i += 1;
        }
        for f in &prop_extra {
            children.push(ArgumentNode {
                case: Some(counter.name.clone()),
                factor: Some(f.clone()),
                ..ArgumentNode::leaf(
                    rebuttal_label(tag, i),
                    Move::DistinguishCounterexample,
                    Actor::Proponent,
                )
            });
            i += 1;
        }
        objections.push(ArgumentNode {
            case: Some(counter.name.clone()),
            factors: counter.factors.clone(),
            children,
            ..ArgumentNode::leaf(format!("O1{tag}"), Move::Counterexample, Actor::Opponent)
        });
    }
    for d in second {
        objections.push(distinction_objection(d, &mut next));
    }

    Ok(ArgumentNode {
        case: Some(cited.name.clone()),
        factors: cited.factors.clone(),
        children: objections,
        ..ArgumentNode::leaf("P1".into(), Move::Cite, Actor::Proponent)
    })
}

/// Keeps only the parts of the tree that bear on a spotted issue.
pub fn prune_by_issues(tree: &ArgumentNode, issues: &[Issue], adf: &Adf) -> ArgumentNode {
    let issue_sets: Vec<&FactorSet> = issues
        .iter()
        .filter_map(|i| adf.descendant_factors(&i.node).ok())
        .collect();
    let contested = |f: &FactorId| issue_sets.iter().any(|s| s.contains(f));
    let same_issue = |a: &FactorId, b: &FactorId| {
        issue_sets
            .iter()
            .any(|s| s.contains(a) && s.contains(b))
    };
    let keep_rebuttal = |r: &ArgumentNode| match (&r.factor, &r.counterpart) {
        (Some(f), Some(c)) => same_issue(f, c),
        (Some(f), None) => contested(f),
        _ => true,
    };

    let mut out = ArgumentNode {
        children: Vec::new(),
        ..tree.clone()
    };
    for objection in &tree.children {
        let keep = match objection.kind {
            Move::Counterexample => objection.factors.iter().any(contested),
            _ => objection.factor.as_ref().is_some_and(contested),
        };
        if !keep {
            continue;
        }
        out.children.push(ArgumentNode {
            children: objection
                .children
                .iter()
                .filter(|r| keep_rebuttal(r))
                .cloned()
                .collect(),
            ..objection.clone()
        });
    }
    out
}

fn describe(node: &ArgumentNode, new_case: &str, catalogue: &FactorCatalogue) -> String {
    let f = |id: &Option<FactorId>| {
        id.as_ref()
            .map(|i| format!("{i} ({})", catalogue.label(i)))
            .unwrap_or_default()
    };
    let case = node.case.clone().unwrap_or_default();
    let score = match (&node.closeness, &node.via) {
        (Some(c), Some(v)) => format!(" [closeness {c}, via {v}]"),
        _ => String::new(),
    };
    match node.kind {
        Move::Cite => format!("Cite {case}"),
        Move::DistinguishPrecedentExtra => {
            format!("Distinguish: {} holds in {case} but not in {new_case}", f(&node.factor))
        }
        Move::DistinguishNewCaseExtra => {
            format!("Distinguish: {} holds in {new_case} but not in {case}", f(&node.factor))
        }
        Move::Counterexample => format!("Counterexample {case}"),
        Move::Substitute => format!(
            "Substitute {} for {}{score}",
            f(&node.counterpart),
            f(&node.factor)
        ),
        Move::Cancel => format!("Cancel {} with {}{score}", f(&node.factor), f(&node.counterpart)),
        Move::Transform => format!(
            "Transform: {} offset by {}{score}",
            f(&node.factor),
            f(&node.counterpart)
        ),
        Move::DistinguishCounterexample => {
            format!("Distinguish {case}: {} holds in {new_case} only", f(&node.factor))
        }
    }
}

/// Indented plain-text rendering, one move per line.
pub fn render_tree(tree: &ArgumentNode, new_case: &str, catalogue: &FactorCatalogue) -> String {
    fn walk(n: &ArgumentNode, depth: usize, new_case: &str, cat: &FactorCatalogue, out: &mut String) {
        let _ = writeln!(
            out,
            "{}{} {}",
            "  ".repeat(depth),
            n.label,
            describe(n, new_case, cat)
        );
        for c in &n.children {
            walk(c, depth + 1, new_case, cat, out);
        }
    }
    let mut out = String::new();
    walk(tree, 0, new_case, catalogue, &mut out);
    out
}
