//! Issue-level preferences drawn from decided cases, precedential
//! constraint, and how many precedents it takes to resolve the ADF.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adf::{evaluate, spot_issues, Adf, Child};
use crate::error::{Error, Result};
use crate::model::{Case, CaseBase, FactorCatalogue, FactorSet, Side};

/// Which of the winner's factors a precedent is taken to prefer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// All of the winning side's factors.
    Results,
    /// The declared sufficient subset, falling back to all of them.
    #[default]
    Reason,
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "results" | "result" => Ok(Model::Results),
            "reason" | "reasons" => Ok(Model::Reason),
            other => Err(format!("unknown model `{other}` (expected results or reason)")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Results => f.write_str("results"),
            Model::Reason => f.write_str("reason"),
        }
    }
}

/// `weaker ≺ stronger` at a node, as decided in `source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preference {
    pub node: String,
    pub weaker: FactorSet,
    pub stronger: FactorSet,
    pub model: Model,
    pub source: String,
    pub winner: Side,
}

impl Preference {
    /// Whether a case with these winner-side and loser-side factors is at
    /// least as strong for the winner and no stronger for the loser.
    pub fn a_fortiori(&self, winning: &FactorSet, losing: &FactorSet) -> bool {
        self.stronger.is_subset(winning) && losing.is_subset(&self.weaker)
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &FactorSet| s.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "{}: {{{}}} < {{{}}} ({})",
            self.node,
            join(&self.weaker),
            join(&self.stronger),
            self.source
        )
    }
}

/// Present factors of a case under a node, split by side.
pub fn node_factors(
    adf: &Adf,
    factors: &FactorSet,
    node: &str,
    catalogue: &FactorCatalogue,
) -> Result<(FactorSet, FactorSet)> {
    let under: FactorSet = adf
        .descendant_factors(node)?
        .intersection(factors)
        .cloned()
        .collect();
    Ok(catalogue.split(&under))
}

fn pick(pair: &(FactorSet, FactorSet), side: Side) -> &FactorSet {
    match side {
        Side::Plaintiff => &pair.0,
        Side::Defendant => &pair.1,
    }
}

/// The side a decided case resolved a node for, or `None` when none of the
/// node's factors are present.
///
/// Resolutions come from evaluating the ADF. When the recorded outcome
/// disagrees with the ADF's verdict, the court is taken to have decided the
/// case's issues for the recorded winner.
pub fn node_resolution(
    adf: &Adf,
    case: &Case,
    node: &str,
    catalogue: &FactorCatalogue,
) -> Result<Option<Side>> {
    let recorded = case
        .outcome
        .side()
        .ok_or_else(|| Error::UndecidedCase(case.name.clone()))?;
    let split = node_factors(adf, &case.factors, node, catalogue)?;
    if split.0.is_empty() && split.1.is_empty() {
        return Ok(None);
    }
    let trace = evaluate(adf, &case.factors)?;
    if trace.outcome() != recorded
        && spot_issues(adf, &case.factors, catalogue)
            .iter()
            .any(|i| i.node == node)
    {
        return Ok(Some(recorded));
    }
    Ok(Some(trace.node(node)?.side))
}

/// One preference per node where the case has present factors on both
/// sides, in ADF declaration order.
pub fn extract_preferences(
    adf: &Adf,
    case: &Case,
    model: Model,
    catalogue: &FactorCatalogue,
) -> Result<Vec<Preference>> {
    let mut out = Vec::new();
    for node in adf.nodes() {
        let split = node_factors(adf, &case.factors, &node.name, catalogue)?;
        if split.0.is_empty() || split.1.is_empty() {
            continue;
        }
        let Some(winner) = node_resolution(adf, case, &node.name, catalogue)? else {
            continue;
        };
        let winning = pick(&split, winner);
        let stronger = match (model, case.declared_reasons.get(&node.name)) {
            (Model::Reason, Some(reason)) => {
                if reason.is_empty() || !reason.is_subset(winning) {
                    return Err(Error::InvalidReason {
                        case: case.name.clone(),
                        node: node.name.clone(),
                    });
                }
                reason.clone()
            }
            _ => winning.clone(),
        };
        out.push(Preference {
            node: node.name.clone(),
            weaker: pick(&split, winner.opposite()).clone(),
            stronger,
            model,
            source: case.name.clone(),
            winner,
        });
    }
    Ok(out)
}

/// Preferences of every decided case in the base.
pub fn corpus_preferences(adf: &Adf, base: &CaseBase, model: Model) -> Result<Vec<Preference>> {
    let mut out = Vec::new();
    for case in base.decided() {
        out.extend(extract_preferences(adf, case, model, &base.catalogue)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintStatus {
    Forced,
    Permitted,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintVerdict {
    pub status: ConstraintStatus,
    /// The side a `Forced` verdict points to.
    pub side: Option<Side>,
    pub citations: Vec<(String, Preference)>,
}

impl ConstraintVerdict {
    fn from_citations(citations: Vec<(String, Preference)>) -> Self {
        let forces = |s: Side| citations.iter().any(|(_, p)| p.winner == s);
        let (status, side) = match (forces(Side::Plaintiff), forces(Side::Defendant)) {
            (true, true) => (ConstraintStatus::Inconsistent, None),
            (true, false) => (ConstraintStatus::Forced, Some(Side::Plaintiff)),
            (false, true) => (ConstraintStatus::Forced, Some(Side::Defendant)),
            (false, false) => (ConstraintStatus::Permitted, None),
        };
        ConstraintVerdict {
            status,
            side,
            citations,
        }
    }

    /// Whether deciding the node for `side` respects the preferences.
    pub fn allows(&self, side: Side) -> bool {
        match self.status {
            ConstraintStatus::Permitted => true,
            ConstraintStatus::Forced => self.side == Some(side),
            ConstraintStatus::Inconsistent => false,
        }
    }
}

/// Applies the a fortiori test of every preference on `node` to a case with
/// the given factors.
pub fn constrains(
    prefs: &[Preference],
    adf: &Adf,
    factors: &FactorSet,
    node: &str,
    catalogue: &FactorCatalogue,
) -> Result<ConstraintVerdict> {
    let split = node_factors(adf, factors, node, catalogue)?;
    let citations: Vec<(String, Preference)> = prefs
        .iter()
        .filter(|p| p.node == node)
        .filter(|p| p.a_fortiori(pick(&split, p.winner), pick(&split, p.winner.opposite())))
        .map(|p| (p.source.clone(), p.clone()))
        .collect();
    Ok(ConstraintVerdict::from_citations(citations))
}

/// Two preferences on the same node that together force both sides for
/// some case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub node: String,
    pub first: Preference,
    pub second: Preference,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({}) conflicts with {} ({})",
            self.node, self.first.source, self.first.winner, self.second.source, self.second.winner
        )
    }
}

pub fn conflicting(a: &Preference, b: &Preference) -> bool {
    a.node == b.node
        && a.winner != b.winner
        && a.stronger.is_subset(&b.weaker)
        && b.stronger.is_subset(&a.weaker)
}

pub fn audit_consistency(adf: &Adf, base: &CaseBase, model: Model) -> Result<Vec<Conflict>> {
    let prefs = corpus_preferences(adf, base, model)?;
    let mut out = Vec::new();
    for (i, a) in prefs.iter().enumerate() {
        for b in &prefs[i + 1..] {
            if conflicting(a, b) {
                out.push(Conflict {
                    node: a.node.clone(),
                    first: a.clone(),
                    second: b.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Whole-case preference: all of the loser's factors below all of the
/// winner's, with no issue structure. Kept for comparison with the
/// issue-level account.
pub fn case_preference(case: &Case, catalogue: &FactorCatalogue) -> Result<Option<Preference>> {
    let winner = case
        .outcome
        .side()
        .ok_or_else(|| Error::UndecidedCase(case.name.clone()))?;
    let split = catalogue.split(&case.factors);
    if split.0.is_empty() || split.1.is_empty() {
        return Ok(None);
    }
    Ok(Some(Preference {
        node: String::new(),
        weaker: pick(&split, winner.opposite()).clone(),
        stronger: pick(&split, winner).clone(),
        model: Model::Results,
        source: case.name.clone(),
        winner,
    }))
}

/// Whole-case constraint of the decided cases in `base` on a new case.
pub fn case_constrains(base: &CaseBase, factors: &FactorSet) -> Result<ConstraintVerdict> {
    let mut prefs = Vec::new();
    for case in base.decided() {
        prefs.extend(case_preference(case, &base.catalogue)?);
    }
    let split = base.catalogue.split(factors);
    let citations: Vec<(String, Preference)> = prefs
        .into_iter()
        .filter(|p| p.a_fortiori(pick(&split, p.winner), pick(&split, p.winner.opposite())))
        .map(|p| (p.source.clone(), p))
        .collect();
    Ok(ConstraintVerdict::from_citations(citations))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRequirement {
    pub node: String,
    pub children: usize,
    /// `2^children`.
    pub raw: u64,
    /// Assignments left once catalogue exclusions and implications among
    /// the node's factor children are respected.
    pub possible: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub nodes: Vec<NodeRequirement>,
    pub total_raw: u64,
    pub total_possible: u64,
}

impl ResolutionReport {
    pub fn node(&self, name: &str) -> Option<&NodeRequirement> {
        self.nodes.iter().find(|n| n.node == name)
    }

    pub fn max_raw(&self) -> u64 {
        self.nodes.iter().map(|n| n.raw).max().unwrap_or(0)
    }
}

/// Upper bound on the precedents needed to fix every node's rule order.
/// Each node counts once however many parents share it.
pub fn resolution_requirements(adf: &Adf, catalogue: &FactorCatalogue) -> ResolutionReport {
    let mut nodes = Vec::new();
    for node in adf.nodes() {
        let k = node.children.len();
        let raw = 1u64 << k;
        let index = |c: &Child| node.children.iter().position(|x| x == c);
        let excl: Vec<(usize, usize)> = catalogue
            .exclusions
            .iter()
            .filter_map(|(a, b)| {
                Some((index(&Child::Factor(a.clone()))?, index(&Child::Factor(b.clone()))?))
            })
            .collect();
        let impl_: Vec<(usize, usize)> = catalogue
            .implications
            .iter()
            .filter_map(|(a, b)| {
                Some((index(&Child::Factor(a.clone()))?, index(&Child::Factor(b.clone()))?))
            })
            .collect();
        let bit = |m: u64, i: usize| m & (1 << i) != 0;
        let possible = (0..raw)
            .filter(|&m| {
                excl.iter().all(|&(a, b)| !(bit(m, a) && bit(m, b)))
                    && impl_.iter().all(|&(a, b)| !bit(m, a) || bit(m, b))
            })
            .count() as u64;
        nodes.push(NodeRequirement {
            node: node.name.clone(),
            children: k,
            raw,
            possible,
        });
    }
    ResolutionReport {
        total_raw: nodes.iter().map(|n| n.raw).sum(),
        total_possible: nodes.iter().map(|n| n.possible).sum(),
        nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adf::trade_secrets;
    use crate::model::{cato_cases, factor_set, Outcome};

    fn setup() -> (Adf, CaseBase) {
        (trade_secrets(), cato_cases())
    }

    #[test]
    fn resolutions() {
        let (adf, base) = setup();
        let cat = &base.catalogue;
        let r = |case: &str, node: &str| node_resolution(&adf, base.case(case).unwrap(), node, cat).unwrap();
        assert_eq!(r("MBL", "MaintainSecrecy"), Some(Side::Plaintiff));
        assert_eq!(r("NoMeasures", "MaintainSecrecy"), Some(Side::Defendant));
        assert_eq!(r("Deceived", "ConfidRelation"), None);
        assert!(matches!(
            node_resolution(&adf, base.case("Bribed").unwrap(), "MaintainSecrecy", cat),
            Err(Error::UndecidedCase(_))
        ));
    }

    #[test]
    fn deceived_results_preferences() {
        let (adf, base) = setup();
        let prefs =
            extract_preferences(&adf, base.case("Deceived").unwrap(), Model::Results, &base.catalogue).unwrap();
        let at = |n: &str| prefs.iter().find(|p| p.node == n).unwrap();
        assert_eq!(at("MaintainSecrecy").weaker, factor_set(["F10d"]));
        assert_eq!(at("MaintainSecrecy").stronger, factor_set(["F6p"]));
        assert_eq!(at("InfoValuable").weaker, factor_set(["F24d"]));
        assert_eq!(at("InfoValuable").stronger, factor_set(["F6p"]));
    }

    #[test]
    fn mason_results_and_reason() {
        let (adf, base) = setup();
        let mason = base.case("Mason").unwrap();
        let iv = |m| {
            extract_preferences(&adf, mason, m, &base.catalogue)
                .unwrap()
                .into_iter()
                .find(|p| p.node == "InfoValuable")
                .unwrap()
        };
        assert_eq!(iv(Model::Results).weaker, factor_set(["F16d"]));
        assert_eq!(iv(Model::Results).stronger, factor_set(["F6p", "F15p"]));
        assert_eq!(iv(Model::Reason).stronger, factor_set(["F6p"]));

        let bribed = &base.case("Bribed").unwrap().factors;
        let v = constrains(&[iv(Model::Reason)], &adf, bribed, "InfoValuable", &base.catalogue).unwrap();
        assert_eq!(v.status, ConstraintStatus::Forced);
        assert_eq!(v.side, Some(Side::Plaintiff));
        let v = constrains(&[iv(Model::Results)], &adf, bribed, "InfoValuable", &base.catalogue).unwrap();
        assert_eq!(v.status, ConstraintStatus::Permitted);
    }

    #[test]
    fn bad_declared_reason() {
        let (adf, base) = setup();
        let mut case = base.case("Mason").unwrap().clone();
        case.declared_reasons
            .insert("InfoValuable".into(), factor_set(["F21p"]));
        assert!(matches!(
            extract_preferences(&adf, &case, Model::Reason, &base.catalogue),
            Err(Error::InvalidReason { .. })
        ));
        assert!(extract_preferences(&adf, &case, Model::Results, &base.catalogue).is_ok());
    }

    #[test]
    fn one_sided_case_has_no_preferences() {
        let (adf, base) = setup();
        let case = Case::new("Clean", factor_set(["F6p", "F2p", "F15p"]), Outcome::Plaintiff);
        assert!(extract_preferences(&adf, &case, Model::Results, &base.catalogue)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn inconsistent_preferences() {
        let (adf, base) = setup();
        let p = Case::new("Up", factor_set(["F6p", "F10d"]), Outcome::Plaintiff);
        let d = Case::new("Down", factor_set(["F6p", "F10d"]), Outcome::Defendant);
        let mut prefs = extract_preferences(&adf, &p, Model::Results, &base.catalogue).unwrap();
        prefs.extend(extract_preferences(&adf, &d, Model::Results, &base.catalogue).unwrap());
        let v = constrains(&prefs, &adf, &factor_set(["F6p", "F10d"]), "MaintainSecrecy", &base.catalogue)
            .unwrap();
        assert_eq!(v.status, ConstraintStatus::Inconsistent);
        assert!(!v.allows(Side::Plaintiff));
    }

    #[test]
    fn audit() {
        let (adf, mut base) = setup();
        assert_eq!(audit_consistency(&adf, &base, Model::Results).unwrap(), vec![]);
        assert_eq!(audit_consistency(&adf, &base, Model::Reason).unwrap(), vec![]);
        base.push(Case::new("AntiDeceived", factor_set(["F6p", "F10d"]), Outcome::Defendant))
            .unwrap();
        let conflicts = audit_consistency(&adf, &base, Model::Results).unwrap();
        assert!(conflicts.iter().any(|c| c.node == "MaintainSecrecy"
            && c.first.source == "Deceived"
            && c.second.source == "AntiDeceived"));
    }

    #[test]
    fn counting() {
        let adf = trade_secrets();
        let report = resolution_requirements(&adf, &FactorCatalogue::cato());
        let mo = report.node("MeasuresOutsiders").unwrap();
        assert_eq!((mo.raw, mo.possible), (4, 3));
        assert_eq!(report.node("MaintainSecrecy").unwrap().possible, 12);
        assert_eq!(report.max_raw(), 32);
        assert_eq!(report.total_raw, 152);
        assert_eq!(report.total_possible, 147);
    }

    #[test]
    fn whole_case_constraint() {
        let (_, base) = setup();
        let v = case_constrains(&base, &factor_set(["F6p", "F15p", "F16d", "F1d", "F21p"])).unwrap();
        assert_eq!(v.side, Some(Side::Plaintiff));
        let v = case_constrains(&base, &factor_set(["F2p", "F6p", "F10d", "F16d"])).unwrap();
        assert_eq!(v.status, ConstraintStatus::Permitted);
    }
}
