//! Factors, cases and the case corpus.
//!
//! A case is a flat set of base-level factors plus an outcome. The corpus
//! document is JSON; factor tokens are accepted case-insensitively and stored
//! in canonical form (`F6p`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::{CompositeFactorSpec, DimensionSpec};

/// The party a factor favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plaintiff,
    Defendant,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plaintiff => Side::Defendant,
            Side::Defendant => Side::Plaintiff,
        }
    }

    pub fn suffix(self) -> char {
        match self {
            Side::Plaintiff => 'p',
            Side::Defendant => 'd',
        }
    }

    pub fn noun(self) -> &'static str {
        match self {
            Side::Plaintiff => "plaintiff",
            Side::Defendant => "defendant",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Plaintiff => f.write_str("Plaintiff"),
            Side::Defendant => f.write_str("Defendant"),
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p" | "plaintiff" => Ok(Side::Plaintiff),
            "d" | "defendant" => Ok(Side::Defendant),
            other => Err(format!("unknown side `{other}` (expected plaintiff or defendant)")),
        }
    }
}

/// Canonical factor identifier such as `F6p`.
///
/// Ordering is numeric on the factor number, so `F2p < F10d`. Identifiers
/// that do not follow the `F<n><side>` shape (composite factors) sort after
/// numbered ones, alphabetically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactorId(String);

impl FactorId {
    pub fn new(id: impl Into<String>) -> Self {
        FactorId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn number(&self) -> Option<u32> {
        let rest = self.0.strip_prefix('F')?;
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        digits.parse().ok()
    }
}

impl Ord for FactorId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.number(), other.number()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for FactorId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FactorId {
    fn from(s: &str) -> Self {
        FactorId(s.to_string())
    }
}

pub type FactorSet = BTreeSet<FactorId>;

/// Builds a factor set from canonical id literals. Test and fixture helper.
pub fn factor_set<'a>(ids: impl IntoIterator<Item = &'a str>) -> FactorSet {
    ids.into_iter().map(FactorId::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub id: FactorId,
    pub label: String,
    pub side: Side,
}

/// The factor vocabulary together with the logical dependencies between
/// factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorCatalogue {
    pub factors: Vec<Factor>,
    #[serde(default)]
    pub exclusions: Vec<(FactorId, FactorId)>,
    #[serde(default)]
    pub implications: Vec<(FactorId, FactorId)>,
}

const CATO_FACTORS: &[(&str, &str)] = &[
    ("F1d", "Disclosure-In-Negotiations"),
    ("F2p", "Bribe-Employee"),
    ("F3d", "Employee-Sole-Developer"),
    ("F4p", "Agreed-Not-To-Disclose"),
    ("F5d", "Agreement-Not-Specific"),
    ("F6p", "Security-Measures"),
    ("F7p", "Brought-Tools"),
    ("F8p", "Competitive-Advantage"),
    ("F10d", "Secrets-Disclosed-Outsiders"),
    ("F11d", "Vertical-Knowledge"),
    ("F12p", "Outsider-Disclosures-Restricted"),
    ("F13p", "Noncompetition-Agreement"),
    ("F14p", "Restricted-Materials-Used"),
    ("F15p", "Unique-Product"),
    ("F16d", "Info-Reverse-Engineerable"),
    ("F17d", "Info-Independently-Generated"),
    ("F18p", "Identical-Products"),
    ("F19d", "No-Security-Measures"),
    ("F20d", "Info-Known-to-Competitors"),
    ("F21p", "Knew-Info-Confidential"),
    ("F22p", "Invasive-Techniques"),
    ("F23d", "Waiver-of-Confidentiality"),
    ("F24d", "Info-Obtainable-Elsewhere"),
    ("F25d", "Info-Reverse-Engineered"),
    ("F26p", "Deception"),
    ("F27d", "Disclosure-In-Public-Forum"),
];

/// Known transcription slips in published factor tables, mapped to the
/// factor they must denote.
const TYPO_MAP: &[(&str, &str)] = &[("F10P", "F10d"), ("S17D", "F17d"), ("F18D", "F18p")];

fn numbered_token() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[Ff](\d+)([PpDd]?)$").unwrap())
}

impl FactorCatalogue {
    /// The 26 CATO trade-secret factors.
    pub fn cato() -> Self {
        let factors = CATO_FACTORS
            .iter()
            .map(|(id, label)| Factor {
                id: FactorId::from(*id),
                label: (*label).to_string(),
                side: if id.ends_with('p') {
                    Side::Plaintiff
                } else {
                    Side::Defendant
                },
            })
            .collect();
        FactorCatalogue {
            factors,
            exclusions: vec![("F6p".into(), "F19d".into())],
            implications: vec![("F12p".into(), "F10d".into())],
        }
    }

    pub fn get(&self, id: &FactorId) -> Option<&Factor> {
        self.factors.iter().find(|f| &f.id == id)
    }

    pub fn contains(&self, id: &FactorId) -> bool {
        self.get(id).is_some()
    }

    pub fn ids(&self) -> impl Iterator<Item = &FactorId> {
        self.factors.iter().map(|f| &f.id)
    }

    pub fn label(&self, id: &FactorId) -> String {
        self.get(id)
            .map(|f| f.label.clone())
            .unwrap_or_else(|| id.to_string())
    }

    /// The side a factor favours.
    pub fn factor_side(&self, id: &FactorId) -> Result<Side> {
        self.get(id)
            .map(|f| f.side)
            .ok_or_else(|| Error::UnknownFactor(id.to_string()))
    }

    /// Splits a factor set by the side each factor favours. Unknown ids are
    /// dropped.
    pub fn split(&self, factors: &FactorSet) -> (FactorSet, FactorSet) {
        let mut p = FactorSet::new();
        let mut d = FactorSet::new();
        for id in factors {
            match self.get(id).map(|f| f.side) {
                Some(Side::Plaintiff) => {
                    p.insert(id.clone());
                }
                Some(Side::Defendant) => {
                    d.insert(id.clone());
                }
                None => {}
            }
        }
        (p, d)
    }

    pub fn of_side(&self, factors: &FactorSet, side: Side) -> FactorSet {
        let (p, d) = self.split(factors);
        match side {
            Side::Plaintiff => p,
            Side::Defendant => d,
        }
    }

    /// Maps an input token to a canonical id. The second element is a
    /// warning when the token had to be corrected.
    pub fn normalize_token(&self, token: &str) -> Result<(FactorId, Option<String>)> {
        let raw = token.trim();
        let upper = raw.to_ascii_uppercase();
        if let Some((_, fixed)) = TYPO_MAP.iter().find(|(typo, _)| *typo == upper) {
            let id = FactorId::from(*fixed);
            if self.contains(&id) {
                return Ok((id.clone(), Some(format!("factor token `{raw}` normalized to {id}"))));
            }
        }
        if let Some(caps) = numbered_token().captures(raw) {
            let number: u32 = caps[1].parse().map_err(|_| Error::UnknownFactor(raw.to_string()))?;
            let suffix = caps[2].to_ascii_lowercase();
            let candidate = self.factors.iter().find(|f| f.id.number() == Some(number));
            return match candidate {
                Some(f) if suffix.is_empty() => Ok((
                    f.id.clone(),
                    Some(format!("factor token `{raw}` has no side letter; read as {}", f.id)),
                )),
                Some(f) if f.side.suffix().to_string() == suffix => Ok((f.id.clone(), None)),
                _ => Err(Error::UnknownFactor(raw.to_string())),
            };
        }
        self.factors
            .iter()
            .find(|f| f.id.as_str().eq_ignore_ascii_case(raw))
            .map(|f| (f.id.clone(), None))
            .ok_or_else(|| Error::UnknownFactor(raw.to_string()))
    }

    /// Normalizes a list of tokens, failing on the first unknown one.
    pub fn normalize_all<'a>(
        &self,
        tokens: impl IntoIterator<Item = &'a str>,
    ) -> Result<(FactorSet, Vec<String>)> {
        let mut set = FactorSet::new();
        let mut warnings = Vec::new();
        for t in tokens {
            let (id, warning) = self.normalize_token(t)?;
            warnings.extend(warning);
            set.insert(id);
        }
        Ok((set, warnings))
    }
}

impl Default for FactorCatalogue {
    fn default() -> Self {
        Self::cato()
    }
}

/// Recorded outcome of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plaintiff,
    Defendant,
    Undecided,
}

impl Outcome {
    pub fn side(self) -> Option<Side> {
        match self {
            Outcome::Plaintiff => Some(Side::Plaintiff),
            Outcome::Defendant => Some(Side::Defendant),
            Outcome::Undecided => None,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Outcome::Plaintiff => "P",
            Outcome::Defendant => "D",
            Outcome::Undecided => "?",
        }
    }
}

impl From<Side> for Outcome {
    fn from(side: Side) -> Self {
        match side {
            Side::Plaintiff => Outcome::Plaintiff,
            Side::Defendant => Outcome::Defendant,
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.token())
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.to_ascii_lowercase().as_str() {
            "p" | "plaintiff" => Ok(Outcome::Plaintiff),
            "d" | "defendant" => Ok(Outcome::Defendant),
            "?" | "tba" | "undecided" => Ok(Outcome::Undecided),
            other => Err(serde::de::Error::custom(format!("unknown outcome `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub name: String,
    pub citation: Option<String>,
    pub factors: FactorSet,
    pub outcome: Outcome,
    pub dimensional_facts: BTreeMap<String, f64>,
    /// Reason-model annotation: for an ADF node, the subset of the winning
    /// factors the court relied on.
    pub declared_reasons: BTreeMap<String, FactorSet>,
}

impl Case {
    pub fn new(name: impl Into<String>, factors: FactorSet, outcome: Outcome) -> Self {
        Case {
            name: name.into(),
            citation: None,
            factors,
            outcome,
            dimensional_facts: BTreeMap::new(),
            declared_reasons: BTreeMap::new(),
        }
    }

    pub fn with_citation(mut self, citation: impl Into<String>) -> Self {
        self.citation = Some(citation.into());
        self
    }

    /// Decision year parsed from the citation, e.g. `(4th Cir.1993)`.
    pub fn year(&self) -> Option<u32> {
        static RE: OnceLock<Regex> = OnceLock::new();
        let re = RE.get_or_init(|| Regex::new(r"(\d{4})\)").unwrap());
        let citation = self.citation.as_deref()?;
        re.captures_iter(citation)
            .last()
            .and_then(|c| c[1].parse().ok())
    }

    /// Citation if known, else the case name.
    pub fn title(&self) -> &str {
        self.citation.as_deref().unwrap_or(&self.name)
    }

    pub fn is_decided(&self) -> bool {
        self.outcome != Outcome::Undecided
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownFactor { factor: FactorId },
    Exclusion { a: FactorId, b: FactorId },
    Implication { antecedent: FactorId, consequent: FactorId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownFactor { factor } => write!(f, "unknown factor {factor}"),
            Violation::Exclusion { a, b } => write!(f, "{a} and {b} cannot both be present"),
            Violation::Implication {
                antecedent,
                consequent,
            } => write!(f, "{antecedent} requires {consequent}"),
        }
    }
}

/// Checks a factor set against the catalogue's vocabulary, exclusions and
/// implications.
pub fn validate_factors(factors: &FactorSet, catalogue: &FactorCatalogue) -> Vec<Violation> {
    let mut out: Vec<Violation> = factors
        .iter()
        .filter(|id| !catalogue.contains(id))
        .map(|id| Violation::UnknownFactor { factor: id.clone() })
        .collect();
    for (a, b) in &catalogue.exclusions {
        if factors.contains(a) && factors.contains(b) {
            out.push(Violation::Exclusion {
                a: a.clone(),
                b: b.clone(),
            });
        }
    }
    for (antecedent, consequent) in &catalogue.implications {
        if factors.contains(antecedent) && !factors.contains(consequent) {
            out.push(Violation::Implication {
                antecedent: antecedent.clone(),
                consequent: consequent.clone(),
            });
        }
    }
    out
}

pub fn validate_case(case: &Case, catalogue: &FactorCatalogue) -> Vec<Violation> {
    validate_factors(&case.factors, catalogue)
}

/// A validated collection of cases sharing one catalogue.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBase {
    pub catalogue: FactorCatalogue,
    pub cases: Vec<Case>,
    pub dimensions: Vec<DimensionSpec>,
    pub composites: Vec<CompositeFactorSpec>,
}

impl CaseBase {
    pub fn new(catalogue: FactorCatalogue, cases: Vec<Case>) -> Result<Self> {
        let base = CaseBase {
            catalogue,
            cases: Vec::new(),
            dimensions: Vec::new(),
            composites: Vec::new(),
        };
        cases.into_iter().try_fold(base, |mut b, c| {
            b.push(c)?;
            Ok(b)
        })
    }

    /// Adds a case, enforcing name uniqueness and validity.
    pub fn push(&mut self, case: Case) -> Result<()> {
        if self.get(&case.name).is_some() {
            return Err(Error::DuplicateCase(case.name));
        }
        let violations = validate_case(&case, &self.catalogue);
        if !violations.is_empty() {
            return Err(Error::InvalidCase {
                case: case.name,
                violations,
            });
        }
        self.cases.push(case);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.name == name)
    }

    pub fn case(&self, name: &str) -> Result<&Case> {
        self.get(name)
            .ok_or_else(|| Error::UnknownCase(name.to_string()))
    }

    pub fn decided(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.is_decided())
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Serializes to the corpus document format.
    pub fn to_json(&self) -> String {
        let doc = CorpusDoc {
            catalogue: (self.catalogue != FactorCatalogue::cato()).then(|| self.catalogue.clone()),
            cases: self.cases.iter().map(CaseRecord::from).collect(),
            dimensions: self.dimensions.clone(),
            composites: self.composites.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("corpus serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CorpusDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    catalogue: Option<FactorCatalogue>,
    #[serde(default)]
    cases: Vec<CaseRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    dimensions: Vec<DimensionSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    composites: Vec<CompositeFactorSpec>,
}

/// Wire form of a case.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    pub outcome: Outcome,
    #[serde(default)]
    pub factors: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dimensions: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reasons: BTreeMap<String, Vec<String>>,
}

impl From<&Case> for CaseRecord {
    fn from(c: &Case) -> Self {
        CaseRecord {
            name: c.name.clone(),
            citation: c.citation.clone(),
            outcome: c.outcome,
            factors: c.factors.iter().map(|f| f.to_string()).collect(),
            dimensions: c.dimensional_facts.clone(),
            reasons: c
                .declared_reasons
                .iter()
                .map(|(n, s)| (n.clone(), s.iter().map(|f| f.to_string()).collect()))
                .collect(),
        }
    }
}

impl CaseRecord {
    /// Resolves tokens against a catalogue. Returns the case and any
    /// normalization warnings.
    pub fn into_case(self, catalogue: &FactorCatalogue) -> Result<(Case, Vec<String>)> {
        let (factors, mut warnings) =
            catalogue.normalize_all(self.factors.iter().map(String::as_str))?;
        let mut declared_reasons = BTreeMap::new();
        for (node, tokens) in self.reasons {
            let (set, w) = catalogue.normalize_all(tokens.iter().map(String::as_str))?;
            warnings.extend(w);
            declared_reasons.insert(node, set);
        }
        let case = Case {
            name: self.name,
            citation: self.citation,
            factors,
            outcome: self.outcome,
            dimensional_facts: self.dimensions,
            declared_reasons,
        };
        let warnings = warnings
            .into_iter()
            .map(|w| format!("{}: {w}", case.name))
            .collect();
        Ok((case, warnings))
    }
}

/// Parses a corpus document, returning the case base and normalization
/// warnings.
pub fn parse_case_corpus_with_warnings(text: &str) -> Result<(CaseBase, Vec<String>)> {
    if text.trim().is_empty() {
        return Ok((CaseBase::new(FactorCatalogue::cato(), Vec::new())?, Vec::new()));
    }
    let doc: CorpusDoc = serde_json::from_str(text).map_err(|e| Error::CorpusParse {
        locator: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let catalogue = doc.catalogue.unwrap_or_default();
    let mut base = CaseBase::new(catalogue, Vec::new())?;
    let mut warnings = Vec::new();
    for (index, record) in doc.cases.into_iter().enumerate() {
        if record.name.trim().is_empty() {
            return Err(Error::CorpusParse {
                locator: format!("record {}", index + 1),
                message: "case name is empty".into(),
            });
        }
        let (case, w) = record.into_case(&base.catalogue)?;
        warnings.extend(w);
        base.push(case)?;
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    base.dimensions = doc.dimensions;
    base.composites = doc.composites;
    for spec in &base.dimensions {
        spec.check()?;
    }
    Ok((base, warnings))
}

pub fn parse_case_corpus(text: &str) -> Result<CaseBase> {
    parse_case_corpus_with_warnings(text).map(|(b, _)| b)
}

/// Side of a factor in the given catalogue.
pub fn factor_side(id: &FactorId, catalogue: &FactorCatalogue) -> Result<Side> {
    catalogue.factor_side(id)
}

/// The bundled corpus of example and decided trade-secret cases.
pub const CATO_CORPUS: &str = include_str!("../assets/cato_corpus.json");

pub fn cato_cases() -> CaseBase {
    parse_case_corpus(CATO_CORPUS).expect("bundled corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> FactorCatalogue {
        FactorCatalogue::cato()
    }

    #[test]
    fn catalogue_has_26_factors_thirteen_per_side() {
        let c = cat();
        assert_eq!(c.factors.len(), 26);
        let p = c.factors.iter().filter(|f| f.side == Side::Plaintiff).count();
        assert_eq!(p, 13);
        assert!(c.exclusions.contains(&("F6p".into(), "F19d".into())));
        assert!(c.implications.contains(&("F12p".into(), "F10d".into())));
    }

    #[test]
    fn sides_follow_table() {
        let c = cat();
        assert_eq!(c.factor_side(&"F2p".into()).unwrap(), Side::Plaintiff);
        assert_eq!(c.factor_side(&"F27d".into()).unwrap(), Side::Defendant);
        assert_eq!(c.factor_side(&"F19d".into()).unwrap(), Side::Defendant);
        assert!(c.factor_side(&"F9p".into()).is_err());
        for f in &c.factors {
            assert!(f.id.as_str().ends_with(f.side.suffix()));
        }
    }

    #[test]
    fn validate_exclusion_and_implication() {
        let c = cat();
        let v = validate_factors(&factor_set(["F6p", "F19d"]), &c);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::Exclusion { .. }));
        let v = validate_factors(&factor_set(["F12p"]), &c);
        assert_eq!(
            v,
            vec![Violation::Implication {
                antecedent: "F12p".into(),
                consequent: "F10d".into()
            }]
        );
        assert!(validate_factors(&FactorSet::new(), &c).is_empty());
    }

    #[test]
    fn token_normalization() {
        let c = cat();
        assert_eq!(c.normalize_token("f6P").unwrap(), ("F6p".into(), None));
        let (id, warning) = c.normalize_token("F10p").unwrap();
        assert_eq!(id, FactorId::from("F10d"));
        assert!(warning.is_some());
        assert_eq!(c.normalize_token("S17d").unwrap().0, FactorId::from("F17d"));
        assert_eq!(c.normalize_token("F18d").unwrap().0, FactorId::from("F18p"));
        assert_eq!(c.normalize_token("F15").unwrap().0, FactorId::from("F15p"));
        assert!(matches!(
            c.normalize_token("F6d"),
            Err(Error::UnknownFactor(t)) if t == "F6d"
        ));
        assert!(c.normalize_token("F9p").is_err());
    }

    #[test]
    fn factor_ids_order_numerically() {
        let mut v: Vec<FactorId> = vec!["F10d".into(), "F2p".into(), "F1d".into(), "Zeta".into()];
        v.sort();
        let s: Vec<&str> = v.iter().map(|f| f.as_str()).collect();
        assert_eq!(s, ["F1d", "F2p", "F10d", "Zeta"]);
    }

    #[test]
    fn parse_single_record() {
        let text = r#"{"cases": [{"name": "Deceived", "outcome": "P", "factors": ["F6p","F26p","F10d","F24d"]}]}"#;
        let base = parse_case_corpus(text).unwrap();
        let case = base.case("Deceived").unwrap();
        assert_eq!(case.factors.len(), 4);
        assert_eq!(case.outcome, Outcome::Plaintiff);
    }

    #[test]
    fn parse_empty_document() {
        assert!(parse_case_corpus("").unwrap().is_empty());
        assert!(parse_case_corpus(r#"{"cases": []}"#).unwrap().is_empty());
    }

    #[test]
    fn parse_typo_warns() {
        let text = r#"{"cases": [{"name": "Trandes", "outcome": "P", "factors": ["F6p","F10p","F12p"]}]}"#;
        let (base, warnings) = parse_case_corpus_with_warnings(text).unwrap();
        assert!(base.case("Trandes").unwrap().factors.contains(&"F10d".into()));
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("F10p"));
    }

    #[test]
    fn parse_errors() {
        let bad = r#"{"cases": [{"name": "X", "outcome": "P", "factors": ["F99p"]}]}"#;
        assert!(matches!(parse_case_corpus(bad), Err(Error::UnknownFactor(t)) if t == "F99p"));
        let dup = r#"{"cases": [{"name": "X", "outcome": "P"}, {"name": "X", "outcome": "D"}]}"#;
        assert!(matches!(parse_case_corpus(dup), Err(Error::DuplicateCase(n)) if n == "X"));
        let malformed = "{\"cases\": [\n{\"outcome\": \"P\"}]}";
        match parse_case_corpus(malformed) {
            Err(Error::CorpusParse { locator, .. }) => assert!(locator.contains("line 2")),
            other => panic!("unexpected {other:?}"),
        }
        let invalid = r#"{"cases": [{"name": "X", "outcome": "P", "factors": ["F6p", "F19d"]}]}"#;
        assert!(matches!(parse_case_corpus(invalid), Err(Error::InvalidCase { .. })));
    }

    #[test]
    fn year_from_citation() {
        let c = Case::new("Trandes", FactorSet::new(), Outcome::Plaintiff)
            .with_citation("Trandes Corp. v. Guy F. Atkinson Co., 996 F.2d 655 (4th Cir.1993)");
        assert_eq!(c.year(), Some(1993));
        assert_eq!(Case::new("X", FactorSet::new(), Outcome::Undecided).year(), None);
    }
}
