//! Factor ascription from dimensional facts.
//!
//! A dimension is a ranged aspect of a case. Switching points partition the
//! range into intervals, each mapping to a factor, to neutral, or to
//! inapplicable. Composite factors trade two dimensions off against each
//! other through a linear boundary.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_case, Case, FactorCatalogue, FactorId, Side};

/// What an interval of a dimension ascribes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimensionOutcome {
    Factor(FactorId),
    Neutral,
    Inapplicable,
}

impl fmt::Display for DimensionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionOutcome::Factor(id) => write!(f, "{id}"),
            DimensionOutcome::Neutral => f.write_str("neutral"),
            DimensionOutcome::Inapplicable => f.write_str("inapplicable"),
        }
    }
}

impl Serialize for DimensionOutcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DimensionOutcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(match s.to_ascii_lowercase().as_str() {
            "neutral" => DimensionOutcome::Neutral,
            "inapplicable" => DimensionOutcome::Inapplicable,
            _ => DimensionOutcome::Factor(FactorId::new(s)),
        })
    }
}

/// `[lo, hi)` by default; `open_lo` excludes `lo`, `closed` includes `hi`.
/// A missing `hi` is unbounded above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub open_lo: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub closed: bool,
    pub outcome: DimensionOutcome,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        let above = if self.open_lo { v > self.lo } else { v >= self.lo };
        let below = match self.hi {
            None => true,
            Some(hi) if self.closed => v <= hi,
            Some(hi) => v < hi,
        };
        above && below
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionSpec {
    pub name: String,
    #[serde(default)]
    pub unit: Option<String>,
    pub min: f64,
    /// `None` means unbounded.
    #[serde(default)]
    pub max: Option<f64>,
    pub intervals: Vec<Interval>,
}

impl DimensionSpec {
    fn invalid(&self, message: impl Into<String>) -> Error {
        Error::InvalidDimension {
            name: self.name.clone(),
            message: message.into(),
        }
    }

    /// Checks that the intervals partition `[min, max]` and that adjacent
    /// intervals differ in outcome.
    pub fn check(&self) -> Result<()> {
        let first = self
            .intervals
            .first()
            .ok_or_else(|| self.invalid("no intervals"))?;
        if first.lo != self.min || first.open_lo {
            return Err(self.invalid("first interval must start at the range minimum"));
        }
        for pair in self.intervals.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let Some(hi) = a.hi else {
                return Err(self.invalid("only the last interval may be unbounded"));
            };
            if hi != b.lo {
                return Err(self.invalid(format!("gap or overlap at {hi}")));
            }
            // exactly one side owns the switching point
            if a.closed == !b.open_lo {
                return Err(self.invalid(format!("switching point {hi} owned by both or neither interval")));
            }
            if a.outcome == b.outcome {
                return Err(self.invalid(format!("adjacent intervals at {hi} share outcome {}", a.outcome)));
            }
        }
        for iv in &self.intervals {
            if let Some(hi) = iv.hi {
                if hi < iv.lo || (hi == iv.lo && !(iv.closed && !iv.open_lo)) {
                    return Err(self.invalid(format!("empty interval at {}", iv.lo)));
                }
            }
        }
        let last = self.intervals.last().expect("nonempty");
        match (last.hi, self.max) {
            (None, None) => Ok(()),
            (Some(hi), Some(max)) if hi == max && last.closed => Ok(()),
            _ => Err(self.invalid("last interval must end at the range maximum, inclusive")),
        }
    }

    pub fn in_range(&self, v: f64) -> bool {
        v >= self.min && self.max.is_none_or(|m| v <= m)
    }
}

/// The outcome ascribed by a dimension at a value.
pub fn ascribe_from_dimension(spec: &DimensionSpec, value: f64) -> Result<DimensionOutcome> {
    if value.is_nan() || !spec.in_range(value) {
        return Err(Error::OutOfRange {
            dimension: spec.name.clone(),
            value,
        });
    }
    spec.intervals
        .iter()
        .find(|iv| iv.contains(value))
        .map(|iv| iv.outcome.clone())
        .ok_or_else(|| Error::OutOfRange {
            dimension: spec.name.clone(),
            value,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub dimension: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecedentPoint {
    pub point: [f64; 2],
    pub applies: bool,
}

/// A factor ascribed when `a*x + b*y >= c` holds over two dimensional facts
/// (`>` when not inclusive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeFactorSpec {
    pub factor: FactorId,
    pub side: Side,
    /// ADF node the factor is housed under, if any.
    #[serde(default)]
    pub node: Option<String>,
    pub axes: [Axis; 2],
    pub coefficients: [f64; 2],
    pub threshold: f64,
    #[serde(default = "default_true")]
    pub inclusive: bool,
    #[serde(default)]
    pub precedents: Vec<PrecedentPoint>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPosition {
    Above,
    On,
    Below,
}

impl CompositeFactorSpec {
    pub fn score(&self, point: [f64; 2]) -> f64 {
        self.coefficients[0] * point[0] + self.coefficients[1] * point[1]
    }

    pub fn position(&self, point: [f64; 2]) -> BoundaryPosition {
        let s = self.score(point);
        if s == self.threshold {
            BoundaryPosition::On
        } else if s > self.threshold {
            BoundaryPosition::Above
        } else {
            BoundaryPosition::Below
        }
    }

    pub fn applies_at(&self, point: [f64; 2]) -> bool {
        match self.position(point) {
            BoundaryPosition::Above => true,
            BoundaryPosition::On => self.inclusive,
            BoundaryPosition::Below => false,
        }
    }

    pub fn directions(&self) -> [Direction; 2] {
        [self.axes[0].direction, self.axes[1].direction]
    }

    /// Coefficient signs must agree with the declared pro-factor directions,
    /// and every supplied precedent must fall on its recorded side.
    pub fn check(&self) -> Result<()> {
        let name = self.factor.to_string();
        for (axis, coef) in self.axes.iter().zip(self.coefficients) {
            if coef * axis.direction.sign() < 0.0 {
                return Err(Error::InvalidDimension {
                    name,
                    message: format!("coefficient for `{}` contradicts its direction", axis.dimension),
                });
            }
        }
        for p in &self.precedents {
            if self.applies_at(p.point) != p.applies {
                return Err(Error::InvalidDimension {
                    name,
                    message: format!("precedent {:?} falls on the wrong side of the boundary", p.point),
                });
            }
        }
        Ok(())
    }

    fn point_from(&self, facts: &BTreeMap<String, f64>) -> Result<[f64; 2]> {
        let get = |axis: &Axis| {
            facts
                .get(&axis.dimension)
                .copied()
                .ok_or_else(|| Error::MissingDimension(axis.dimension.clone()))
        };
        Ok([get(&self.axes[0])?, get(&self.axes[1])?])
    }
}

/// Whether the composite factor applies to the case's dimensional facts.
pub fn composite_applies(spec: &CompositeFactorSpec, facts: &BTreeMap<String, f64>) -> Result<bool> {
    Ok(spec.applies_at(spec.point_from(facts)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    Applies,
    NotApplies,
    Unconstrained,
}

/// `a` is at least as strong as `b` for the factor on every axis.
fn dominates(a: [f64; 2], b: [f64; 2], directions: [Direction; 2]) -> bool {
    (0..2).all(|i| (a[i] - b[i]) * directions[i].sign() >= 0.0)
}

/// Classifies a point purely from precedent points, without a fitted
/// boundary.
pub fn dominance_applies(
    precedents: &[PrecedentPoint],
    directions: [Direction; 2],
    query: [f64; 2],
) -> Result<Dominance> {
    for yes in precedents.iter().filter(|p| p.applies) {
        for no in precedents.iter().filter(|p| !p.applies) {
            if dominates(no.point, yes.point, directions) {
                return Err(Error::InconsistentPrecedents {
                    applies: yes.point.to_vec(),
                    not_applies: no.point.to_vec(),
                });
            }
        }
    }
    let applies = precedents
        .iter()
        .find(|p| p.applies && dominates(query, p.point, directions));
    let not_applies = precedents
        .iter()
        .find(|p| !p.applies && dominates(p.point, query, directions));
    match (applies, not_applies) {
        (Some(y), Some(n)) => Err(Error::InconsistentPrecedents {
            applies: y.point.to_vec(),
            not_applies: n.point.to_vec(),
        }),
        (Some(_), None) => Ok(Dominance::Applies),
        (None, Some(_)) => Ok(Dominance::NotApplies),
        (None, None) => Ok(Dominance::Unconstrained),
    }
}

/// Adds every factor derivable from the case's dimensional facts. Composite
/// factors whose dimensions are not both present are skipped.
pub fn ascribe_all(
    dimensions: &[DimensionSpec],
    composites: &[CompositeFactorSpec],
    case: &Case,
    catalogue: &FactorCatalogue,
) -> Result<Case> {
    let mut out = case.clone();
    for spec in dimensions {
        if let Some(&v) = case.dimensional_facts.get(&spec.name) {
            if let DimensionOutcome::Factor(id) = ascribe_from_dimension(spec, v)? {
                out.factors.insert(id);
            }
        }
    }
    for spec in composites {
        match composite_applies(spec, &case.dimensional_facts) {
            Ok(true) => {
                out.factors.insert(spec.factor.clone());
            }
            Ok(false) | Err(Error::MissingDimension(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let violations = validate_case(&out, catalogue);
    if !violations.is_empty() {
        return Err(Error::InvalidCase {
            case: out.name,
            violations,
        });
    }
    Ok(out)
}

/// The change-of-fiscal-domicile trade-off between months abroad and the
/// percentage of income earned abroad: `5*months + 3*income >= 360`.
///
/// The published line `y = 120 - 10x` only passes through both change
/// precedents when `x` counts six-month periods; in months that is
/// `income = 120 - (5/3)*months`.
pub fn fiscal_domicile() -> CompositeFactorSpec {
    CompositeFactorSpec {
        factor: "IncomeSufficientGivenAbsence".into(),
        side: Side::Plaintiff,
        node: None,
        axes: [
            Axis {
                dimension: "absence_months".into(),
                direction: Direction::Increasing,
            },
            Axis {
                dimension: "income_abroad_pct".into(),
                direction: Direction::Increasing,
            },
        ],
        coefficients: [5.0, 3.0],
        threshold: 360.0,
        inclusive: true,
        precedents: vec![
            PrecedentPoint { point: [36.0, 60.0], applies: true },
            PrecedentPoint { point: [60.0, 20.0], applies: true },
            PrecedentPoint { point: [48.0, 20.0], applies: false },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{factor_set, Factor, Outcome};

    fn iv(lo: f64, hi: Option<f64>, outcome: DimensionOutcome) -> Interval {
        Interval {
            lo,
            hi,
            open_lo: false,
            closed: false,
            outcome,
        }
    }

    fn f(id: &str) -> DimensionOutcome {
        DimensionOutcome::Factor(id.into())
    }

    pub(crate) fn security_measures() -> DimensionSpec {
        let mut top = iv(7.0, Some(10.0), f("F6p"));
        top.closed = true;
        DimensionSpec {
            name: "security_measures".into(),
            unit: Some("score".into()),
            min: 0.0,
            max: Some(10.0),
            intervals: vec![
                iv(0.0, Some(3.0), f("F19d")),
                iv(3.0, Some(7.0), DimensionOutcome::Neutral),
                top,
            ],
        }
    }

    fn disclosures() -> DimensionSpec {
        let mut zero = iv(0.0, Some(0.0), DimensionOutcome::Inapplicable);
        zero.closed = true;
        let mut low = iv(0.0, Some(5.0), DimensionOutcome::Neutral);
        low.open_lo = true;
        DimensionSpec {
            name: "disclosures".into(),
            unit: Some("outsiders".into()),
            min: 0.0,
            max: None,
            intervals: vec![
                zero,
                low,
                iv(5.0, Some(50.0), f("F10d")),
                iv(50.0, None, f("F27d")),
            ],
        }
    }

    fn bribery() -> DimensionSpec {
        let mut yes = iv(1.0, Some(1.0), f("F2p"));
        yes.closed = true;
        DimensionSpec {
            name: "bribery".into(),
            unit: None,
            min: 0.0,
            max: Some(1.0),
            intervals: vec![iv(0.0, Some(1.0), DimensionOutcome::Neutral), yes],
        }
    }

    #[test]
    fn specs_partition_their_ranges() {
        security_measures().check().unwrap();
        disclosures().check().unwrap();
        bribery().check().unwrap();
    }

    #[test]
    fn security_measures_switching_points() {
        let s = security_measures();
        assert_eq!(ascribe_from_dimension(&s, 2.0).unwrap(), f("F19d"));
        assert_eq!(ascribe_from_dimension(&s, 5.0).unwrap(), DimensionOutcome::Neutral);
        assert_eq!(ascribe_from_dimension(&s, 8.0).unwrap(), f("F6p"));
        assert_eq!(ascribe_from_dimension(&s, 10.0).unwrap(), f("F6p"));
        assert_eq!(ascribe_from_dimension(&s, 3.0).unwrap(), DimensionOutcome::Neutral);
        assert!(matches!(ascribe_from_dimension(&s, 11.0), Err(Error::OutOfRange { .. })));
        assert!(ascribe_from_dimension(&s, -0.5).is_err());
    }

    #[test]
    fn disclosures_escalate_to_public_forum() {
        let s = disclosures();
        assert_eq!(ascribe_from_dimension(&s, 0.0).unwrap(), DimensionOutcome::Inapplicable);
        assert_eq!(ascribe_from_dimension(&s, 2.0).unwrap(), DimensionOutcome::Neutral);
        assert_eq!(ascribe_from_dimension(&s, 10.0).unwrap(), f("F10d"));
        assert_eq!(ascribe_from_dimension(&s, 1e6).unwrap(), f("F27d"));
    }

    #[test]
    fn bribery_is_two_valued() {
        let s = bribery();
        assert_eq!(ascribe_from_dimension(&s, 1.0).unwrap(), f("F2p"));
        assert_eq!(ascribe_from_dimension(&s, 0.0).unwrap(), DimensionOutcome::Neutral);
    }

    #[test]
    fn malformed_specs_rejected() {
        let mut s = security_measures();
        s.intervals[1].lo = 4.0;
        assert!(s.check().is_err());
        let mut s = security_measures();
        s.intervals[1].outcome = f("F19d");
        assert!(s.check().is_err());
        let mut s = security_measures();
        s.intervals[2].closed = false;
        assert!(s.check().is_err());
    }

    #[test]
    fn composite_requires_both_dimensions() {
        let spec = crate::magnitude::fiscal_domicile();
        let mut facts = BTreeMap::new();
        facts.insert("absence_months".to_string(), 36.0);
        assert!(matches!(
            composite_applies(&spec, &facts),
            Err(Error::MissingDimension(d)) if d == "income_abroad_pct"
        ));
    }

    #[test]
    fn inconsistent_precedents_reported() {
        let pts = vec![
            PrecedentPoint { point: [10.0, 10.0], applies: true },
            PrecedentPoint { point: [20.0, 20.0], applies: false },
        ];
        let dirs = [Direction::Increasing, Direction::Increasing];
        assert!(matches!(
            dominance_applies(&pts, dirs, [0.0, 0.0]),
            Err(Error::InconsistentPrecedents { .. })
        ));
    }

    #[test]
    fn ascribe_adds_and_detects_conflicts() {
        let cat = FactorCatalogue::cato();
        let mut case = Case::new("X", factor_set(["F10d"]), Outcome::Undecided);
        case.dimensional_facts.insert("security_measures".into(), 8.0);
        let out = ascribe_all(&[security_measures()], &[], &case, &cat).unwrap();
        assert!(out.factors.contains(&"F6p".into()));

        let mut listed = Case::new("Y", factor_set(["F6p"]), Outcome::Undecided);
        listed.dimensional_facts.insert("security_measures".into(), 1.0);
        assert!(matches!(
            ascribe_all(&[security_measures()], &[], &listed, &cat),
            Err(Error::InvalidCase { .. })
        ));

        let bare = Case::new("Z", factor_set(["F2p"]), Outcome::Undecided);
        assert_eq!(ascribe_all(&[security_measures()], &[], &bare, &cat).unwrap(), bare);
    }

    #[test]
    fn ascribe_composite() {
        let mut cat = FactorCatalogue::cato();
        cat.factors.push(Factor {
            id: "IncomeSufficientGivenAbsence".into(),
            label: "Income-Sufficient-Given-Absence".into(),
            side: Side::Plaintiff,
        });
        let mut case = Case::new("Fiscal", Default::default(), Outcome::Undecided);
        case.dimensional_facts.insert("absence_months".into(), 36.0);
        case.dimensional_facts.insert("income_abroad_pct".into(), 60.0);
        let out = ascribe_all(&[], &[crate::magnitude::fiscal_domicile()], &case, &cat).unwrap();
        assert!(out.factors.contains(&"IncomeSufficientGivenAbsence".into()));
    }
}
