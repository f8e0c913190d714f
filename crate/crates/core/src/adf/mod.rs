//! Abstract dialectical framework of issues.
//!
//! Each node carries an ordered list of acceptance rules over its children;
//! the first rule whose condition holds decides the node. Leaves are base
//! level factors.

mod eval;
mod issues;
mod parse;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FactorCatalogue, FactorId, FactorSet, Side};

pub use eval::{evaluate, EvaluationTrace, NodeTrace};
pub use issues::{spot_issues, spans_both, Issue};
pub use parse::parse_adf;

/// The trade-secret issue ADF shipped with the crate.
pub const TRADE_SECRETS_ADF: &str = include_str!("../../assets/trade_secrets.adf");

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum Child {
    Factor(FactorId),
    Node(String),
}

impl Child {
    pub fn name(&self) -> &str {
        match self {
            Child::Factor(f) => f.as_str(),
            Child::Node(n) => n,
        }
    }
}

impl fmt::Display for Child {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boolean condition over a node's children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Atom(Child),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn atoms(&self) -> Vec<&Child> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Child>) {
        match self {
            Condition::Atom(c) => out.push(c),
            Condition::Not(inner) => inner.collect_atoms(out),
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Each atom with +1 when the condition is monotone increasing in it,
    /// -1 when it occurs under an odd number of negations.
    fn signed_atoms(&self, sign: i8, out: &mut Vec<(Child, i8)>) {
        match self {
            Condition::Atom(c) => out.push((c.clone(), sign)),
            Condition::Not(inner) => inner.signed_atoms(-sign, out),
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.signed_atoms(sign, out);
                b.signed_atoms(sign, out);
            }
        }
    }

    pub fn holds(&self, value: &impl Fn(&Child) -> bool) -> bool {
        match self {
            Condition::Atom(c) => value(c),
            Condition::Not(inner) => !inner.holds(value),
            Condition::And(a, b) => a.holds(value) && b.holds(value),
            Condition::Or(a, b) => a.holds(value) || b.holds(value),
        }
    }

    /// Atoms that make a satisfied condition true: both sides of an AND,
    /// every satisfied disjunct of an OR, and the negated atom under NOT.
    pub fn witnesses(&self, value: &impl Fn(&Child) -> bool) -> Vec<Child> {
        let mut out = Vec::new();
        self.collect_witnesses(value, &mut out);
        let mut seen = BTreeSet::new();
        out.retain(|c| seen.insert(c.clone()));
        out
    }

    fn collect_witnesses(&self, value: &impl Fn(&Child) -> bool, out: &mut Vec<Child>) {
        match self {
            Condition::Atom(c) => out.push(c.clone()),
            Condition::Not(inner) => out.extend(inner.atoms().into_iter().cloned()),
            Condition::And(a, b) => {
                a.collect_witnesses(value, out);
                b.collect_witnesses(value, out);
            }
            Condition::Or(a, b) => {
                for side in [a, b] {
                    if side.holds(value) {
                        side.collect_witnesses(value, out);
                    }
                }
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn needs_parens(c: &Condition) -> bool {
            matches!(c, Condition::And(..) | Condition::Or(..))
        }
        match self {
            Condition::Atom(c) => write!(f, "{c}"),
            Condition::Not(inner) if needs_parens(inner) => write!(f, "NOT ({inner})"),
            Condition::Not(inner) => write!(f, "NOT {inner}"),
            Condition::And(a, b) => {
                let wrap = |c: &Condition| matches!(c, Condition::Or(..));
                match (wrap(a), wrap(b)) {
                    (false, false) => write!(f, "{a} AND {b}"),
                    (true, false) => write!(f, "({a}) AND {b}"),
                    (false, true) => write!(f, "{a} AND ({b})"),
                    (true, true) => write!(f, "({a}) AND ({b})"),
                }
            }
            Condition::Or(a, b) => write!(f, "{a} OR {b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("ACCEPT"),
            Verdict::Reject => f.write_str("REJECT"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceRule {
    /// `None` is the default rule.
    pub condition: Option<Condition>,
    pub verdict: Verdict,
    pub justification: Option<String>,
}

impl AcceptanceRule {
    pub fn is_default(&self) -> bool {
        self.condition.is_none()
    }
}

impl fmt::Display for AcceptanceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.condition {
            Some(c) => write!(f, "{} IF {c}", self.verdict)?,
            None => write!(f, "{}", self.verdict)?,
        }
        if let Some(j) = &self.justification {
            write!(f, " @ {j}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdfNode {
    pub name: String,
    pub children: Vec<Child>,
    pub rules: Vec<AcceptanceRule>,
}

impl AdfNode {
    pub fn child_nodes(&self) -> impl Iterator<Item = &str> {
        self.children.iter().filter_map(|c| match c {
            Child::Node(n) => Some(n.as_str()),
            Child::Factor(_) => None,
        })
    }

    pub fn factor_children(&self) -> impl Iterator<Item = &FactorId> {
        self.children.iter().filter_map(|c| match c {
            Child::Factor(f) => Some(f),
            Child::Node(_) => None,
        })
    }

    pub fn has_default(&self) -> bool {
        self.rules.iter().any(AcceptanceRule::is_default)
    }
}

/// Whether accepting a node helps the plaintiff's claim (positive) or the
/// defendant's (negative). Derived from how each parent's rules use it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    /// Side favoured by a verdict at a node of this polarity.
    pub fn side_of(self, verdict: Verdict) -> Side {
        match (self, verdict) {
            (Polarity::Positive, Verdict::Accept) | (Polarity::Negative, Verdict::Reject) => {
                Side::Plaintiff
            }
            _ => Side::Defendant,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adf {
    nodes: BTreeMap<String, AdfNode>,
    /// Declaration order.
    order: Vec<String>,
    root: String,
    parents: BTreeMap<String, Vec<String>>,
    descendants: BTreeMap<String, FactorSet>,
    polarity: BTreeMap<String, Polarity>,
    polarity_conflicts: Vec<String>,
}

impl Adf {
    /// Builds an ADF from nodes in declaration order. Fails on dangling
    /// references, misplaced defaults, atoms over undeclared children, cycles
    /// and a missing root.
    pub fn new(nodes: Vec<AdfNode>, root: &str) -> Result<Self> {
        let order: Vec<String> = nodes.iter().map(|n| n.name.clone()).collect();
        let nodes: BTreeMap<String, AdfNode> =
            nodes.into_iter().map(|n| (n.name.clone(), n)).collect();
        if !nodes.contains_key(root) {
            return Err(Error::MissingRoot);
        }
        for node in nodes.values() {
            for child in node.child_nodes() {
                if !nodes.contains_key(child) {
                    return Err(Error::UndeclaredChild {
                        node: node.name.clone(),
                        atom: child.to_string(),
                    });
                }
            }
            for rule in &node.rules {
                for atom in rule.condition.iter().flat_map(Condition::atoms) {
                    if !node.children.contains(atom) {
                        return Err(Error::UndeclaredChild {
                            node: node.name.clone(),
                            atom: atom.to_string(),
                        });
                    }
                }
            }
            if node.rules.is_empty() {
                return Err(Error::AdfParse {
                    line: 0,
                    message: format!("node `{}` has no rules", node.name),
                });
            }
            let defaults = node.rules.iter().filter(|r| r.is_default()).count();
            if defaults > 1 || (defaults == 1 && !node.rules.last().unwrap().is_default()) {
                return Err(Error::AdfParse {
                    line: 0,
                    message: format!("node `{}`: the default rule must be unique and last", node.name),
                });
            }
        }

        let mut parents: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for name in &order {
            for child in nodes[name].child_nodes() {
                parents.entry(child.to_string()).or_default().push(name.clone());
            }
        }

        let mut adf = Adf {
            nodes,
            order,
            root: root.to_string(),
            parents,
            descendants: BTreeMap::new(),
            polarity: BTreeMap::new(),
            polarity_conflicts: Vec::new(),
        };
        for name in adf.topological_order()? {
            let node = &adf.nodes[&name];
            let mut set: FactorSet = node.factor_children().cloned().collect();
            for child in node.child_nodes() {
                set.extend(adf.descendants[child].iter().cloned());
            }
            adf.descendants.insert(name, set);
        }
        adf.compute_polarity();
        Ok(adf)
    }

    /// Children before parents, over every declared node.
    pub fn topological_order(&self) -> Result<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Visiting,
            Done,
        }
        fn visit(
            adf: &Adf,
            name: &str,
            marks: &mut BTreeMap<String, Mark>,
            out: &mut Vec<String>,
        ) -> Result<()> {
            match marks.get(name) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Visiting) => return Err(Error::Cycle(name.to_string())),
                None => {}
            }
            marks.insert(name.to_string(), Mark::Visiting);
            for child in adf.nodes[name].child_nodes() {
                visit(adf, child, marks, out)?;
            }
            marks.insert(name.to_string(), Mark::Done);
            out.push(name.to_string());
            Ok(())
        }
        let mut marks = BTreeMap::new();
        let mut out = Vec::new();
        visit(self, &self.root, &mut marks, &mut out)?;
        for name in &self.order {
            visit(self, name, &mut marks, &mut out)?;
        }
        Ok(out)
    }

    fn compute_polarity(&mut self) {
        let mut queue = VecDeque::from([self.root.clone()]);
        self.polarity.insert(self.root.clone(), Polarity::Positive);
        while let Some(name) = queue.pop_front() {
            let parent_pol = self.polarity[&name];
            let node = &self.nodes[&name];
            for child in node.child_nodes() {
                let mut signs = Vec::new();
                for rule in &node.rules {
                    if let Some(cond) = &rule.condition {
                        let base = if rule.verdict.is_accept() { 1 } else { -1 };
                        let mut atoms = Vec::new();
                        cond.signed_atoms(base, &mut atoms);
                        signs.extend(
                            atoms
                                .into_iter()
                                .filter(|(c, _)| c.name() == child)
                                .map(|(_, s)| s),
                        );
                    }
                }
                if signs.iter().any(|&s| s != signs[0]) {
                    self.polarity_conflicts.push(child.to_string());
                }
                let edge = signs.first().copied().unwrap_or(1);
                let pol = if edge > 0 { parent_pol } else { parent_pol.flip() };
                match self.polarity.get(child) {
                    None => {
                        self.polarity.insert(child.to_string(), pol);
                        queue.push_back(child.to_string());
                    }
                    Some(&existing) if existing != pol => {
                        self.polarity_conflicts.push(child.to_string());
                    }
                    Some(_) => {}
                }
            }
        }
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn node(&self, name: &str) -> Result<&AdfNode> {
        self.nodes
            .get(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.nodes.contains_key(name)
    }

    /// Nodes in declaration order.
    pub fn nodes(&self) -> impl Iterator<Item = &AdfNode> {
        self.order.iter().map(|n| &self.nodes[n])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn parents(&self, name: &str) -> &[String] {
        self.parents.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Nodes that list the factor as a direct child, in declaration order.
    pub fn factor_parents(&self, id: &FactorId) -> Vec<&str> {
        self.nodes()
            .filter(|n| n.factor_children().any(|f| f == id))
            .map(|n| n.name.as_str())
            .collect()
    }

    /// All factors reachable from a node through child references.
    pub fn descendant_factors(&self, name: &str) -> Result<&FactorSet> {
        self.descendants
            .get(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn polarity(&self, name: &str) -> Polarity {
        self.polarity.get(name).copied().unwrap_or(Polarity::Positive)
    }

    /// Every factor housed anywhere in the ADF.
    pub fn housed_factors(&self) -> FactorSet {
        self.nodes
            .values()
            .flat_map(|n| n.factor_children().cloned())
            .collect()
    }

    pub fn reachable(&self) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.root.clone()];
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(self.nodes[&n].child_nodes().map(str::to_string));
            }
        }
        seen
    }

    /// A path of node names from the root down to `name`, following the first
    /// declared parent at each step.
    pub fn path_to(&self, name: &str) -> Result<Vec<String>> {
        self.node(name)?;
        let mut path = vec![name.to_string()];
        let mut current = name.to_string();
        while current != self.root {
            let parent = self
                .parents(&current)
                .first()
                .ok_or_else(|| Error::UnknownNode(current.clone()))?
                .clone();
            path.push(parent.clone());
            current = parent;
        }
        path.reverse();
        Ok(path)
    }

    /// Minimum number of upward edges from a factor or node to each of its
    /// ancestor nodes.
    pub fn ancestor_distances(&self, from: &Child) -> BTreeMap<String, usize> {
        let mut dist = BTreeMap::new();
        let mut queue: VecDeque<(String, usize)> = match from {
            Child::Factor(f) => self
                .factor_parents(f)
                .into_iter()
                .map(|p| (p.to_string(), 1))
                .collect(),
            Child::Node(n) => {
                dist.insert(n.clone(), 0);
                self.parents(n).iter().map(|p| (p.clone(), 1)).collect()
            }
        };
        while let Some((name, d)) = queue.pop_front() {
            if dist.contains_key(&name) {
                continue;
            }
            dist.insert(name.clone(), d);
            for p in self.parents(&name) {
                queue.push_back((p.clone(), d + 1));
            }
        }
        dist
    }

    /// Renders the ADF back to DSL text.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("ROOT {}\n", self.root);
        for node in self.nodes() {
            out.push_str(&format!("\nNODE {}\n", node.name));
            let children: Vec<String> = node.children.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("CHILDREN {}\n", children.join(", ")));
            for rule in &node.rules {
                out.push_str(&format!("{rule}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LintLevel {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LintKind {
    WideNode { node: String, children: usize },
    UnhousedFactor { factor: FactorId },
    UnknownFactor { node: String, factor: FactorId },
    MissingDefault { node: String },
    UnreachableNode { node: String },
    PolarityConflict { node: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lint {
    pub level: LintLevel,
    #[serde(flatten)]
    pub kind: LintKind,
}

impl fmt::Display for Lint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            LintLevel::Warning => "warning",
            LintLevel::Error => "error",
        };
        match &self.kind {
            LintKind::WideNode { node, children } => {
                write!(f, "{level}: node {node} has {children} children (more than 5)")
            }
            LintKind::UnhousedFactor { factor } => {
                write!(f, "{level}: factor {factor} is housed in no node")
            }
            LintKind::UnknownFactor { node, factor } => {
                write!(f, "{level}: node {node} houses {factor}, which is not in the catalogue")
            }
            LintKind::MissingDefault { node } => {
                write!(f, "{level}: node {node} has no default rule and may be undecidable")
            }
            LintKind::UnreachableNode { node } => {
                write!(f, "{level}: node {node} is unreachable from the root")
            }
            LintKind::PolarityConflict { node } => {
                write!(f, "{level}: node {node} is used with conflicting polarity")
            }
        }
    }
}

/// Static checks that do not prevent evaluation.
pub fn validate_adf(adf: &Adf, catalogue: &FactorCatalogue) -> Vec<Lint> {
    let warn = |kind| Lint {
        level: LintLevel::Warning,
        kind,
    };
    let error = |kind| Lint {
        level: LintLevel::Error,
        kind,
    };
    let mut lints = Vec::new();
    let reachable = adf.reachable();
    for node in adf.nodes() {
        if node.children.len() > 5 {
            lints.push(warn(LintKind::WideNode {
                node: node.name.clone(),
                children: node.children.len(),
            }));
        }
        if !node.has_default() {
            lints.push(warn(LintKind::MissingDefault {
                node: node.name.clone(),
            }));
        }
        if !reachable.contains(&node.name) {
            lints.push(warn(LintKind::UnreachableNode {
                node: node.name.clone(),
            }));
        }
        for f in node.factor_children() {
            if !catalogue.contains(f) {
                lints.push(error(LintKind::UnknownFactor {
                    node: node.name.clone(),
                    factor: f.clone(),
                }));
            }
        }
    }
    let housed = adf.housed_factors();
    for id in catalogue.ids() {
        if !housed.contains(id) {
            lints.push(warn(LintKind::UnhousedFactor { factor: id.clone() }));
        }
    }
    let mut conflicts: Vec<&String> = adf.polarity_conflicts.iter().collect();
    conflicts.sort();
    conflicts.dedup();
    for node in conflicts {
        lints.push(error(LintKind::PolarityConflict { node: node.clone() }));
    }
    lints
}

/// The shipped trade-secret ADF.
pub fn trade_secrets() -> Adf {
    parse_adf(TRADE_SECRETS_ADF).expect("bundled ADF parses")
}
