//! Line-oriented ADF text format.
//!
//! ```text
//! ROOT TradeSecretMisappropriation
//! NODE InfoObtainable
//! CHILDREN F15p, F16d, F20d, F24d
//! REJECT IF F15p @ College
//! ACCEPT IF F24d OR F20d OR F16d @ Ferranti
//! REJECT
//! ```
//!
//! `#` starts a comment. Children may be separated by commas or blanks.
//! Conditions use `AND`, `OR`, `NOT` and parentheses, binding in the usual
//! order. Anything after `@` is the rule's justification.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;

use super::{AcceptanceRule, Adf, AdfNode, Child, Condition, Verdict};
use crate::error::{Error, Result};
use crate::model::FactorId;

fn factor_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[Ff](\d+)([PpDd])$").unwrap())
}

fn resolve(token: &str, nodes: &BTreeSet<String>) -> Child {
    if nodes.contains(token) {
        return Child::Node(token.to_string());
    }
    match factor_pattern().captures(token) {
        Some(c) => Child::Factor(FactorId::new(format!(
            "F{}{}",
            &c[1],
            c[2].to_ascii_lowercase()
        ))),
        None => Child::Factor(FactorId::new(token)),
    }
}

pub fn parse_adf(text: &str) -> Result<Adf> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let err = |line: usize, message: String| Error::AdfParse { line, message };

    let node_names: BTreeSet<String> = lines
        .iter()
        .filter_map(|(_, l)| l.strip_prefix("NODE "))
        .map(|n| n.trim().to_string())
        .collect();

    let mut root: Option<String> = None;
    let mut nodes: Vec<AdfNode> = Vec::new();
    let mut seen = BTreeSet::new();

    for &(no, line) in &lines {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "ROOT" => {
                if rest.is_empty() {
                    return Err(err(no, "ROOT needs a node name".into()));
                }
                if root.replace(rest.to_string()).is_some() {
                    return Err(err(no, "ROOT declared twice".into()));
                }
            }
            "NODE" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(no, format!("bad node name `{rest}`")));
                }
                if !seen.insert(rest.to_string()) {
                    return Err(err(no, format!("node `{rest}` declared twice")));
                }
                nodes.push(AdfNode {
                    name: rest.to_string(),
                    children: Vec::new(),
                    rules: Vec::new(),
                });
            }
            "CHILDREN" => {
                let node = nodes
                    .last_mut()
                    .ok_or_else(|| err(no, "CHILDREN before any NODE".into()))?;
                if !node.children.is_empty() || !node.rules.is_empty() {
                    return Err(err(no, format!("unexpected CHILDREN for `{}`", node.name)));
                }
                for token in rest.split(|c: char| c == ',' || c.is_whitespace()) {
                    if token.is_empty() {
                        continue;
                    }
                    let child = resolve(token, &node_names);
                    if node.children.contains(&child) {
                        return Err(err(no, format!("duplicate child `{token}`")));
                    }
                    node.children.push(child);
                }
            }
            "ACCEPT" | "REJECT" => {
                let verdict = if keyword == "ACCEPT" {
                    Verdict::Accept
                } else {
                    Verdict::Reject
                };
                let node = nodes
                    .last_mut()
                    .ok_or_else(|| err(no, "rule before any NODE".into()))?;
                let (body, justification) = match rest.split_once('@') {
                    Some((b, j)) => (b.trim(), Some(j.trim().to_string()).filter(|j| !j.is_empty())),
                    None => (rest, None),
                };
                let condition = if body.is_empty() {
                    None
                } else {
                    let cond = body
                        .strip_prefix("IF")
                        .filter(|c| c.starts_with(char::is_whitespace))
                        .ok_or_else(|| err(no, format!("expected IF, found `{body}`")))?;
                    let condition = parse_condition(cond, &node_names).map_err(|m| err(no, m))?;
                    for atom in condition.atoms() {
                        if !node.children.contains(atom) {
                            return Err(Error::UndeclaredChild {
                                node: node.name.clone(),
                                atom: atom.to_string(),
                            });
                        }
                    }
                    Some(condition)
                };
                if node.rules.last().is_some_and(AcceptanceRule::is_default) {
                    return Err(err(no, format!("rule after the default in `{}`", node.name)));
                }
                node.rules.push(AcceptanceRule {
                    condition,
                    verdict,
                    justification,
                });
            }
            other => return Err(err(no, format!("unknown keyword `{other}`"))),
        }
    }

    let root = root.ok_or(Error::MissingRoot)?;
    Adf::new(nodes, &root)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    And,
    Or,
    Not,
    Open,
    Close,
}

fn tokenize(text: &str) -> Vec<Token> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    spaced
        .split_whitespace()
        .map(|w| match w {
            "AND" => Token::And,
            "OR" => Token::Or,
            "NOT" => Token::Not,
            "(" => Token::Open,
            ")" => Token::Close,
            _ => Token::Ident(w.to_string()),
        })
        .collect()
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    nodes: &'a BTreeSet<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn or(&mut self) -> Result<Condition, String> {
        let mut left = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let right = self.and()?;
            left = Condition::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Condition, String> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let right = self.unary()?;
            left = Condition::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Condition, String> {
        match self.next() {
            Some(Token::Not) => Ok(Condition::Not(Box::new(self.unary()?))),
            Some(Token::Open) => {
                let inner = self.or()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err("missing `)`".into()),
                }
            }
            Some(Token::Ident(name)) => Ok(Condition::Atom(resolve(&name, self.nodes))),
            Some(t) => Err(format!("unexpected {t:?} in condition")),
            None => Err("condition ends early".into()),
        }
    }
}

fn parse_condition(text: &str, nodes: &BTreeSet<String>) -> Result<Condition, String> {
    let mut parser = Parser {
        tokens: tokenize(text),
        pos: 0,
        nodes,
    };
    let cond = parser.or()?;
    if parser.pos < parser.tokens.len() {
        return Err(format!("trailing input after condition: {:?}", parser.tokens[parser.pos]));
    }
    Ok(cond)
}
