use std::fmt;
use std::str::FromStr;

use super::{DialogueState, IracExplanation};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "text" => Ok(Format::Plain),
            "structured" | "json" => Ok(Format::Structured),
            _ => Err(format!("unknown format `{s}` (expected plain or structured)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Plain => "plain",
            Format::Structured => "structured",
        })
    }
}

fn count_word(n: usize) -> String {
    const WORDS: [&str; 11] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    ];
    WORDS.get(n).map(|w| w.to_string()).unwrap_or_else(|| n.to_string())
}

pub fn render_irac(e: &IracExplanation) -> String {
    let mut out = format!("{}\n", e.title);
    let decision = format!("The decision is for the {}.", e.decision.noun());
    match e.items.len() {
        0 => out.push_str(&format!("{decision}\n")),
        1 => out.push_str(&format!("{decision} There is one issue:\n")),
        n => out.push_str(&format!("{decision} There are {} issues:\n", count_word(n))),
    }
    for (i, item) in e.items.iter().enumerate() {
        out.push_str(&format!("{}. {}\n", i + 1, item.text()));
    }
    out
}

pub fn render_structured(e: &IracExplanation) -> Result<String> {
    Ok(serde_json::to_string_pretty(e)?)
}

pub fn render_transcript(state: &DialogueState) -> String {
    let mut out = String::new();
    for x in &state.transcript {
        out.push_str(&x.prompt);
        out.push('\n');
        if x.statement.is_empty() {
            continue;
        }
        match x.reply {
            Some(n) => out.push_str(&format!("Reply {n}: {}\n", x.statement)),
            None => out.push_str(&format!("{}\n", x.statement)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adf::trade_secrets;
    use crate::explain::{Explainer, PhraseTable};
    use crate::model::cato_cases;
    use crate::precedent::Model;

    #[test]
    fn plain_and_structured() {
        let adf = trade_secrets();
        let base = cato_cases();
        let phrases = PhraseTable::default();
        let ex = Explainer::new(&adf, &base, &phrases, Model::Reason);
        let e = ex.generate_irac(base.case("Boeing").unwrap()).unwrap();
        let text = render_irac(&e);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "The decision is for the plaintiff. There are two issues:");
        assert!(lines[2].starts_with("1. Whether adequate measures"));

        let json = render_structured(&e).unwrap();
        let back: IracExplanation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);

        let mut empty = e.clone();
        empty.items.clear();
        assert_eq!(render_irac(&empty).lines().count(), 2);
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Structured);
        assert_eq!(Format::Plain.to_string(), "plain");
        assert!("xml".parse::<Format>().is_err());
    }
}
