#![allow(dead_code)]

pub mod oracle;
pub mod props;

use std::path::PathBuf;

use issuewise::adf::{trade_secrets, Adf};
use issuewise::explain::{render_irac, render_transcript, DialogueMove, Explainer, PhraseTable};
use issuewise::model::cato_cases;
use issuewise::precedent::Model;
use issuewise::CaseBase;

pub struct Fixture {
    pub adf: Adf,
    pub base: CaseBase,
    pub phrases: PhraseTable,
}

impl Fixture {
    pub fn new() -> Self {
        Fixture {
            adf: trade_secrets(),
            base: cato_cases(),
            phrases: PhraseTable::default(),
        }
    }

    pub fn explainer(&self) -> Explainer<'_> {
        Explainer::new(&self.adf, &self.base, &self.phrases, Model::Reason)
    }

    pub fn irac_text(&self, case: &str) -> String {
        let ex = self.explainer();
        render_irac(&ex.generate_irac(self.base.case(case).unwrap()).unwrap())
    }

    /// Runs a scripted dialogue: each entry is an issue number and the moves
    /// made on it.
    pub fn transcript(&self, case: &str, script: &[(usize, &[&str])]) -> String {
        let ex = self.explainer();
        let irac = ex.generate_irac(self.base.case(case).unwrap()).unwrap();
        let mut state = None;
        for (issue, moves) in script {
            let mut s = match state.take() {
                None => ex.dialogue_start(&irac, *issue).unwrap(),
                Some(prev) => ex.dialogue_switch(prev, &irac, *issue).unwrap(),
            };
            for m in *moves {
                let mv: DialogueMove = m.parse().unwrap();
                s = ex.dialogue_move(s, mv).unwrap().0;
            }
            state = Some(s);
        }
        render_transcript(&state.unwrap())
    }
}

pub const BOEING_SCRIPT: &[(usize, &[&str])] = &[
    (1, &["so", "so", "why", "why"]),
    (2, &["so", "so", "so", "ok"]),
];

pub const BRIBED_SCRIPT: &[(usize, &[&str])] = &[
    (1, &["so", "so", "why", "why", "why", "why", "why", "ok"]),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a frozen golden file. `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs:\n--- expected\n{expected}\n--- actual\n{actual}"))
    }
}

pub const GOLDEN_IRAC: &[&str] = &["Bribed", "NoMeasures", "Mason", "Boeing"];
