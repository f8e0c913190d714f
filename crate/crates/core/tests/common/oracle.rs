//! The trade-secrets rule table transcribed as plain boolean formulas, with
//! no shared code beyond factor ids. Used to cross-check the ADF engine.

use std::collections::BTreeMap;

use issuewise::FactorSet;

pub fn oracle(factors: &FactorSet) -> BTreeMap<&'static str, bool> {
    let f = |id: &str| factors.iter().any(|x| x.as_str() == id);

    let measures_outsiders = f("F12p") || !f("F10d");
    let info_obtainable = !f("F15p") && (f("F24d") || f("F20d") || f("F16d"));
    let own_efforts = f("F17d") || f("F25d");
    let notice_confid = !f("F23d") && (f("F21p") || !f("F1d"));
    let explicit_agreement = !f("F5d") && (f("F4p") || f("F13p"));
    let illegal_act = f("F2p") || f("F22p") || f("F26p");
    let info_misuse = f("F7p") || f("F14p");
    let confid_relation = notice_confid || explicit_agreement;
    let improper_means = info_misuse || illegal_act;
    let info_used = info_misuse || f("F8p") || f("F18p") || !own_efforts;
    let wrong_doing = !f("F3d") && !own_efforts && (improper_means || confid_relation);
    let info_valuable = !f("F11d") && (f("F8p") || f("F6p") || f("F15p") || !info_obtainable);
    let maintain_secrecy = !f("F27d") && !f("F19d") && (f("F6p") || measures_outsiders);
    let info_trade_secret = info_valuable && maintain_secrecy;
    let info_misappropriated = wrong_doing && info_used;
    let root = info_trade_secret && info_misappropriated;

    BTreeMap::from([
        ("TradeSecretMisappropriation", root),
        ("InfoTradeSecret", info_trade_secret),
        ("InfoMisappropriated", info_misappropriated),
        ("InfoValuable", info_valuable),
        ("MaintainSecrecy", maintain_secrecy),
        ("WrongDoing", wrong_doing),
        ("ImproperMeans", improper_means),
        ("ConfidRelation", confid_relation),
        ("InfoUsed", info_used),
        ("InfoMisuse", info_misuse),
        ("IllegalAct", illegal_act),
        ("NoticeConfid", notice_confid),
        ("ExplicitAgreement", explicit_agreement),
        ("InfoObtainable", info_obtainable),
        ("MeasuresOutsiders", measures_outsiders),
        ("OwnEfforts", own_efforts),
    ])
}

/// Hand-derived outcome per golden case ("P" or "D"), committed as a fixture.
pub fn expected_outcomes() -> BTreeMap<String, String> {
    let text = include_str!("../fixtures/outcomes.json");
    serde_json::from_str(text).expect("outcome fixture parses")
}
