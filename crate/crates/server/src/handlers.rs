use std::time::Instant;

use axum::extract::{Path, Query, State};
use axum::Json;
use serde::{Deserialize, Serialize};

use issuewise::adf::{evaluate, spot_issues, EvaluationTrace, Issue, Verdict};
use issuewise::argument::{build_argument_tree, prune_by_issues, render_tree, ArgumentNode};
use issuewise::explain::{render_irac, DialogueMove, DialogueState, Exchange, Explainer, IracExplanation};
use issuewise::model::{validate_factors, CaseRecord, Violation};
use issuewise::precedent::Model;
use issuewise::{Case, FactorId, FactorSet, Outcome, Side};

use crate::{ApiError, AppState, Engine};

type ApiResult<T> = Result<Json<T>, ApiError>;

/// A case named from the corpus, or an inline factor list. Inline factors
/// win when both are given.
#[derive(Debug, Default, Deserialize)]
pub struct CaseInput {
    #[serde(default)]
    case: Option<String>,
    #[serde(default)]
    factors: Option<Vec<String>>,
    #[serde(default)]
    model: Option<String>,
}

fn parse_model(raw: &Option<String>) -> Result<Model, ApiError> {
    match raw {
        Some(m) => m.parse().map_err(ApiError::bad_request),
        None => Ok(Model::default()),
    }
}

/// Normalizes tokens and checks them against the catalogue; every problem
/// is reported, not just the first.
fn checked_factors<'a>(engine: &Engine, tokens: impl IntoIterator<Item = &'a str>) -> Result<FactorSet, ApiError> {
    let cat = &engine.base.catalogue;
    let mut set = FactorSet::new();
    let mut violations = Vec::new();
    for t in tokens {
        match cat.normalize_token(t) {
            Ok((id, _)) => {
                set.insert(id);
            }
            Err(_) => violations.push(Violation::UnknownFactor {
                factor: FactorId::new(t),
            }),
        }
    }
    violations.extend(validate_factors(&set, cat));
    if violations.is_empty() {
        Ok(set)
    } else {
        Err(ApiError {
            violations,
            ..ApiError::bad_request("invalid factors")
        })
    }
}

fn resolve(engine: &Engine, input: &CaseInput) -> Result<Case, ApiError> {
    match (&input.factors, &input.case) {
        (Some(tokens), name) => {
            let factors = checked_factors(engine, tokens.iter().map(String::as_str))?;
            let name = name.clone().unwrap_or_else(|| "Hypothetical".into());
            Ok(Case::new(name, factors, Outcome::Undecided))
        }
        (None, Some(name)) => Ok(engine.base.case(name)?.clone()),
        (None, None) => Err(ApiError::bad_request("expected `case` or `factors`")),
    }
}

pub async fn list_cases(State(app): State<AppState>) -> Json<Vec<CaseRecord>> {
    Json(app.engine.base.cases.iter().map(CaseRecord::from).collect())
}

#[derive(Debug, Serialize)]
pub struct FactorView {
    id: FactorId,
    label: String,
    side: Side,
}

#[derive(Debug, Serialize)]
pub struct CaseView {
    #[serde(flatten)]
    record: CaseRecord,
    title: String,
    details: Vec<FactorView>,
}

pub async fn get_case(State(app): State<AppState>, Path(name): Path<String>) -> ApiResult<CaseView> {
    let case = app.engine.base.case(&name)?;
    let cat = &app.engine.base.catalogue;
    let details = case
        .factors
        .iter()
        .map(|f| {
            Ok(FactorView {
                id: f.clone(),
                label: cat.label(f),
                side: cat.factor_side(f)?,
            })
        })
        .collect::<issuewise::Result<_>>()?;
    Ok(Json(CaseView {
        record: CaseRecord::from(case),
        title: case.title().to_string(),
        details,
    }))
}

#[derive(Debug, Serialize)]
pub struct Decision {
    case: String,
    factors: FactorSet,
    decision: Side,
    trace: EvaluationTrace,
    issues: Vec<Issue>,
}

fn decision_for(engine: &Engine, case: &Case) -> Result<Decision, ApiError> {
    let trace = evaluate(&engine.adf, &case.factors)?;
    Ok(Decision {
        case: case.name.clone(),
        factors: case.factors.clone(),
        decision: trace.outcome(),
        issues: spot_issues(&engine.adf, &case.factors, &engine.base.catalogue),
        trace,
    })
}

pub async fn decide(State(app): State<AppState>, Json(input): Json<CaseInput>) -> ApiResult<Decision> {
    let case = resolve(&app.engine, &input)?;
    Ok(Json(decision_for(&app.engine, &case)?))
}

#[derive(Debug, Serialize)]
pub struct Explanation {
    model: Model,
    explanation: IracExplanation,
    text: String,
}

pub async fn explain(State(app): State<AppState>, Json(input): Json<CaseInput>) -> ApiResult<Explanation> {
    let engine = &app.engine;
    let model = parse_model(&input.model)?;
    let case = resolve(engine, &input)?;
    let ex = Explainer::new(&engine.adf, &engine.base, &engine.phrases, model);
    let explanation = ex.generate_irac(&case)?;
    Ok(Json(Explanation {
        model,
        text: render_irac(&explanation),
        explanation,
    }))
}

#[derive(Debug, Deserialize)]
pub struct DialogueRequest {
    #[serde(flatten)]
    input: CaseInput,
    #[serde(default = "first_issue")]
    issue: usize,
}

fn first_issue() -> usize {
    1
}

#[derive(Debug, Serialize)]
pub struct DialogueView {
    session: String,
    case: String,
    issues: Vec<String>,
    issue: usize,
    seed: String,
    focus: String,
    focus_claim: String,
    closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    statement: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reply: Option<usize>,
    transcript: Vec<Exchange>,
}

fn dialogue_view(
    ex: &Explainer<'_>,
    session: String,
    state: &DialogueState,
    last: Option<&Exchange>,
) -> Result<DialogueView, ApiError> {
    Ok(DialogueView {
        session,
        case: state.case.clone(),
        issues: state.issues.clone(),
        issue: state.issue,
        seed: state.seed.clone(),
        focus: state.focus.clone(),
        focus_claim: ex.focus_claim(state)?,
        closed: state.closed,
        statement: last.map(|x| x.statement.clone()),
        reply: last.and_then(|x| x.reply),
        transcript: state.transcript.clone(),
    })
}

pub async fn start_dialogue(
    State(app): State<AppState>,
    Json(req): Json<DialogueRequest>,
) -> ApiResult<DialogueView> {
    let engine = &app.engine;
    let model = parse_model(&req.input.model)?;
    let case = resolve(engine, &req.input)?;
    let ex = Explainer::new(&engine.adf, &engine.base, &engine.phrases, model);
    let explanation = ex.generate_irac(&case)?;
    let state = ex.dialogue_start(&explanation, req.issue)?;
    let view = dialogue_view(&ex, String::new(), &state, None)?;
    let id = app.sessions.insert(state, explanation, model);
    Ok(Json(DialogueView { session: id, ..view }))
}

/// `{"move": "SO" | "WHY" | "OK", "child"?: node}` or `{"issue": n}` to
/// turn to another issue.
#[derive(Debug, Deserialize)]
pub struct MoveRequest {
    #[serde(default, rename = "move")]
    kind: Option<String>,
    #[serde(default)]
    child: Option<String>,
    #[serde(default)]
    issue: Option<usize>,
}

pub async fn dialogue_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<MoveRequest>,
) -> ApiResult<DialogueView> {
    let slot = app.sessions.get(&id)?;
    let mut session = slot.lock().await;
    let engine = &app.engine;
    let ex = Explainer::new(&engine.adf, &engine.base, &engine.phrases, session.model);

    if let Some(issue) = req.issue {
        if req.kind.is_none() {
            let state = ex.dialogue_switch(session.state.clone(), &session.explanation, issue)?;
            session.state = state;
            session.last_used = Instant::now();
            return Ok(Json(dialogue_view(&ex, id, &session.state, None)?));
        }
    }
    let raw = req
        .kind
        .ok_or_else(|| ApiError::bad_request("expected `move` or `issue`"))?;
    let mut mv: DialogueMove = raw.parse().map_err(ApiError::bad_request)?;
    if let (DialogueMove::Why { child }, Some(c)) = (&mut mv, req.child) {
        *child = Some(c);
    }
    let (state, _) = ex.dialogue_move(session.state.clone(), mv)?;
    session.state = state;
    session.last_used = Instant::now();
    let view = dialogue_view(&ex, id, &session.state, session.state.transcript.last())?;
    Ok(Json(view))
}

#[derive(Debug, Deserialize)]
pub struct WhatIfRequest {
    case: String,
    #[serde(default)]
    add: Vec<String>,
    #[serde(default)]
    remove: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Flip {
    node: String,
    before: Verdict,
    after: Verdict,
}

#[derive(Debug, Serialize)]
pub struct WhatIf {
    case: String,
    factors: FactorSet,
    before: Side,
    after: Side,
    decision_changed: bool,
    flipped: Vec<Flip>,
    issues: Vec<Issue>,
    trace: EvaluationTrace,
}

pub async fn whatif(State(app): State<AppState>, Json(req): Json<WhatIfRequest>) -> ApiResult<WhatIf> {
    let engine = &app.engine;
    let base_case = engine.base.case(&req.case)?;
    let cat = &engine.base.catalogue;
    let (add, _) = cat.normalize_all(req.add.iter().map(String::as_str))?;
    let (remove, _) = cat.normalize_all(req.remove.iter().map(String::as_str))?;
    let factors: FactorSet = base_case
        .factors
        .union(&add)
        .filter(|f| !remove.contains(*f))
        .cloned()
        .collect();
    let tokens: Vec<&str> = factors.iter().map(FactorId::as_str).collect();
    let factors = checked_factors(engine, tokens)?;

    let before = evaluate(&engine.adf, &base_case.factors)?;
    let after = evaluate(&engine.adf, &factors)?;
    let flipped = engine
        .adf
        .nodes()
        .filter_map(|n| {
            let (b, a) = (before.verdict(&n.name)?, after.verdict(&n.name)?);
            (a != b).then(|| Flip {
                node: n.name.clone(),
                before: b,
                after: a,
            })
        })
        .collect();
    Ok(Json(WhatIf {
        case: req.case,
        before: before.outcome(),
        after: after.outcome(),
        decision_changed: before.outcome() != after.outcome(),
        flipped,
        issues: spot_issues(&engine.adf, &factors, cat),
        factors,
        trace: after,
    }))
}

#[derive(Debug, Deserialize)]
pub struct ArgueQuery {
    #[serde(default)]
    issues: Option<String>,
    #[serde(default)]
    side: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Argument {
    case: String,
    side: Side,
    pruned: bool,
    tree: ArgumentNode,
    text: String,
}

pub async fn argue(
    State(app): State<AppState>,
    Path(name): Path<String>,
    Query(q): Query<ArgueQuery>,
) -> ApiResult<Argument> {
    let engine = &app.engine;
    let case = engine.base.case(&name)?;
    let pruned = match q.issues.as_deref().map(str::to_ascii_lowercase).as_deref() {
        None | Some("on") => true,
        Some("off") => false,
        Some(other) => return Err(ApiError::bad_request(format!("issues must be on or off, not `{other}`"))),
    };
    let side = match (&q.side, case.outcome.side()) {
        (Some(s), _) => s.parse().map_err(ApiError::bad_request)?,
        (None, Some(s)) => s,
        (None, None) => evaluate(&engine.adf, &case.factors)?.outcome(),
    };
    let mut tree = build_argument_tree(&engine.base, &engine.adf, case, side)?;
    if pruned {
        let issues = spot_issues(&engine.adf, &case.factors, &engine.base.catalogue);
        tree = prune_by_issues(&tree, &issues, &engine.adf);
    }
    Ok(Json(Argument {
        case: name.clone(),
        side,
        pruned,
        text: render_tree(&tree, &name, &engine.base.catalogue),
        tree,
    }))
}
