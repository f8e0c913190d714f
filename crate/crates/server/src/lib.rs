//! HTTP server exposing the engine: case listing, decisions, IRAC
//! explanations, dialogue sessions, what-if re-decisions and argument trees.

mod error;
mod handlers;
mod session;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::routing::{get, post};
use axum::Router;

use issuewise::adf::{parse_adf, trade_secrets, validate_adf, Adf, LintLevel};
use issuewise::explain::PhraseTable;
use issuewise::model::{cato_cases, parse_case_corpus};
use issuewise::CaseBase;

pub use error::ApiError;
pub use session::Sessions;

/// Immutable assets shared by every request.
#[derive(Debug, Clone)]
pub struct Engine {
    pub adf: Adf,
    pub base: CaseBase,
    pub phrases: PhraseTable,
}

impl Engine {
    pub fn bundled() -> Self {
        Engine {
            adf: trade_secrets(),
            base: cato_cases(),
            phrases: PhraseTable::default(),
        }
    }

    /// Builds an engine from ADF and corpus documents. Error-level ADF lints
    /// are rejected.
    pub fn from_texts(adf: &str, corpus: &str) -> issuewise::Result<Self> {
        let adf = parse_adf(adf)?;
        let base = parse_case_corpus(corpus)?;
        if let Some(lint) = validate_adf(&adf, &base.catalogue)
            .into_iter()
            .find(|l| l.level == LintLevel::Error)
        {
            return Err(issuewise::Error::AdfParse {
                line: 0,
                message: lint.to_string(),
            });
        }
        Ok(Engine {
            adf,
            base,
            phrases: PhraseTable::default(),
        })
    }
}

#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<Engine>,
    pub sessions: Arc<Sessions>,
}

impl AppState {
    pub fn new(engine: Engine, idle: Duration) -> Self {
        AppState {
            engine: Arc::new(engine),
            sessions: Arc::new(Sessions::new(idle)),
        }
    }
}

pub const DEFAULT_IDLE: Duration = Duration::from_secs(30 * 60);

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/cases", get(handlers::list_cases))
        .route("/cases/{name}", get(handlers::get_case))
        .route("/decide", post(handlers::decide))
        .route("/explain", post(handlers::explain))
        .route("/dialogue", post(handlers::start_dialogue))
        .route("/dialogue/{id}/move", post(handlers::dialogue_move))
        .route("/whatif", post(handlers::whatif))
        .route("/argue/{name}", get(handlers::argue))
        .with_state(state)
}

pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
