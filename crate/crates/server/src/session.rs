//! In-memory dialogue sessions with idle expiry. Each session sits behind
//! its own lock so moves on one session run one at a time.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::http::StatusCode;

use issuewise::explain::{DialogueState, IracExplanation};
use issuewise::precedent::Model;

use crate::ApiError;

#[derive(Debug)]
pub struct Session {
    pub state: DialogueState,
    pub explanation: IracExplanation,
    pub model: Model,
    pub created: Instant,
    pub last_used: Instant,
}

type Slot = Arc<tokio::sync::Mutex<Session>>;

#[derive(Debug)]
pub struct Sessions {
    idle: Duration,
    live: Mutex<HashMap<String, Slot>>,
    expired: Mutex<HashSet<String>>,
}

impl Sessions {
    pub fn new(idle: Duration) -> Self {
        Sessions {
            idle,
            live: Mutex::new(HashMap::new()),
            expired: Mutex::new(HashSet::new()),
        }
    }

    pub fn insert(&self, state: DialogueState, explanation: IracExplanation, model: Model) -> String {
        self.sweep();
        let id = uuid::Uuid::new_v4().to_string();
        let now = Instant::now();
        let session = Session {
            state,
            explanation,
            model,
            created: now,
            last_used: now,
        };
        self.live
            .lock()
            .expect("session table poisoned")
            .insert(id.clone(), Arc::new(tokio::sync::Mutex::new(session)));
        id
    }

    /// Moves idle sessions to the expired set. A session whose lock is
    /// held is in use and stays.
    pub fn sweep(&self) {
        let mut live = self.live.lock().expect("session table poisoned");
        let stale: Vec<String> = live
            .iter()
            .filter(|(_, s)| s.try_lock().is_ok_and(|s| s.last_used.elapsed() > self.idle))
            .map(|(id, _)| id.clone())
            .collect();
        if stale.is_empty() {
            return;
        }
        let mut expired = self.expired.lock().expect("session table poisoned");
        for id in stale {
            live.remove(&id);
            log::debug!("session {id} expired");
            expired.insert(id);
        }
    }

    pub fn get(&self, id: &str) -> Result<Slot, ApiError> {
        self.sweep();
        if let Some(slot) = self.live.lock().expect("session table poisoned").get(id) {
            return Ok(slot.clone());
        }
        if self.expired.lock().expect("session table poisoned").contains(id) {
            return Err(ApiError::new(StatusCode::GONE, format!("session `{id}` has expired")));
        }
        Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown session `{id}`")))
    }

    pub fn len(&self) -> usize {
        self.live.lock().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
