//! In-memory session store with inactivity expiry, an event channel per
//! session and an optional append-only log.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use boardmind_core::difficulty::DifficultyParams;
use boardmind_core::player::Player;
use boardmind_core::GameSpec;
use serde_json::json;
use tokio::sync::broadcast;

use crate::error::ServiceError;
use crate::session::{Session, SessionView};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Default engine time per move.
    pub budget: Duration,
    /// Include the engine's move values in session payloads.
    pub reveal_evaluations: bool,
    /// Sessions untouched for this long are dropped.
    pub expiry: Duration,
    /// Append-only JSON-lines log of session events.
    pub log_path: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            budget: Duration::from_secs(1),
            reveal_evaluations: false,
            expiry: Duration::from_secs(3600),
            log_path: None,
        }
    }
}

pub struct SessionSlot {
    session: Mutex<Session>,
    events: broadcast::Sender<SessionView>,
    touched: Mutex<Instant>,
}

impl SessionSlot {
    /// Locks the session; operations on one session are serialized here.
    pub fn lock(&self) -> MutexGuard<'_, Session> {
        *self.touched.lock().expect("touch lock") = Instant::now();
        self.session.lock().expect("session lock poisoned")
    }

    pub fn subscribe(&self) -> broadcast::Receiver<SessionView> {
        self.events.subscribe()
    }

    fn touched(&self) -> Instant {
        *self.touched.lock().expect("touch lock")
    }
}

pub struct SessionStore {
    config: ServiceConfig,
    sessions: Mutex<HashMap<String, Arc<SessionSlot>>>,
    log: Option<Mutex<File>>,
}

impl SessionStore {
    pub fn new(config: ServiceConfig) -> std::io::Result<Self> {
        let log = match &config.log_path {
            Some(p) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(p)?)),
            None => None,
        };
        Ok(SessionStore { config, sessions: Mutex::new(HashMap::new()), log })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn create(
        &self,
        spec: GameSpec,
        human: Player,
        difficulty: DifficultyParams,
        budget: Option<Duration>,
    ) -> Arc<SessionSlot> {
        let id = format!("{:032x}", rand::random::<u128>());
        let session = Session::new(id.clone(), spec, human, difficulty, budget.unwrap_or(self.config.budget), rand::random());
        self.record(&session, "created", None);
        let (events, _) = broadcast::channel(64);
        let slot = Arc::new(SessionSlot { session: Mutex::new(session), events, touched: Mutex::new(Instant::now()) });
        self.sessions.lock().expect("store lock").insert(id, slot.clone());
        slot
    }

    pub fn get(&self, id: &str) -> Result<Arc<SessionSlot>, ServiceError> {
        self.sessions.lock().expect("store lock").get(id).cloned().ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle since before `now - expiry`. Returns how many.
    pub fn purge_expired(&self, now: Instant) -> usize {
        let mut sessions = self.sessions.lock().expect("store lock");
        let before = sessions.len();
        sessions.retain(|_, slot| now.saturating_duration_since(slot.touched()) < self.config.expiry);
        before - sessions.len()
    }

    /// Sends the current view to subscribers.
    pub fn publish(&self, slot: &SessionSlot, session: &Session) {
        let _ = slot.events.send(session.view(self.config.reveal_evaluations));
    }

    /// Appends one event to the session log, if logging is on.
    pub fn record(&self, session: &Session, event: &str, mv: Option<String>) {
        let Some(log) = &self.log else { return };
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64);
        let line = json!({
            "ts_ms": ts,
            "session": session.id(),
            "event": event,
            "game": session.spec().id().slug(),
            "variant": session.spec().variant().name(),
            "move": mv,
            "status": session.status(),
        });
        let mut f = log.lock().expect("log lock");
        if let Err(e) = writeln!(f, "{line}") {
            tracing::warn!("session log write failed: {e}");
        }
    }
}
