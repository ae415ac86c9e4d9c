//! HTTP routes.
//!
//! | method | path                     |                                      |
//! |--------|--------------------------|--------------------------------------|
//! | POST   | `/sessions`              | start a game                         |
//! | GET    | `/sessions/{id}`         | current payload                      |
//! | POST   | `/sessions/{id}/moves`   | human move (`?wait=true` blocks for the reply) |
//! | GET    | `/sessions/{id}/events`  | server-sent `state` events           |
//! | GET    | `/games`                 | game catalogue                       |
//! | GET    | `/games/{id}/board`      | board graph file (`.json` for JSON)  |

use std::convert::Infallible;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use boardmind_core::difficulty::{DifficultyParams, DifficultyPreset};
use boardmind_core::games::{GameId, RuleVariant};
use boardmind_core::moves::Move;
use boardmind_core::player::Player;
use boardmind_core::GameSpec;
use futures::stream::{self, Stream, StreamExt};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::sync::broadcast::error::RecvError;

use crate::error::ServiceError;
use crate::session::{SessionStatus, SessionView};
use crate::store::{SessionSlot, SessionStore};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let message = self.to_string();
        let (code, body) = match &self {
            ServiceError::NotFound(_) => (StatusCode::NOT_FOUND, json!({ "error": message })),
            ServiceError::Conflict(status) => (StatusCode::CONFLICT, json!({ "error": message, "status": status })),
            ServiceError::Illegal { rule, .. } => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": message, "rule": rule }))
            }
            ServiceError::Validation(_) => (StatusCode::BAD_REQUEST, json!({ "error": message })),
            ServiceError::Engine(_) => (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": message })),
        };
        (code, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ServiceError>;

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(submit_move))
        .route("/sessions/{id}/events", get(events))
        .route("/games", get(list_games))
        .route("/games/{id}/board", get(board_text))
        .route("/games/{id}/board.json", get(board_json))
        .with_state(store)
}

/// Serves until the listener fails, purging idle sessions every minute.
pub async fn serve(listener: TcpListener, store: Arc<SessionStore>) -> std::io::Result<()> {
    let purger = store.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let n = purger.purge_expired(std::time::Instant::now());
            if n > 0 {
                tracing::info!("expired {n} idle sessions");
            }
        }
    });
    axum::serve(listener, router(store)).await
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    game: String,
    #[serde(default)]
    variant: Option<String>,
    #[serde(default)]
    human: Option<Player>,
    #[serde(default)]
    difficulty: Option<Value>,
    #[serde(default)]
    budget_ms: Option<u64>,
}

fn parse_difficulty(v: Option<&Value>) -> ApiResult<DifficultyParams> {
    match v {
        None | Some(Value::Null) => Ok(DifficultyPreset::Medium.params()),
        Some(Value::String(s)) => Ok(s.parse::<DifficultyPreset>().map_err(|e| ServiceError::Validation(e.to_string()))?.params()),
        Some(Value::Object(o)) => {
            let num = |k: &str| {
                o.get(k)
                    .and_then(Value::as_f64)
                    .ok_or_else(|| ServiceError::Validation(format!("difficulty needs a numeric `{k}`")))
            };
            Ok(DifficultyParams::new(num("mu")?, num("sigma")?)?)
        }
        Some(other) => Err(ServiceError::Validation(format!(
            "difficulty must be Easy, Medium, Hard or {{\"mu\", \"sigma\"}}, got {other}"
        ))),
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload.map(|Json(v)| v).map_err(|e| ServiceError::Validation(e.body_text()))
}

async fn create_session(
    State(store): State<Arc<SessionStore>>,
    payload: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let req = body(payload)?;
    let id: GameId = req.game.parse().map_err(|e: boardmind_core::ParseError| ServiceError::Validation(e.message))?;
    let variant = RuleVariant::named(id, req.variant.as_deref().unwrap_or("default"))?;
    let spec = GameSpec::new(id, variant)?;
    let difficulty = parse_difficulty(req.difficulty.as_ref())?;
    let slot = store.create(spec, req.human.unwrap_or(Player::P1), difficulty, req.budget_ms.map(Duration::from_millis));
    let view = slot.lock().view(store.config().reveal_evaluations);
    spawn_ai_turn(store, slot);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let slot = store.get(&id)?;
    let view = slot.lock().view(store.config().reveal_evaluations);
    Ok(Json(view))
}

#[derive(Debug, Deserialize)]
struct SubmitMove {
    #[serde(rename = "move")]
    mv: String,
}

#[derive(Debug, Default, Deserialize)]
struct WaitQuery {
    #[serde(default)]
    wait: bool,
}

async fn submit_move(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Query(query): Query<WaitQuery>,
    payload: Result<Json<SubmitMove>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let req = body(payload)?;
    let slot = store.get(&id)?;
    let reveal = store.config().reveal_evaluations;
    let (view, mut rx, budget) = {
        let mut s = slot.lock();
        let mv = Move::parse(&req.mv, s.spec().board()).map_err(|e| ServiceError::Validation(e.to_string()))?;
        s.submit_human(&mv)?;
        store.record(&s, "human_move", Some(mv.to_string()));
        store.publish(&slot, &s);
        let budget = s.ai_request().map(|r| r.search.time_budget);
        (s.view(reveal), slot.subscribe(), budget)
    };
    spawn_ai_turn(store.clone(), slot.clone());
    let Some(budget) = budget.filter(|_| query.wait) else {
        return Ok(Json(view));
    };
    let wait = budget * 2 + Duration::from_secs(5);
    let reply = tokio::time::timeout(wait, async {
        loop {
            match rx.recv().await {
                Ok(v) if v.status != SessionStatus::AiThinking => return Some(v),
                Ok(_) | Err(RecvError::Lagged(_)) => continue,
                Err(RecvError::Closed) => return None,
            }
        }
    })
    .await;
    match reply {
        Ok(Some(v)) => Ok(Json(v)),
        _ => Ok(Json(slot.lock().view(reveal))),
    }
}

/// Computes the engine's move off the request path, if it is its turn.
fn spawn_ai_turn(store: Arc<SessionStore>, slot: Arc<SessionSlot>) {
    let Some(req) = slot.lock().ai_request() else { return };
    tokio::task::spawn_blocking(move || {
        let result = req.compute();
        let mut s = slot.lock();
        match result {
            Ok((mv, evaluation)) => {
                let text = mv.to_string();
                match s.apply_ai(req.version, mv, evaluation) {
                    Ok(()) => {
                        store.record(&s, "ai_move", Some(text));
                        store.publish(&slot, &s);
                    }
                    Err(e) => tracing::warn!("session {}: engine reply dropped: {e}", s.id()),
                }
            }
            Err(e) => tracing::error!("session {}: engine failed: {e}", s.id()),
        }
    });
}

async fn events(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<Sse<impl Stream<Item = Result<Event, Infallible>>>> {
    let slot = store.get(&id)?;
    let rx = slot.subscribe();
    let current = slot.lock().view(store.config().reveal_evaluations);
    let to_event = |v: SessionView| Event::default().event("state").json_data(v).expect("views serialize");
    let first = stream::once(async move { Ok(to_event(current)) });
    let updates = stream::unfold(rx, move |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(v) => return Some((Ok(to_event(v)), rx)),
                Err(RecvError::Lagged(_)) => continue,
                Err(RecvError::Closed) => return None,
            }
        }
    });
    Ok(Sse::new(first.chain(updates)).keep_alive(KeepAlive::default()))
}

#[derive(Debug, Serialize)]
struct GameEntry {
    id: &'static str,
    name: String,
    variants: Vec<&'static str>,
    board: String,
}

async fn list_games() -> Json<Vec<GameEntry>> {
    let games = GameId::ALL
        .into_iter()
        .map(|id| {
            let variants = ["default", "lobogames", "ludii"]
                .into_iter()
                .filter(|v| RuleVariant::named(id, v).is_ok())
                .collect();
            GameEntry { id: id.slug(), name: id.title().to_string(), variants, board: format!("/games/{}/board", id.slug()) }
        })
        .collect();
    Json(games)
}

fn game(id: &str) -> ApiResult<GameId> {
    id.parse().map_err(|e: boardmind_core::ParseError| ServiceError::NotFound(e.message))
}

async fn board_text(Path(id): Path<String>) -> ApiResult<Response> {
    let id = game(&id)?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], id.board_text()).into_response())
}

async fn board_json(Path(id): Path<String>) -> ApiResult<Response> {
    let id = game(&id)?;
    Ok(Json(id.board()).into_response())
}
