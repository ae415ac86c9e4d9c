use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use boardmind_core::games::GameId;
use boardmind_service::{router, ServiceConfig, SessionStatus, SessionStore, SessionView};
use futures::StreamExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app_with(config: ServiceConfig) -> (Router, Arc<SessionStore>) {
    let store = Arc::new(SessionStore::new(config).unwrap());
    (router(store.clone()), store)
}

fn app() -> Router {
    app_with(ServiceConfig { budget: Duration::from_millis(50), ..ServiceConfig::default() }).0
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or_else(Body::empty, |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    let value = serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()));
    (status, value)
}

async fn create(app: &Router, body: Value) -> SessionView {
    let (status, v) = send(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    serde_json::from_value(v).unwrap()
}

async fn get(app: &Router, id: &str) -> SessionView {
    let (status, v) = send(app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    serde_json::from_value(v).unwrap()
}

async fn wait_for_human(app: &Router, id: &str) -> SessionView {
    let deadline = Instant::now() + Duration::from_secs(20);
    loop {
        let v = get(app, id).await;
        if v.status != SessionStatus::AiThinking {
            return v;
        }
        assert!(Instant::now() < deadline, "engine never replied");
        tokio::time::sleep(Duration::from_millis(10)).await;
    }
}

#[tokio::test]
async fn human_first_session_starts_empty() {
    let app = app();
    let v = create(&app, json!({ "game": "tictactoe", "human": "P1", "difficulty": "Hard" })).await;
    assert_eq!(v.status, SessionStatus::AwaitingHuman);
    assert_eq!(v.occupancy, ".........");
    assert_eq!(v.legal_moves.len(), 9);
    assert!(v.state.contains("game=tictactoe"));
    assert_eq!(get(&app, &v.id).await, v);
}

#[tokio::test]
async fn engine_moves_first_when_the_human_is_second() {
    let app = app();
    let v = create(&app, json!({ "game": "tapatan", "variant": "ludii", "human": "P2", "difficulty": "Easy" })).await;
    assert_eq!(v.status, SessionStatus::AiThinking);
    let v = wait_for_human(&app, &v.id).await;
    assert_eq!(v.status, SessionStatus::AwaitingHuman);
    assert_eq!(v.history.len(), 1);
    assert_eq!(v.occupancy.matches('1').count(), 1);
}

#[tokio::test]
async fn unknown_difficulty_is_rejected() {
    let app = app();
    let (status, v) = send(&app, "POST", "/sessions", Some(json!({ "game": "tictactoe", "difficulty": "extreme" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let msg = v["error"].as_str().unwrap();
    assert!(msg.contains("Easy") && msg.contains("Medium") && msg.contains("Hard"), "{msg}");

    let (status, v) = send(&app, "POST", "/sessions", Some(json!({ "game": "chess" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("reversi"));

    let (status, _) = send(&app, "POST", "/sessions", Some(json!({ "game": "tictactoe", "difficulty": { "mu": 0.5, "sigma": 0 } }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "POST", "/sessions", Some(json!({ "nope": 1 }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn custom_difficulty_is_accepted() {
    let app = app();
    let v = create(&app, json!({ "game": "reversi", "difficulty": { "mu": 0.8, "sigma": 0.1 } })).await;
    assert_eq!(v.legal_moves.len(), 4);
}

#[tokio::test]
async fn move_round_trip_with_wait() {
    let app = app();
    let v = create(&app, json!({ "game": "tictactoe", "human": "P1" })).await;
    let uri = format!("/sessions/{}/moves?wait=true", v.id);
    let (status, body) = send(&app, "POST", &uri, Some(json!({ "move": "4" }))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let after: SessionView = serde_json::from_value(body).unwrap();
    assert_eq!(after.status, SessionStatus::AwaitingHuman);
    assert_eq!(after.history.len(), 2);
    assert_eq!(after.history[0], "4");
    assert!(after.evaluation.is_none(), "evaluations are hidden by default");
}

#[tokio::test]
async fn move_without_wait_returns_while_thinking() {
    let app = app();
    let v = create(&app, json!({ "game": "alquerque" })).await;
    let mv = v.legal_moves[0].clone();
    let (status, body) = send(&app, "POST", &format!("/sessions/{}/moves", v.id), Some(json!({ "move": mv }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ai-thinking");
    // a second move while the engine thinks is a conflict
    let (status, body) = send(&app, "POST", &format!("/sessions/{}/moves", v.id), Some(json!({ "move": mv }))).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");
    assert_eq!(body["status"], "ai-thinking");
    wait_for_human(&app, &v.id).await;
}

#[tokio::test]
async fn illegal_moves_name_the_rule() {
    let app = app();
    let v = create(&app, json!({ "game": "tictactoe" })).await;
    let uri = format!("/sessions/{}/moves?wait=true", v.id);
    send(&app, "POST", &uri, Some(json!({ "move": "0" }))).await;
    let (status, body) = send(&app, "POST", &uri, Some(json!({ "move": "0" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["rule"], "occupied");
    let (status, _) = send(&app, "POST", &uri, Some(json!({ "move": "x-y" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "POST", "/sessions/missing/moves", Some(json!({ "move": "0" }))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn alquerque_capture_must_be_taken() {
    let app = app();
    let v = create(&app, json!({ "game": "alquerque", "human": "P1" })).await;
    let mut v = v;
    // play until the human has a capture available, then try a step
    for _ in 0..40 {
        if v.status != SessionStatus::AwaitingHuman {
            break;
        }
        let captures = v.legal_moves.iter().any(|m| m.contains('x'));
        if captures {
            let board = GameId::Alquerque.board();
            let occupancy: Vec<char> = v.occupancy.chars().collect();
            let step = board
                .positions()
                .filter(|&f| occupancy[f as usize] == '1')
                .flat_map(|f| board.neighbors(f).iter().map(move |&t| (f, t)))
                .find(|&(_, t)| occupancy[t as usize] == '.');
            let (from, to) = step.expect("a piece with an empty neighbour");
            let step = format!("{from}-{to}");
            let uri = format!("/sessions/{}/moves", v.id);
            let before = get(&app, &v.id).await;
            let (status, body) = send(&app, "POST", &uri, Some(json!({ "move": step }))).await;
            assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
            let msg = body["error"].as_str().unwrap();
            assert_eq!(body["rule"], "capture-required");
            assert!(msg.contains("it is required to do a capture when possible"), "{msg}");
            assert_eq!(get(&app, &v.id).await, before, "rejected moves leave the session unchanged");
            return;
        }
        let uri = format!("/sessions/{}/moves?wait=true", v.id);
        let (_, body) = send(&app, "POST", &uri, Some(json!({ "move": v.legal_moves[0] }))).await;
        v = serde_json::from_value(body).unwrap();
    }
    panic!("no capture position reached");
}

#[tokio::test]
async fn evaluations_can_be_revealed() {
    let (app, _) = app_with(ServiceConfig {
        budget: Duration::from_millis(30),
        reveal_evaluations: true,
        ..ServiceConfig::default()
    });
    let v = create(&app, json!({ "game": "tictactoe", "human": "P2" })).await;
    let v = wait_for_human(&app, &v.id).await;
    let values = v.evaluation.expect("revealed");
    assert_eq!(values.len(), 9);
    assert!(values.iter().all(|m| (0.0..=1.0).contains(&m.value)));
}

#[tokio::test]
async fn events_stream_state_changes() {
    let app = app();
    let v = create(&app, json!({ "game": "tictactoe" })).await;
    let req = Request::builder().uri(format!("/sessions/{}/events", v.id)).body(Body::empty()).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert!(resp.headers()["content-type"].to_str().unwrap().starts_with("text/event-stream"));
    let mut stream = resp.into_body().into_data_stream();
    let first = String::from_utf8(stream.next().await.unwrap().unwrap().to_vec()).unwrap();
    assert!(first.starts_with("event: state"), "{first}");
    assert!(first.contains("awaiting-human"));

    send(&app, "POST", &format!("/sessions/{}/moves", v.id), Some(json!({ "move": "4" }))).await;
    let mut seen = String::new();
    let deadline = tokio::time::Instant::now() + Duration::from_secs(20);
    while !seen.contains("\"history\":[\"4\",") {
        let chunk = tokio::time::timeout_at(deadline, stream.next()).await.expect("engine reply event").unwrap().unwrap();
        seen.push_str(&String::from_utf8_lossy(&chunk));
    }
    assert!(seen.contains("ai-thinking"));
}

#[tokio::test]
async fn game_catalogue_and_boards() {
    let app = app();
    let (status, games) = send(&app, "GET", "/games", None).await;
    assert_eq!(status, StatusCode::OK);
    let games = games.as_array().unwrap();
    assert_eq!(games.len(), 6);
    let tapatan = games.iter().find(|g| g["id"] == "tapatan").unwrap();
    assert_eq!(tapatan["variants"], json!(["default", "lobogames", "ludii"]));

    let (status, text) = send(&app, "GET", "/games/reversi/board", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(text.as_str().unwrap().starts_with("boardgraph 1"));
    let (status, graph) = send(&app, "GET", "/games/five-field-kono/board.json", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(graph["name"], "kono");
    let (status, _) = send(&app, "GET", "/games/chess/board", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn sessions_log_to_disk() {
    let path = std::env::temp_dir().join(format!("boardmind-log-{}.jsonl", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let (app, _) = app_with(ServiceConfig {
        budget: Duration::from_millis(20),
        log_path: Some(path.clone()),
        ..ServiceConfig::default()
    });
    let v = create(&app, json!({ "game": "tictactoe" })).await;
    send(&app, "POST", &format!("/sessions/{}/moves?wait=true", v.id), Some(json!({ "move": "0" }))).await;
    let log = std::fs::read_to_string(&path).unwrap();
    let events: Vec<Value> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let kinds: Vec<&str> = events.iter().map(|e| e["event"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["created", "human_move", "ai_move"]);
    assert!(events.iter().all(|e| e["session"] == v.id.as_str()));
    let _ = std::fs::remove_file(&path);
}
