//! HTTP JSON API over the swap game core: board listing, live games against
//! the solver, and position analysis.
//!
//! | route | |
//! |---|---|
//! | `GET /boards` | board summaries |
//! | `GET /boards/{name}` | board document |
//! | `POST /games` | new session |
//! | `GET /games/{id}` | session state |
//! | `POST /games/{id}/move` | play a move; the engine replies in the same response |
//! | `GET /games/{id}/analysis` | solved value and best move for the player to move |

mod error;
mod session;
mod store;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use swapgame_core::{BitVec, Move, Player};
use tokio::sync::{Mutex, RwLock};
use tower_http::cors::{Any, CorsLayer};

pub use error::ApiError;
pub use session::{load_sessions, GameView, LoggedMove, Record, Session};
pub use store::{BoardEntry, BoardStore, BoardSummary};

#[derive(Default)]
pub struct Config {
    /// Directory for per-session move logs. Sessions stay in memory only
    /// when unset.
    pub sessions_dir: Option<PathBuf>,
    /// Allowed CORS origin; any origin when unset.
    pub cors_origin: Option<String>,
}

pub struct AppState {
    boards: BoardStore,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    config: Config,
}

impl AppState {
    /// Builds the state, replaying any session logs found in the sessions
    /// directory.
    pub fn new(boards: BoardStore, config: Config) -> std::io::Result<Arc<AppState>> {
        let mut sessions = HashMap::new();
        if let Some(dir) = &config.sessions_dir {
            std::fs::create_dir_all(dir)?;
            for s in load_sessions(dir, &boards)? {
                sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
            }
        }
        Ok(Arc::new(AppState {
            boards,
            sessions: RwLock::new(sessions),
            config,
        }))
    }

    pub fn boards(&self) -> &BoardStore {
        &self.boards
    }

    pub async fn session(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions.read().await.get(id).cloned()
    }

    pub async fn session_count(&self) -> usize {
        self.sessions.read().await.len()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let cors = match &state.config.cors_origin {
        Some(origin) => match origin.parse::<HeaderValue>() {
            Ok(v) => CorsLayer::new().allow_origin(v),
            Err(_) => CorsLayer::new().allow_origin(Any),
        },
        None => CorsLayer::new().allow_origin(Any),
    }
    .allow_methods(Any)
    .allow_headers(Any);
    Router::new()
        .route("/boards", get(list_boards))
        .route("/boards/{name}", get(get_board))
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/move", post(play_move))
        .route("/games/{id}/analysis", get(analysis))
        .layer(cors)
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

type ApiResult<T> = Result<T, ApiError>;

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload.map(|Json(v)| v).map_err(|e| ApiError::Unprocessable(e.body_text()))
}

async fn list_boards(State(st): State<Arc<AppState>>) -> Json<Vec<BoardSummary>> {
    Json(st.boards.iter().map(|e| e.summary()).collect())
}

async fn get_board(State(st): State<Arc<AppState>>, Path(name): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let entry = st
        .boards
        .get(&name)
        .ok_or_else(|| ApiError::NotFound(format!("unknown board {name:?}")))?;
    Ok(Json(serde_json::to_value(entry.board.to_document()).expect("document serializes")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NewGame {
    board: String,
    start: Option<String>,
    human: Player,
    first: Player,
    #[serde(default = "yes")]
    engine: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Serialize)]
struct Created {
    game_id: String,
    state: GameView,
}

async fn create_game(
    State(st): State<Arc<AppState>>,
    payload: Result<Json<NewGame>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let req = body(payload)?;
    let entry = st
        .boards
        .get(&req.board)
        .ok_or_else(|| ApiError::NotFound(format!("unknown board {:?}", req.board)))?
        .clone();
    let start = match &req.start {
        Some(s) => s.parse::<BitVec>().map_err(session::core_error)?,
        None => entry
            .board
            .start_state()
            .or(entry.starts.first())
            .cloned()
            .ok_or_else(|| ApiError::Unprocessable("board has no default start; give \"start\"".into()))?,
    };
    if req.engine {
        entry.solver()?;
    }
    let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let id = uuid::Uuid::new_v4().simple().to_string();
    let mut s = Session::create(id.clone(), entry, start, req.human, req.first, req.engine, created_at)?;
    if let Some(dir) = &st.config.sessions_dir {
        s.persist_to(dir)?;
    }
    let reply = engine_reply(&mut s).await?;
    let view = s.view(reply);
    st.sessions.write().await.insert(id.clone(), Arc::new(Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(Created { game_id: id, state: view })))
}

/// Plays the engine's move when it is the engine's turn.
async fn engine_reply(s: &mut Session) -> ApiResult<Option<LoggedMove>> {
    if !s.engine_to_move() {
        return Ok(None);
    }
    let solver = s.entry.solver()?;
    let g = s.state.clone();
    let m = tokio::task::spawn_blocking(move || solver.best_move(&g))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map_err(session::core_error)?;
    s.play(m).map(Some)
}

async fn lookup(st: &AppState, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
    st.session(id)
        .await
        .ok_or_else(|| ApiError::NotFound(format!("unknown game {id:?}")))
}

async fn get_game(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<GameView>> {
    let s = lookup(&st, &id).await?;
    let s = s.lock().await;
    Ok(Json(s.view(None)))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SwapFlag {
    Bool(bool),
    Int(u8),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    region: String,
    swap: SwapFlag,
    /// When given, the move is rejected unless this player is to move.
    player: Option<Player>,
}

async fn play_move(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    payload: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<Json<GameView>> {
    let s = lookup(&st, &id).await?;
    let req = body(payload)?;
    let swap = match req.swap {
        SwapFlag::Bool(b) => b,
        SwapFlag::Int(0) => false,
        SwapFlag::Int(1) => true,
        SwapFlag::Int(n) => return Err(ApiError::Unprocessable(format!("swap must be 0 or 1, got {n}"))),
    };
    let mut s = s.lock().await;
    if s.state.is_over() {
        return Err(ApiError::Conflict("the game is over".into()));
    }
    let to_move = s.state.to_move();
    if req.player.is_some_and(|p| p != to_move) || s.engine_side() == Some(to_move) {
        return Err(ApiError::Conflict(format!("not your turn: {to_move} is to move")));
    }
    let region = s.entry.board.region_index(&req.region).map_err(session::core_error)?;
    if s.state.is_selected(region) {
        return Err(ApiError::Conflict(format!("region {} is already selected", req.region)));
    }
    s.play(Move::new(region, swap))?;
    let reply = engine_reply(&mut s).await?;
    Ok(Json(s.view(reply)))
}

#[derive(Debug, Serialize)]
struct Analysis {
    to_move: Player,
    /// `win` when the player to move wins under optimal play.
    value_for_mover: &'static str,
    winner: Player,
    best_move: LoggedMove,
}

async fn analysis(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Analysis>> {
    let s = lookup(&st, &id).await?;
    let s = s.lock().await;
    let solver = s.entry.solver()?;
    if s.state.is_over() {
        return Err(ApiError::Conflict("the game is over".into()));
    }
    let g = s.state.clone();
    let (winner, m) = tokio::task::spawn_blocking(move || Ok::<_, swapgame_core::Error>((solver.value(&g)?, solver.best_move(&g)?)))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map_err(session::core_error)?;
    let to_move = s.state.to_move();
    Ok(Json(Analysis {
        to_move,
        value_for_mover: if winner == to_move { "win" } else { "loss" },
        winner,
        best_move: LoggedMove {
            player: to_move,
            region: s.entry.board.region_id(m.region).to_string(),
            swap: m.swap,
        },
    }))
}
