//! Game sessions and their append-only move logs.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use swapgame_core::{BitVec, GameState, Move, Player, Status};

use crate::error::ApiError;
use crate::store::{BoardEntry, BoardStore};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedMove {
    pub player: Player,
    pub region: String,
    pub swap: bool,
}

/// One line of a session log file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Record {
    Create {
        id: String,
        board: String,
        start: BitVec,
        human: Player,
        first: Player,
        engine: bool,
        created_at: u64,
    },
    Move(LoggedMove),
}

pub struct Session {
    pub id: String,
    pub entry: Arc<BoardEntry>,
    pub state: GameState,
    pub human: Player,
    pub engine: bool,
    pub created_at: u64,
    pub log: Vec<LoggedMove>,
    file: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct GameView {
    pub game_id: String,
    pub board: String,
    pub start: String,
    pub state_vector: String,
    pub selected: Vec<String>,
    pub to_move: Option<Player>,
    pub over: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<Player>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connected_now: Option<bool>,
    pub first: Player,
    pub human: Player,
    pub engine: bool,
    pub moves: Vec<LoggedMove>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine_move: Option<LoggedMove>,
}

pub fn core_error(e: swapgame_core::Error) -> ApiError {
    use swapgame_core::Error as E;
    match e {
        E::Rule(_) | E::Terminal => ApiError::Conflict(e.to_string()),
        E::Configuration(_) | E::Capacity(_) => ApiError::Unavailable(e.to_string()),
        E::Dimension { .. }
        | E::Parse { .. }
        | E::Field { .. }
        | E::BitString(_)
        | E::UnknownRegion(_)
        | E::UnknownCrossing(_)
        | E::Strategy(_)
        | E::Domain(_) => ApiError::Unprocessable(e.to_string()),
        E::Validation(_) | E::Structural(_) => ApiError::Internal(e.to_string()),
    }
}

impl Session {
    pub fn create(
        id: String,
        entry: Arc<BoardEntry>,
        start: BitVec,
        human: Player,
        first: Player,
        engine: bool,
        created_at: u64,
    ) -> Result<Session, ApiError> {
        let state = GameState::with_connectivity(entry.board.clone(), entry.connectivity.clone(), start, first)
            .map_err(|e| match e {
                swapgame_core::Error::Rule(m) => ApiError::Unprocessable(m),
                e => core_error(e),
            })?;
        Ok(Session {
            id,
            entry,
            state,
            human,
            engine,
            created_at,
            log: Vec::new(),
            file: None,
        })
    }

    /// Starts writing this session's log under `dir`.
    pub fn persist_to(&mut self, dir: &Path) -> Result<(), ApiError> {
        let path = dir.join(format!("{}.jsonl", self.id));
        let header = Record::Create {
            id: self.id.clone(),
            board: self.entry.board.name().to_string(),
            start: self.state.start().clone(),
            human: self.human,
            first: self.state.first(),
            engine: self.engine,
            created_at: self.created_at,
        };
        let mut text = serde_json::to_string(&header).expect("record serializes") + "\n";
        for m in &self.log {
            text += &(serde_json::to_string(&Record::Move(m.clone())).expect("record serializes") + "\n");
        }
        fs::write(&path, text).map_err(|e| ApiError::Internal(format!("{}: {e}", path.display())))?;
        self.file = Some(path);
        Ok(())
    }

    pub fn engine_side(&self) -> Option<Player> {
        self.engine.then(|| self.human.other())
    }

    pub fn engine_to_move(&self) -> bool {
        !self.state.is_over() && self.engine_side() == Some(self.state.to_move())
    }

    /// Applies `m` for the player to move and logs it.
    pub fn play(&mut self, m: Move) -> Result<LoggedMove, ApiError> {
        let player = self.state.to_move();
        let next = self.state.apply(m).map_err(core_error)?;
        let logged = LoggedMove {
            player,
            region: self.entry.board.region_id(m.region).to_string(),
            swap: m.swap,
        };
        if let Some(path) = &self.file {
            let line = serde_json::to_string(&Record::Move(logged.clone())).expect("record serializes") + "\n";
            OpenOptions::new()
                .append(true)
                .open(path)
                .and_then(|mut f| f.write_all(line.as_bytes()))
                .map_err(|e| ApiError::Internal(format!("{}: {e}", path.display())))?;
        }
        self.state = next;
        self.log.push(logged.clone());
        Ok(logged)
    }

    /// Replays the move log from the start state.
    pub fn replay(&self) -> swapgame_core::Result<GameState> {
        let mut g = GameState::with_connectivity(
            self.entry.board.clone(),
            self.entry.connectivity.clone(),
            self.state.start().clone(),
            self.state.first(),
        )?;
        for m in &self.log {
            if g.to_move() != m.player {
                return Err(swapgame_core::Error::Rule(format!("log has {} moving out of turn", m.player)));
            }
            let r = self.entry.board.region_index(&m.region)?;
            g = g.apply(Move::new(r, m.swap))?;
        }
        Ok(g)
    }

    pub fn view(&self, engine_move: Option<LoggedMove>) -> GameView {
        let g = &self.state;
        let board = &self.entry.board;
        let winner = match g.winner() {
            Ok(Status::Winner(p)) => Some(p),
            _ => None,
        };
        GameView {
            game_id: self.id.clone(),
            board: board.name().to_string(),
            start: g.start().to_string(),
            state_vector: g.current().to_string(),
            selected: g.selected_regions().map(|r| board.region_id(r).to_string()).collect(),
            to_move: (!g.is_over()).then(|| g.to_move()),
            over: g.is_over(),
            winner,
            connected_now: g.connected_now(),
            first: g.first(),
            human: self.human,
            engine: self.engine,
            moves: self.log.clone(),
            engine_move,
        }
    }
}

/// Rebuilds every session logged under `dir`. Logs naming unknown boards or
/// holding illegal moves are skipped with a warning.
pub fn load_sessions(dir: &Path, store: &BoardStore) -> std::io::Result<Vec<Session>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        match load_one(&path, store) {
            Ok(s) => out.push(s),
            Err(e) => log::warn!("skipping session log {}: {e}", path.display()),
        }
    }
    Ok(out)
}

fn load_one(path: &Path, store: &BoardStore) -> Result<Session, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Record = serde_json::from_str(lines.next().ok_or("empty log")?).map_err(|e| e.to_string())?;
    let Record::Create {
        id,
        board,
        start,
        human,
        first,
        engine,
        created_at,
    } = header
    else {
        return Err("log does not start with a create record".into());
    };
    let entry = store.get(&board).ok_or_else(|| format!("unknown board {board:?}"))?.clone();
    let mut session = Session::create(id, entry, start, human, first, engine, created_at).map_err(|e| e.to_string())?;
    for line in lines {
        let Record::Move(m) = serde_json::from_str(line).map_err(|e| e.to_string())? else {
            return Err("unexpected create record".into());
        };
        if session.state.is_over() || session.state.to_move() != m.player {
            return Err(format!("{} moved out of turn", m.player));
        }
        let r = session.entry.board.region_index(&m.region).map_err(|e| e.to_string())?;
        session.play(Move::new(r, m.swap)).map_err(|e| e.to_string())?;
    }
    session.file = Some(path.to_path_buf());
    Ok(session)
}
