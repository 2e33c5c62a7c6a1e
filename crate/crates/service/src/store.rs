//! Boards hosted by the service.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use indexmap::IndexMap;
use serde::Serialize;
use swapgame_core::catalog;
use swapgame_core::{parse_board, BitVec, Board, Connectivity, Parallelism, Solver};

use crate::error::ApiError;

pub struct BoardEntry {
    pub board: Arc<Board>,
    pub connectivity: Arc<Connectivity>,
    pub starts: Vec<BitVec>,
    solver: OnceLock<Result<Arc<Solver>, String>>,
}

impl BoardEntry {
    pub fn new(board: Board, starts: Vec<BitVec>) -> swapgame_core::Result<BoardEntry> {
        let connectivity = Arc::new(Connectivity::for_board(&board)?);
        Ok(BoardEntry {
            board: Arc::new(board),
            connectivity,
            starts,
            solver: OnceLock::new(),
        })
    }

    /// The shared solver, or the reason there is none.
    pub fn solver(&self) -> Result<Arc<Solver>, ApiError> {
        self.solver
            .get_or_init(|| {
                Solver::with_connectivity(&self.board, self.connectivity.clone(), Parallelism::default())
                    .map(Arc::new)
                    .map_err(|e| e.to_string())
            })
            .clone()
            .map_err(ApiError::Unavailable)
    }

    pub fn summary(&self) -> BoardSummary {
        BoardSummary {
            name: self.board.name().to_string(),
            crossings: self.board.n(),
            regions: self.board.k(),
            has_embedding: self.board.embedding().is_some(),
            euler_characteristic: self.board.euler_characteristic(),
            start_states: self.starts.iter().map(|s| s.to_string()).collect(),
            analysis_available: self.solver().is_ok(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoardSummary {
    pub name: String,
    pub crossings: usize,
    pub regions: usize,
    pub has_embedding: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    pub start_states: Vec<String>,
    pub analysis_available: bool,
}

#[derive(Default)]
pub struct BoardStore {
    entries: IndexMap<String, Arc<BoardEntry>>,
}

impl BoardStore {
    pub fn new() -> Self {
        BoardStore::default()
    }

    /// Every catalog board with its catalog start states.
    pub fn from_catalog() -> swapgame_core::Result<BoardStore> {
        let mut store = BoardStore::new();
        for entry in catalog::all() {
            store.insert(entry.board, entry.starts)?;
        }
        Ok(store)
    }

    /// Every `*.json` board file in `dir`, sorted by file name. Boards that
    /// match a catalog board keep the catalog start states; others offer
    /// their declared start state, if any.
    pub fn from_dir(dir: &Path) -> Result<BoardStore, String> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| format!("{}: {e}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut store = BoardStore::new();
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let board = parse_board(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let starts = match catalog::by_name(board.name()) {
                Ok(entry) if entry.board == board => entry.starts,
                _ => board.start_state().cloned().into_iter().collect(),
            };
            store
                .insert(board, starts)
                .map_err(|e| format!("{}: {e}", path.display()))?;
        }
        Ok(store)
    }

    pub fn insert(&mut self, board: Board, starts: Vec<BitVec>) -> swapgame_core::Result<()> {
        let name = board.name().to_string();
        self.entries.insert(name, Arc::new(BoardEntry::new(board, starts)?));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Arc<BoardEntry>> {
        self.entries.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<BoardEntry>> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
