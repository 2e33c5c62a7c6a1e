//! Rules of the game: alternating turns, one move per region, and the
//! connectivity test at the end.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::BitVec;
use crate::board::Board;
use crate::connectivity::Connectivity;
use crate::error::{Error, Result};

/// `C` wants a connected final state, `D` a disconnected one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    C,
    D,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::C => Player::D,
            Player::D => Player::C,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::C => "C",
            Player::D => "D",
        })
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(Player::C),
            "D" | "d" => Ok(Player::D),
            _ => Err(Error::Field {
                field: "player".into(),
                message: format!("expected C or D, got {s:?}"),
            }),
        }
    }
}

/// Select `region`, swapping its crossings iff `swap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub region: usize,
    pub swap: bool,
}

impl Move {
    pub fn new(region: usize, swap: bool) -> Self {
        Move { region, swap }
    }

    pub fn describe(&self, board: &Board) -> String {
        format!("{}:{}", board.region_id(self.region), u8::from(self.swap))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    NotOver,
    Winner(Player),
}

/// A position. Cheap to clone; [`GameState::apply`] returns a new state.
#[derive(Clone, Debug)]
pub struct GameState {
    board: Arc<Board>,
    connectivity: Arc<Connectivity>,
    start: BitVec,
    current: BitVec,
    selected: Vec<bool>,
    history: Vec<Move>,
    first: Player,
    start_connected: Option<bool>,
}

impl GameState {
    pub fn new(board: Arc<Board>, start: BitVec, first: Player) -> Result<GameState> {
        let connectivity = Arc::new(Connectivity::for_board(&board)?);
        GameState::with_connectivity(board, connectivity, start, first)
    }

    pub fn with_connectivity(
        board: Arc<Board>,
        connectivity: Arc<Connectivity>,
        start: BitVec,
        first: Player,
    ) -> Result<GameState> {
        board.check_len(&start)?;
        board.ensure_valid()?;
        let start_connected = connectivity.is_connected(&start)?;
        match start_connected {
            Some(false) => {
                return Err(Error::Rule(format!("start state {start} is not connected")));
            }
            None => log::warn!(
                "connectivity of start state {start} on {} is unknown",
                board.name()
            ),
            Some(true) => {}
        }
        let k = board.k();
        Ok(GameState {
            board,
            connectivity,
            current: start.clone(),
            start,
            selected: vec![false; k],
            history: Vec::new(),
            first,
            start_connected,
        })
    }

    pub fn board(&self) -> &Arc<Board> {
        &self.board
    }

    pub fn connectivity(&self) -> &Arc<Connectivity> {
        &self.connectivity
    }

    pub fn start(&self) -> &BitVec {
        &self.start
    }

    pub fn current(&self) -> &BitVec {
        &self.current
    }

    pub fn first(&self) -> Player {
        self.first
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    /// `None` when the start state's connectivity could not be decided.
    pub fn start_connected(&self) -> Option<bool> {
        self.start_connected
    }

    pub fn is_selected(&self, region: usize) -> bool {
        self.selected[region]
    }

    pub fn selected_regions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.selected.len()).filter(move |&i| self.selected[i])
    }

    pub fn moves_made(&self) -> usize {
        self.history.len()
    }

    pub fn is_over(&self) -> bool {
        self.history.len() == self.board.k()
    }

    pub fn to_move(&self) -> Player {
        if self.history.len().is_multiple_of(2) {
            self.first
        } else {
            self.first.other()
        }
    }

    /// Both choices for every unselected region, lowest region first.
    pub fn legal_moves(&self) -> Result<Vec<Move>> {
        if self.is_over() {
            return Err(Error::Terminal);
        }
        Ok((0..self.board.k())
            .filter(|&r| !self.selected[r])
            .flat_map(|r| [Move::new(r, false), Move::new(r, true)])
            .collect())
    }

    pub fn apply(&self, m: Move) -> Result<GameState> {
        if self.is_over() {
            return Err(Error::Terminal);
        }
        if m.region >= self.board.k() {
            return Err(Error::UnknownRegion(format!("#{}", m.region)));
        }
        if self.selected[m.region] {
            return Err(Error::Rule(format!(
                "region {} was already selected",
                self.board.region_id(m.region)
            )));
        }
        let mut next = self.clone();
        next.selected[m.region] = true;
        if m.swap {
            next.current.add_assign(self.board.row(m.region))?;
        }
        next.history.push(m);
        Ok(next)
    }

    /// Start plus the rows of every swapped selection, recomputed from scratch.
    pub fn recompute_current(&self) -> BitVec {
        let mut v = self.start.clone();
        for m in self.history.iter().filter(|m| m.swap) {
            v.add_assign(self.board.row(m.region)).expect("row length matches");
        }
        v
    }

    pub fn connected_now(&self) -> Option<bool> {
        self.connectivity.is_connected(&self.current).ok().flatten()
    }

    pub fn winner(&self) -> Result<Status> {
        if !self.is_over() {
            return Ok(Status::NotOver);
        }
        match self.connectivity.is_connected(&self.current)? {
            Some(true) => Ok(Status::Winner(Player::C)),
            Some(false) => Ok(Status::Winner(Player::D)),
            None => Err(Error::Configuration(format!(
                "cannot adjudicate: connectivity of final state {} is unknown",
                self.current
            ))),
        }
    }
}

pub fn new_game(board: Arc<Board>, start: BitVec, first: Player) -> Result<GameState> {
    GameState::new(board, start, first)
}
