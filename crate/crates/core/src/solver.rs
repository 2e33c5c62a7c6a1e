//! Exact solving by memoized backward induction.
//!
//! A position is the set of unselected regions plus the current state. The
//! player to move follows from how many regions are selected, so each first
//! mover gets its own memo keyed on `(unselected mask, state mask)`.

use std::hash::BuildHasher;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, Mutex};

use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::Serialize;

use crate::algebra::BitVec;
use crate::board::Board;
use crate::connectivity::Connectivity;
use crate::engine::{GameState, Move, Player};
use crate::error::{Error, Result};
use crate::par::{self, Parallelism};

pub const MAX_SOLVER_REGIONS: usize = 16;
pub const MAX_SOLVER_CROSSINGS: usize = 24;
/// Terminal states are cached in a dense table up to this many crossings.
pub const TERMINAL_TABLE_CROSSINGS: usize = 20;

const SHARDS: usize = 64;
/// Subtrees at fewer selected regions than this are searched in parallel.
const PARALLEL_DEPTH: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub winner: Player,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OutcomeClass {
    pub c_wins_moving_first: bool,
    pub c_wins_moving_second: bool,
}

type Key = (u32, u64);

struct Memo {
    shards: Vec<Mutex<FxHashMap<Key, bool>>>,
}

impl Memo {
    fn new() -> Self {
        Memo {
            shards: (0..SHARDS).map(|_| Mutex::new(FxHashMap::default())).collect(),
        }
    }

    fn shard(&self, key: &Key) -> &Mutex<FxHashMap<Key, bool>> {
        let h = FxBuildHasher.hash_one(key);
        &self.shards[(h >> 58) as usize % SHARDS]
    }

    fn get(&self, key: &Key) -> Option<bool> {
        self.shard(key).lock().expect("memo lock").get(key).copied()
    }

    fn insert(&self, key: Key, value: bool) {
        let mut map = self.shard(&key).lock().expect("memo lock");
        let prev = *map.entry(key).or_insert(value);
        debug_assert_eq!(prev, value);
    }

    fn len(&self) -> usize {
        self.shards.iter().map(|s| s.lock().expect("memo lock").len()).sum()
    }

    fn entries(&self) -> Vec<(Key, bool)> {
        let mut out: Vec<(Key, bool)> = self
            .shards
            .iter()
            .flat_map(|s| {
                s.lock()
                    .expect("memo lock")
                    .iter()
                    .map(|(k, v)| (*k, *v))
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// A solver bound to one board. Memo tables persist across calls, so reuse
/// the same solver for many starts and positions.
pub struct Solver {
    k: usize,
    n: usize,
    rows: Vec<u64>,
    connectivity: Arc<Connectivity>,
    terminal: Option<Vec<AtomicU8>>,
    memos: [Memo; 2],
    mode: Parallelism,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

fn slot(p: Player) -> usize {
    match p {
        Player::C => 0,
        Player::D => 1,
    }
}

impl Solver {
    pub fn new(board: &Board) -> Result<Solver> {
        Solver::with_parallelism(board, Parallelism::default())
    }

    pub fn with_parallelism(board: &Board, mode: Parallelism) -> Result<Solver> {
        let connectivity = Arc::new(Connectivity::for_board(board)?);
        Solver::with_connectivity(board, connectivity, mode)
    }

    pub fn with_connectivity(board: &Board, connectivity: Arc<Connectivity>, mode: Parallelism) -> Result<Solver> {
        board.ensure_valid()?;
        let (k, n) = (board.k(), board.n());
        if k > MAX_SOLVER_REGIONS {
            return Err(Error::Capacity(format!(
                "{k} regions exceeds the solver limit of {MAX_SOLVER_REGIONS}"
            )));
        }
        if n > MAX_SOLVER_CROSSINGS {
            return Err(Error::Capacity(format!(
                "{n} crossings exceeds the solver limit of {MAX_SOLVER_CROSSINGS}"
            )));
        }
        if !connectivity.is_total() {
            return Err(Error::Configuration(
                "solving needs a total connectivity backend; the designated set is partial".into(),
            ));
        }
        let rows = (0..k)
            .map(|r| board.row(r).to_mask().expect("n <= 64"))
            .collect();
        let terminal = (n <= TERMINAL_TABLE_CROSSINGS).then(|| (0..1usize << n).map(|_| AtomicU8::new(0)).collect());
        Ok(Solver {
            k,
            n,
            rows,
            connectivity,
            terminal,
            memos: [Memo::new(), Memo::new()],
            mode,
        })
    }

    pub fn parallelism(&self) -> Parallelism {
        self.mode
    }

    /// Number of memoized positions across both first movers.
    pub fn memo_len(&self) -> usize {
        self.memos.iter().map(Memo::len).sum()
    }

    fn connected(&self, state: u64) -> bool {
        let compute = || self.connectivity.connected_mask(state).unwrap_or(false);
        match &self.terminal {
            Some(table) => match table[state as usize].load(Ordering::Relaxed) {
                1 => true,
                2 => false,
                _ => {
                    let c = compute();
                    table[state as usize].store(if c { 1 } else { 2 }, Ordering::Relaxed);
                    c
                }
            },
            None => compute(),
        }
    }

    fn c_to_move(&self, first: Player, unselected: u32) -> bool {
        let made = self.k as u32 - unselected.count_ones();
        (first == Player::C) == made.is_multiple_of(2)
    }

    fn children(&self, unselected: u32, state: u64) -> Vec<Key> {
        let mut out = Vec::with_capacity(2 * unselected.count_ones() as usize);
        let mut bits = unselected;
        while bits != 0 {
            let r = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = unselected & !(1 << r);
            out.push((rest, state));
            out.push((rest, state ^ self.rows[r]));
        }
        out
    }

    /// Whether C wins from the position under optimal play.
    fn c_wins(&self, first: Player, unselected: u32, state: u64) -> bool {
        if unselected == 0 {
            return self.connected(state);
        }
        let memo = &self.memos[slot(first)];
        let key = (unselected, state);
        if let Some(v) = memo.get(&key) {
            return v;
        }
        let c_moves = self.c_to_move(first, unselected);
        let made = self.k as u32 - unselected.count_ones();
        let children = self.children(unselected, state);
        let value = if self.mode.is_parallel() && made < PARALLEL_DEPTH {
            if c_moves {
                par::any_slice(self.mode, &children, |&(u, s)| self.c_wins(first, u, s))
            } else {
                !par::any_slice(self.mode, &children, |&(u, s)| !self.c_wins(first, u, s))
            }
        } else if c_moves {
            children.iter().any(|&(u, s)| self.c_wins(first, u, s))
        } else {
            children.iter().all(|&(u, s)| self.c_wins(first, u, s))
        };
        memo.insert(key, value);
        value
    }

    fn check_start(&self, start: &BitVec) -> Result<u64> {
        if start.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: start.len(),
            });
        }
        Ok(start.to_mask().expect("n <= 64"))
    }

    fn all_regions(&self) -> u32 {
        ((1u64 << self.k) - 1) as u32
    }

    pub fn solve(&self, start: &BitVec, first: Player) -> Result<Outcome> {
        let s = self.check_start(start)?;
        let c = self.c_wins(first, self.all_regions(), s);
        Ok(Outcome {
            winner: if c { Player::C } else { Player::D },
        })
    }

    pub fn outcome_class(&self, start: &BitVec) -> Result<OutcomeClass> {
        Ok(OutcomeClass {
            c_wins_moving_first: self.solve(start, Player::C)?.winner == Player::C,
            c_wins_moving_second: self.solve(start, Player::D)?.winner == Player::C,
        })
    }

    fn position(&self, g: &GameState) -> Result<(u32, u64)> {
        let s = self.check_start(g.current())?;
        if g.board().k() != self.k {
            return Err(Error::Dimension {
                expected: self.k,
                found: g.board().k(),
            });
        }
        let unselected = (0..self.k)
            .filter(|&r| !g.is_selected(r))
            .fold(0u32, |m, r| m | 1 << r);
        Ok((unselected, s))
    }

    /// Winner from `g` under optimal play by both sides.
    pub fn value(&self, g: &GameState) -> Result<Player> {
        let (u, s) = self.position(g)?;
        Ok(if self.c_wins(g.first(), u, s) {
            Player::C
        } else {
            Player::D
        })
    }

    /// A move that keeps the solved value for the mover, lowest region first
    /// and keeping before swapping. When every move loses, the first legal
    /// move is returned.
    pub fn best_move(&self, g: &GameState) -> Result<Move> {
        let moves = g.legal_moves()?;
        let (u, s) = self.position(g)?;
        let mover_is_c = g.to_move() == Player::C;
        for m in &moves {
            let child_s = if m.swap { s ^ self.rows[m.region] } else { s };
            let c = self.c_wins(g.first(), u & !(1 << m.region), child_s);
            if c == mover_is_c {
                return Ok(*m);
            }
        }
        Ok(moves[0])
    }

    /// Memo entries for `first` as `((unselected, state), c_wins)`, sorted.
    pub fn memo_entries(&self, first: Player) -> Vec<((u32, u64), bool)> {
        self.memos[slot(first)].entries()
    }

    /// Re-expands one memoized position and checks it against its children.
    pub fn is_consistent(&self, first: Player, unselected: u32, state: u64) -> bool {
        let stored = self.c_wins(first, unselected, state);
        if unselected == 0 {
            return stored == self.connected(state);
        }
        let children = self.children(unselected, state);
        let expected = if self.c_to_move(first, unselected) {
            children.iter().any(|&(u, s)| self.c_wins(first, u, s))
        } else {
            children.iter().all(|&(u, s)| self.c_wins(first, u, s))
        };
        stored == expected
    }
}

pub fn solve(board: &Board, start: &BitVec, first: Player) -> Result<Outcome> {
    Solver::new(board)?.solve(start, first)
}

pub fn outcome_class(board: &Board, start: &BitVec) -> Result<OutcomeClass> {
    Solver::new(board)?.outcome_class(start)
}

pub fn best_move(board: &Board, g: &GameState) -> Result<Move> {
    Solver::new(board)?.best_move(g)
}
