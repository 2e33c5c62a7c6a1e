//! Core library for the crossing-swap connectivity game.

pub mod algebra;
pub mod board;
pub mod catalog;
pub mod connectivity;
pub mod disjointtrees;
pub mod engine;
pub mod error;
pub mod par;
pub mod ribbon;
pub mod solver;
pub mod strategy;
pub mod unionfind;

pub use algebra::{BitMatrix, BitVec};
pub use board::{parse_board, write_board, Board, Region, RegionKind, Violation, ViolationKind};
pub use connectivity::{
    class_has_connected_state, class_size, component_count, enumerate_connected_states, is_connected_state,
    BackendKind, ComponentCount, Connectivity,
};
pub use engine::{new_game, GameState, Move, Player, Status};
pub use error::{Error, Result};
pub use par::Parallelism;
pub use ribbon::{HalfEdge, RibbonEmbedding, RibbonGraph};
pub use solver::{Outcome, OutcomeClass, Solver};
pub use strategy::{CMoves, PairingStrategy, Relation, Verdict};
