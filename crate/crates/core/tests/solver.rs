mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::{bv, minimax, planar_connected, single_crossing};
use proptest::prelude::*;
use swapgame_core::catalog::{self, CatalogEntry};
use swapgame_core::engine::{GameState, Player, Status};
use swapgame_core::solver::{self, Solver};
use swapgame_core::{BitVec, Board, Error, Parallelism};

fn rows(board: &Board) -> Vec<BitVec> {
    (0..board.k()).map(|r| board.row(r).clone()).collect()
}

fn oracle(board: &Board, start: &BitVec, first: Player) -> Player {
    let mut unselected = vec![true; board.k()];
    let connected: HashSet<BitVec> = all_states(board.n()).filter(|v| planar_connected(board, v)).collect();
    let conn = |v: &BitVec| connected.contains(v);
    if minimax(&rows(board), &mut unselected, start, first == Player::C, &conn) {
        Player::C
    } else {
        Player::D
    }
}

fn all_states(n: usize) -> impl Iterator<Item = BitVec> {
    (0..1u64 << n).map(move |m| BitVec::from_mask(m, n))
}

fn check_against_oracle(board: &Board, firsts: &[Player]) {
    let solver = Solver::new(board).unwrap();
    for s in all_states(board.n()) {
        for &first in firsts {
            let got = solver.solve(&s, first).unwrap().winner;
            assert_eq!(got, oracle(board, &s, first), "{} from {s}, {first} first", board.name());
        }
    }
}

#[test]
fn matches_plain_minimax_on_small_boards() {
    for board in [single_crossing(), catalog::trefoil().board, catalog::figure8().board] {
        check_against_oracle(&board, &[Player::C, Player::D]);
    }
}

#[test]
fn matches_plain_minimax_on_twist5() {
    check_against_oracle(&catalog::twist5().board, &[Player::C, Player::D]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]
    #[test]
    fn matches_plain_minimax_on_borromean(mask in 0u64..64, c_first in any::<bool>()) {
        let board = catalog::borromean().board;
        let s = BitVec::from_mask(mask, 6);
        let first = if c_first { Player::C } else { Player::D };
        prop_assert_eq!(solver::solve(&board, &s, first).unwrap().winner, oracle(&board, &s, first));
    }
}

fn relabel(board: &Board, cperm: &[usize], rperm: &[usize]) -> Board {
    let cn: Vec<String> = cperm.iter().map(|i| format!("x{i}")).collect();
    let rn: Vec<String> = rperm.iter().map(|i| format!("y{i}")).collect();
    board.relabeled(&cn, &rn)
}

fn move_state(new: &Board, cperm: &[usize], s: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(s.len());
    for j in s.ones_indices() {
        out.set(new.crossing_index(&format!("x{}", cperm[j])).unwrap(), true);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn relabeling_preserves_outcomes(
        cperm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        rperm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
        mask in 0u64..64,
    ) {
        let board = catalog::borromean().board;
        let other = relabel(&board, &cperm, &rperm);
        prop_assert!(other.is_valid());
        let s = BitVec::from_mask(mask, 6);
        let t = move_state(&other, &cperm, &s);
        let a = solver::outcome_class(&board, &s).unwrap();
        let b = solver::outcome_class(&other, &t).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn memo_is_consistent_with_children() {
    for e in [catalog::twist5(), catalog::borromean(), catalog::ladder(2).unwrap()] {
        let solver = Solver::new(&e.board).unwrap();
        for s in &e.starts {
            solver.outcome_class(s).unwrap();
        }
        for first in [Player::C, Player::D] {
            let entries = solver.memo_entries(first);
            assert!(!entries.is_empty());
            for ((u, s), v) in entries.iter().step_by(7) {
                assert!(solver.is_consistent(first, *u, *s), "{} {u:b} {s:b} {v}", e.name);
            }
        }
    }
}

/// Following best moves for both sides reaches the solved winner.
fn self_play(e: &CatalogEntry, start: &BitVec, first: Player) {
    let solver = Solver::new(&e.board).unwrap();
    let expected = solver.solve(start, first).unwrap().winner;
    let mut g = GameState::new(Arc::new(e.board.clone()), start.clone(), first).unwrap();
    while !g.is_over() {
        assert_eq!(solver.value(&g).unwrap(), expected);
        let m = solver.best_move(&g).unwrap();
        g = g.apply(m).unwrap();
    }
    assert_eq!(g.winner().unwrap(), Status::Winner(expected));
}

#[test]
fn best_moves_keep_the_value() {
    for e in [catalog::twist5(), catalog::figure8(), catalog::trefoil(), catalog::borromean()] {
        for s in &e.starts {
            self_play(&e, s, Player::C);
            self_play(&e, s, Player::D);
        }
    }
}

#[test]
fn winner_punishes_a_bad_move() {
    let e = catalog::twist5();
    let solver = Solver::new(&e.board).unwrap();
    let g = GameState::new(Arc::new(e.board.clone()), bv("11001"), Player::C).unwrap();
    let losing = g
        .legal_moves()
        .unwrap()
        .into_iter()
        .find(|&m| solver.value(&g.apply(m).unwrap()).unwrap() == Player::D);
    if let Some(m) = losing {
        let mut g = g.apply(m).unwrap();
        while !g.is_over() {
            g = g.apply(solver.best_move(&g).unwrap()).unwrap();
        }
        assert_eq!(g.winner().unwrap(), Status::Winner(Player::D));
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let e = catalog::ladder(2).unwrap();
    let seq = Solver::with_parallelism(&e.board, Parallelism::Sequential).unwrap();
    let par = Solver::with_parallelism(&e.board, Parallelism::Parallel).unwrap();
    for s in all_states(8).step_by(5) {
        assert_eq!(seq.outcome_class(&s).unwrap(), par.outcome_class(&s).unwrap());
    }
    assert_eq!(seq.memo_entries(Player::D), par.memo_entries(Player::D));
}

#[test]
fn twist5_second_mover_regression() {
    let e = catalog::twist5();
    let solver = Solver::new(&e.board).unwrap();
    let c_second: Vec<bool> = e
        .starts
        .iter()
        .map(|s| solver.solve(s, Player::D).unwrap().winner == Player::C)
        .collect();
    assert!(c_second.iter().all(|&w| !w), "{c_second:?}");
    for s in &e.starts {
        assert_eq!(solver.solve(s, Player::C).unwrap().winner, Player::C);
    }
}

#[test]
fn guards() {
    let big = catalog::ladder(5).unwrap().board;
    assert!(matches!(Solver::new(&big), Err(Error::Capacity(_))));
    let klein = catalog::two_klein().board;
    assert!(matches!(Solver::new(&klein), Err(Error::Configuration(_))));
    let solver = Solver::new(&catalog::twist5().board).unwrap();
    assert!(matches!(solver.solve(&bv("101"), Player::C), Err(Error::Dimension { .. })));
}

#[test]
fn solve_does_not_require_connected_start() {
    let board = catalog::twist5().board;
    let w = solver::solve(&board, &bv("00000"), Player::C).unwrap().winner;
    assert_eq!(w, oracle(&board, &bv("00000"), Player::C));
}
