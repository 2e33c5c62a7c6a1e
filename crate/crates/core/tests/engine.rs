mod common;

use std::sync::Arc;

use common::{bv, planar_connected, single_crossing};
use proptest::prelude::*;
use swapgame_core::catalog;
use swapgame_core::engine::{GameState, Move, Player, Status};
use swapgame_core::{BitVec, Error};

fn twist5_game(start: &str, first: Player) -> GameState {
    GameState::new(Arc::new(catalog::twist5().board), bv(start), first).unwrap()
}

fn play(g: &GameState, order: &[usize], swaps: &[bool]) -> GameState {
    let mut g = g.clone();
    for (&r, &s) in order.iter().zip(swaps) {
        g = g.apply(Move::new(r, s)).unwrap();
    }
    g
}

fn expected_final(g: &GameState, swaps_by_region: &[bool]) -> BitVec {
    let mut v = g.start().clone();
    for (r, &s) in swaps_by_region.iter().enumerate() {
        if s {
            v = v.add(g.board().row(r)).unwrap();
        }
    }
    v
}

fn permutation(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn final_state_ignores_order(order in permutation(8), swaps in prop::collection::vec(any::<bool>(), 8)) {
        let e = catalog::borromean();
        let g = GameState::new(Arc::new(e.board.clone()), e.starts[0].clone(), Player::D).unwrap();
        let by_region: Vec<bool> = (0..8).map(|r| swaps[order.iter().position(|&x| x == r).unwrap()]).collect();
        let a = play(&g, &order, &swaps);
        let sorted: Vec<usize> = (0..8).collect();
        let b = play(&g, &sorted, &by_region);
        prop_assert_eq!(a.current(), b.current());
        prop_assert_eq!(a.current(), &expected_final(&g, &by_region));
    }

    #[test]
    fn incremental_state_matches_recomputed(order in permutation(7), swaps in prop::collection::vec(any::<bool>(), 7)) {
        let mut g = twist5_game("11001", Player::C);
        for (&r, &s) in order.iter().zip(&swaps) {
            g = g.apply(Move::new(r, s)).unwrap();
            prop_assert_eq!(g.current(), &g.recompute_current());
        }
        prop_assert!(g.is_over());
    }

    #[test]
    fn winner_matches_spanning_tree_oracle(order in permutation(7), swaps in prop::collection::vec(any::<bool>(), 7)) {
        let g = play(&twist5_game("11010", Player::C), &order, &swaps);
        let expected = if planar_connected(g.board(), g.current()) { Player::C } else { Player::D };
        prop_assert_eq!(g.winner().unwrap(), Status::Winner(expected));
    }
}

#[test]
fn turns_alternate_from_first_mover() {
    for first in [Player::C, Player::D] {
        let mut g = twist5_game("11001", first);
        let mut expected = first;
        while !g.is_over() {
            assert_eq!(g.to_move(), expected);
            assert_eq!(g.winner().unwrap(), Status::NotOver);
            let m = g.legal_moves().unwrap()[1];
            g = g.apply(m).unwrap();
            expected = expected.other();
        }
        assert_eq!(g.moves_made(), 7);
        assert_eq!(g.history().len(), 7);
    }
}

#[test]
fn legal_moves_cover_unselected_regions() {
    let g = twist5_game("11001", Player::C);
    let moves = g.legal_moves().unwrap();
    assert_eq!(moves.len(), 14);
    assert_eq!(moves[0], Move::new(0, false));
    assert_eq!(moves[1], Move::new(0, true));
    let g = g.apply(Move::new(3, true)).unwrap();
    let moves = g.legal_moves().unwrap();
    assert_eq!(moves.len(), 12);
    assert!(moves.iter().all(|m| m.region != 3));
    assert_eq!(g.selected_regions().collect::<Vec<_>>(), [3]);
}

#[test]
fn rule_errors() {
    let g = twist5_game("11001", Player::C);
    let g1 = g.apply(Move::new(2, false)).unwrap();
    assert!(matches!(g1.apply(Move::new(2, true)), Err(Error::Rule(_))));
    assert!(matches!(g.apply(Move::new(7, false)), Err(Error::UnknownRegion(_))));
    let done = play(&g, &[0, 1, 2, 3, 4, 5, 6], &[false; 7]);
    assert!(matches!(done.legal_moves(), Err(Error::Terminal)));
    assert!(matches!(done.apply(Move::new(0, false)), Err(Error::Terminal)));
    assert_eq!(done.current(), g.start());
    assert_eq!(done.winner().unwrap(), Status::Winner(Player::C));
}

#[test]
fn start_must_be_connected_and_sized() {
    let board = Arc::new(catalog::twist5().board);
    assert!(matches!(
        GameState::new(board.clone(), bv("00000"), Player::C),
        Err(Error::Rule(_))
    ));
    assert!(matches!(
        GameState::new(board, bv("1100"), Player::C),
        Err(Error::Dimension { expected: 5, found: 4 })
    ));
}

#[test]
fn describe_moves() {
    let g = twist5_game("11001", Player::C);
    assert_eq!(Move::new(4, false).describe(g.board()), "r5:0");
    assert_eq!(Move::new(0, true).describe(g.board()), "r1:1");
}

#[test]
fn single_crossing_game() {
    let board = Arc::new(single_crossing());
    assert!(board.is_valid(), "{:?}", board.validate());
    let g = GameState::new(board.clone(), bv("1"), Player::C).unwrap();
    // every region holds the one crossing, so the final state is the start
    // plus the parity of swaps
    for swaps in 0..8u8 {
        let f = play(&g, &[0, 1, 2], &[swaps & 1 == 1, swaps & 2 == 2, swaps & 4 == 4]);
        let parity = swaps.count_ones() % 2 == 1;
        let winner = if parity { Player::D } else { Player::C };
        assert_eq!(f.winner().unwrap(), Status::Winner(winner));
    }
    assert!(GameState::new(board, bv("0"), Player::C).is_err());
}

#[test]
fn unknown_terminal_cannot_be_adjudicated() {
    let e = catalog::two_klein();
    let board = Arc::new(e.board.clone());
    let g = GameState::new(board.clone(), e.starts[0].clone(), Player::D).unwrap();
    assert_eq!(g.start_connected(), Some(true));
    // swapping only r1 leaves the designated set
    let order: Vec<usize> = (0..8).collect();
    let mut swaps = vec![false; 8];
    swaps[0] = true;
    let f = play(&g, &order, &swaps);
    assert_eq!(f.connected_now(), None);
    assert!(matches!(f.winner(), Err(Error::Configuration(_))));
    // the pairing r1==r3 stays inside it
    swaps[2] = true;
    let f = play(&g, &order, &swaps);
    assert_eq!(f.winner().unwrap(), Status::Winner(Player::C));
}

#[test]
fn player_parsing() {
    assert_eq!("C".parse::<Player>().unwrap(), Player::C);
    assert_eq!("d".parse::<Player>().unwrap(), Player::D);
    assert!("E".parse::<Player>().is_err());
    assert_eq!(Player::C.other(), Player::D);
}
