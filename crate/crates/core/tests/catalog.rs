mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;

use swapgame_core::board::{parse_board, write_board, RegionKind};
use swapgame_core::catalog::{self, NAMES};
use swapgame_core::ribbon::RibbonGraph;
use swapgame_core::strategy::verify;
use swapgame_core::{BitVec, Error};

fn boards_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../boards")
}

#[test]
fn every_entry_validates() {
    let all = catalog::all();
    assert_eq!(all.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(), NAMES);
    for e in all {
        let errors: Vec<_> = e
            .board
            .validate()
            .into_iter()
            .filter(|v| v.severity == swapgame_core::board::Severity::Error)
            .collect();
        assert!(errors.is_empty(), "{}: {errors:?}", e.name);
        assert_eq!(e.board.k() as i64, e.board.n() as i64 + e.board.euler_characteristic().unwrap(), "{}", e.name);
        assert!(!e.provenance.is_empty());
    }
}

#[test]
fn face_regions_match_boundary_walks() {
    for e in catalog::all() {
        let Some(emb) = e.board.embedding() else { continue };
        let g = RibbonGraph::compile(emb, e.board.crossings()).unwrap();
        let mut walked: Vec<BTreeSet<usize>> = g.face_boundaries();
        let mut listed: Vec<BTreeSet<usize>> = e
            .board
            .regions()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.kind == RegionKind::Face)
            .map(|(i, _)| e.board.row(i).ones_indices().collect())
            .collect();
        walked.sort();
        listed.sort();
        assert_eq!(walked, listed, "{}", e.name);
        assert_eq!(g.euler_characteristic(), e.board.euler_characteristic().unwrap(), "{}", e.name);
    }
}

/// The vertex regions of twist5 are forced by the move matrix: they are the
/// only four rows covering every crossing exactly twice.
#[test]
fn twist5_vertex_regions_are_forced() {
    let b = catalog::twist5().board;
    let mut found = Vec::new();
    for mask in 0u32..1 << 7 {
        if mask.count_ones() != 4 {
            continue;
        }
        let ok = (0..5).all(|c| (0..7).filter(|&r| mask >> r & 1 == 1 && b.row(r).get(c)).count() == 2);
        if ok {
            found.push(mask);
        }
    }
    assert_eq!(found.len(), 1);
    let vertices: Vec<&str> = (0..7)
        .filter(|&r| b.regions()[r].kind == RegionKind::Vertex)
        .map(|r| b.region_id(r))
        .collect();
    let forced: Vec<&str> = (0..7).filter(|&r| found[0] >> r & 1 == 1).map(|r| b.region_id(r)).collect();
    assert_eq!(vertices, forced);
}

#[test]
fn twist5_groups_partition_the_starts() {
    let e = catalog::twist5();
    for start in &e.starts {
        let winners: Vec<&str> = e
            .strategies
            .iter()
            .filter(|s| verify(&e.board, start, &s.strategy).unwrap().wins)
            .map(|s| s.label.as_str())
            .collect();
        let claimed: Vec<&str> = e
            .strategies
            .iter()
            .filter(|s| s.starts.contains(start))
            .map(|s| s.label.as_str())
            .collect();
        assert_eq!(winners, claimed, "{start}");
        assert_eq!(winners.len(), 1, "{start}");
    }
}

#[test]
fn documents_round_trip() {
    for e in catalog::all() {
        let text = write_board(&e.board);
        let back = parse_board(&text).unwrap();
        assert_eq!(back, e.board, "{}", e.name);
        assert_eq!(write_board(&back), text);
    }
}

#[test]
fn shipped_files_equal_catalog() {
    for name in NAMES {
        let path = boards_dir().join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let board = parse_board(&text).unwrap();
        assert_eq!(board, catalog::by_name(name).unwrap().board, "{name}");
        assert_eq!(text, write_board(&board), "{name} is not in canonical form");
    }
}

#[test]
fn ladder_bounds() {
    assert!(matches!(catalog::ladder(1), Err(Error::Capacity(_))));
    assert!(catalog::ladder(catalog::LADDER_MAX).is_ok());
    assert!(catalog::ladder(catalog::LADDER_MAX + 1).is_err());
    assert!(catalog::by_name("ladder-9").is_err());
    assert!(catalog::by_name("nope").is_err());
    assert_eq!(catalog::by_name("ladder-3").unwrap().name, "ladder-3");
}

#[test]
fn ladder_start_is_every_even_crossing() {
    for n in 2..=5 {
        let e = catalog::ladder(n).unwrap();
        let expected = BitVec::from_bools((1..=4 * n).map(|i| i % 2 == 0));
        assert_eq!(e.board.start_state(), Some(&expected));
        assert_eq!(e.board.k(), 4 * n);
    }
}

#[test]
fn two_klein_rows_sum_as_published() {
    let b = catalog::two_klein().board;
    let row = |i: usize| b.row(i - 1).clone();
    let ones = BitVec::ones(10);
    assert_eq!(row(2).add(&row(6)).unwrap(), ones);
    assert_eq!(row(4).add(&row(8)).unwrap(), ones);
    let mut minus = ones.clone();
    minus.set(5, false);
    minus.set(6, false);
    assert_eq!(row(1).add(&row(3)).unwrap(), minus);
    assert_eq!(row(5).add(&row(7)).unwrap(), minus);
}
