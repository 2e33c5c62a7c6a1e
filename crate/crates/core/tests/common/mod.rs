//! Independent oracles shared by the integration tests. Nothing here calls
//! the connectivity backends or the solver.
#![allow(dead_code)]

use swapgame_core::board::{Board, Region, RegionKind};
use swapgame_core::ribbon::{HalfEdge, RibbonEmbedding};
use swapgame_core::BitVec;

pub fn bv(s: &str) -> BitVec {
    s.parse().unwrap()
}

/// Plain components count with a DFS over an adjacency list.
pub fn components(vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; vertices];
    let mut count = 0;
    for s in 0..vertices {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

pub fn is_spanning_tree(vertices: usize, edges: &[(usize, usize)]) -> bool {
    edges.len() + 1 == vertices && components(vertices, edges) == 1
}

/// The checkerboard graph of a board with known region kinds, built from
/// the move rows alone: vertex list and crossing ends.
pub fn checkerboard(board: &Board) -> (usize, Vec<(usize, usize)>) {
    let vertices: Vec<usize> = (0..board.k())
        .filter(|&r| board.regions()[r].kind == RegionKind::Vertex)
        .collect();
    let ends = (0..board.n())
        .map(|c| {
            let touching: Vec<usize> = (0..vertices.len()).filter(|&v| board.row(vertices[v]).get(c)).collect();
            match touching.as_slice() {
                [a] => (*a, *a),
                [a, b] => (*a, *b),
                other => panic!("crossing {c} touches {other:?}"),
            }
        })
        .collect();
    (vertices.len(), ends)
}

/// Spanning-tree test for a state on a spherical board.
pub fn planar_connected(board: &Board, v: &BitVec) -> bool {
    let (nv, ends) = checkerboard(board);
    let on: Vec<(usize, usize)> = v.ones_indices().map(|c| ends[c]).collect();
    is_spanning_tree(nv, &on)
}

/// Exhaustive minimax over explicit move sequences, no memo.
pub fn minimax(rows: &[BitVec], unselected: &mut Vec<bool>, state: &BitVec, c_to_move: bool, connected: &dyn Fn(&BitVec) -> bool) -> bool {
    if unselected.iter().all(|u| !u) {
        return connected(state);
    }
    let mut results = Vec::new();
    for r in 0..rows.len() {
        if !unselected[r] {
            continue;
        }
        unselected[r] = false;
        for swap in [false, true] {
            let next = if swap { state.add(&rows[r]).unwrap() } else { state.clone() };
            results.push(minimax(rows, unselected, &next, !c_to_move, connected));
        }
        unselected[r] = true;
    }
    if c_to_move {
        results.into_iter().any(|x| x)
    } else {
        results.into_iter().all(|x| x)
    }
}

/// The shadow with one crossing: two lobes joined by the crossing and the
/// outer face meeting it twice.
pub fn single_crossing() -> Board {
    let mut rotations = indexmap::IndexMap::new();
    rotations.insert("a".to_string(), vec![HalfEdge::new("c1", 0)]);
    rotations.insert("b".to_string(), vec![HalfEdge::new("c1", 1)]);
    let mut endpoints = indexmap::IndexMap::new();
    endpoints.insert("c1".to_string(), ["a".to_string(), "b".to_string()]);
    Board::new(
        "single",
        vec!["c1".into()],
        vec![
            Region::new("a", RegionKind::Vertex, &["c1"]),
            Region::new("b", RegionKind::Vertex, &["c1"]),
            Region::new("o", RegionKind::Face, &["c1"]),
        ],
    )
    .with_euler_characteristic(2)
    .with_embedding(RibbonEmbedding {
        rotations,
        endpoints,
        twisted: vec![],
    })
}
