mod common;

use common::is_spanning_tree;
use proptest::prelude::*;
use swapgame_core::catalog;
use swapgame_core::disjointtrees::{
    classify_link_smoothing, has_k_disjoint_spanning_trees, violating_partition, LinkSmoothingClass, MultiGraph,
    NotPReason,
};
use swapgame_core::Error;

/// Two disjoint spanning trees by trying every pair of edge subsets.
fn brute_two_trees(nv: usize, edges: &[(usize, usize)]) -> bool {
    let m = edges.len();
    let pick = |mask: u32| -> Vec<(usize, usize)> { (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect() };
    let trees: Vec<u32> = (0..1u32 << m)
        .filter(|&s| s.count_ones() as usize + 1 == nv && is_spanning_tree(nv, &pick(s)))
        .collect();
    trees.iter().any(|&a| trees.iter().any(|&b| a & b == 0))
}

fn connected_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_v).prop_flat_map(move |nv| {
        // a random spanning tree keeps the graph connected
        let tree = prop::collection::vec(any::<prop::sample::Index>(), nv - 1);
        let extra = prop::collection::vec((0..nv, 0..nv), 0..=max_e.saturating_sub(nv - 1));
        (Just(nv), tree, extra).prop_map(|(nv, tree, extra)| {
            let mut edges: Vec<(usize, usize)> = tree.iter().enumerate().map(|(i, ix)| (ix.index(i + 1), i + 1)).collect();
            edges.extend(extra);
            (nv, edges)
        })
    })
}

fn loopless(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    edges.iter().copied().filter(|(a, b)| a != b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decision_matches_brute_force((nv, edges) in connected_graph(6, 11)) {
        let g = MultiGraph::new(nv, edges.clone()).unwrap();
        let expected = brute_two_trees(nv, &loopless(&edges));
        prop_assert_eq!(has_k_disjoint_spanning_trees(&g, 2).unwrap(), expected);
    }

    #[test]
    fn false_answers_carry_witnesses((nv, edges) in connected_graph(7, 14), k in 1usize..=3) {
        let g = MultiGraph::new(nv, edges).unwrap();
        let has = has_k_disjoint_spanning_trees(&g, k).unwrap();
        let w = violating_partition(&g, k).unwrap();
        prop_assert_eq!(has, w.is_none());
        if let Some(w) = w {
            prop_assert!(w.is_violation(&g, k));
        }
    }

    #[test]
    fn edge_bound_implies_singleton_witness((nv, edges) in connected_graph(7, 14), k in 2usize..=3) {
        let g = MultiGraph::new(nv, edges.clone()).unwrap();
        let non_loops = loopless(&edges).len();
        if non_loops < k * (nv - 1) {
            prop_assert!(!has_k_disjoint_spanning_trees(&g, k).unwrap());
            let singletons: Vec<usize> = (0..nv).collect();
            prop_assert_eq!(swapgame_core::disjointtrees::cross_edge_count(&g, &singletons), non_loops);
        }
    }

    #[test]
    fn more_trees_is_harder((nv, edges) in connected_graph(6, 14)) {
        let g = MultiGraph::new(nv, edges).unwrap();
        let answers: Vec<bool> = (1..=3).map(|k| has_k_disjoint_spanning_trees(&g, k).unwrap()).collect();
        prop_assert!(answers[0]);
        prop_assert!(answers.windows(2).all(|w| w[0] || !w[1]));
    }

    #[test]
    fn adding_edges_never_hurts((nv, edges) in connected_graph(6, 10), a in 0usize..6, b in 0usize..6) {
        let g = MultiGraph::new(nv, edges.clone()).unwrap();
        let mut h = g.clone();
        h.add_edge(a % nv, b % nv).unwrap();
        if has_k_disjoint_spanning_trees(&g, 2).unwrap() {
            prop_assert!(has_k_disjoint_spanning_trees(&h, 2).unwrap());
        }
    }

    #[test]
    fn loops_do_not_matter((nv, edges) in connected_graph(6, 10), at in 0usize..6, count in 1usize..4) {
        let g = MultiGraph::new(nv, edges).unwrap();
        let mut h = g.clone();
        for _ in 0..count {
            h.add_edge(at % nv, at % nv).unwrap();
        }
        prop_assert_eq!(has_k_disjoint_spanning_trees(&g, 2).unwrap(), has_k_disjoint_spanning_trees(&h, 2).unwrap());
    }

    #[test]
    fn sparse_large_graphs_fail((nv, edges) in connected_graph(11, 10)) {
        prop_assume!(nv >= 7);
        let g = MultiGraph::new(nv, edges).unwrap();
        prop_assert!(!has_k_disjoint_spanning_trees(&g, 2).unwrap());
    }

    #[test]
    fn classifier_respects_parity_and_trees((nv, edges) in connected_graph(6, 12)) {
        let g = MultiGraph::new(nv, edges.clone()).unwrap();
        let odd = edges.len() % 2 == 1;
        let trees = has_k_disjoint_spanning_trees(&g, 2).unwrap();
        match classify_link_smoothing(&g).unwrap() {
            LinkSmoothingClass::DefinitelyNotP { reasons, witness, below_edge_bound } => {
                prop_assert_eq!(reasons.contains(&NotPReason::OddEdgeCount), odd);
                prop_assert_eq!(reasons.contains(&NotPReason::NoTwoDisjointSpanningTrees), !trees);
                prop_assert_eq!(witness.is_some(), !trees);
                prop_assert_eq!(below_edge_bound, edges.len() < 2 * (nv - 1));
            }
            LinkSmoothingClass::PNecessaryConditionsHold => prop_assert!(!odd && trees),
        }
    }
}

#[test]
fn domain_errors() {
    let disconnected = MultiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
    assert!(matches!(has_k_disjoint_spanning_trees(&disconnected, 2), Err(Error::Domain(_))));
    assert!(matches!(classify_link_smoothing(&disconnected), Err(Error::Domain(_))));
    let g = MultiGraph::new(2, vec![(0, 1)]).unwrap();
    assert!(matches!(has_k_disjoint_spanning_trees(&g, 0), Err(Error::Domain(_))));
    assert!(MultiGraph::new(2, vec![(0, 2)]).is_err());
}

#[test]
fn edge_list_parsing() {
    let g = MultiGraph::parse_edge_list("# comment\nb a\na c\n\nc b\nd\nd a\n").unwrap();
    assert_eq!(g.names(), ["b", "a", "c", "d"]);
    assert_eq!(g.vertex_count(), 4);
    assert_eq!(g.edge_count(), 4);
    assert!(MultiGraph::parse_edge_list("a b c\n").is_err());
}

#[test]
fn k4_splits_into_two_paths() {
    let k4 = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(has_k_disjoint_spanning_trees(&k4, 2).unwrap());
    assert!(!has_k_disjoint_spanning_trees(&k4, 3).unwrap());
    let w = violating_partition(&k4, 3).unwrap().unwrap();
    assert!(w.is_violation(&k4, 3));
}

#[test]
fn checkerboard_graphs_from_boards() {
    let g = MultiGraph::from_board(&catalog::borromean().board).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
    assert!(has_k_disjoint_spanning_trees(&g, 2).unwrap());
    let g = MultiGraph::from_board(&catalog::twist5().board).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 5));
    assert!(!has_k_disjoint_spanning_trees(&g, 2).unwrap());
}
