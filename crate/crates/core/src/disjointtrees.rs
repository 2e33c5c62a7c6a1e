//! Edge-disjoint spanning trees and the necessary conditions for a
//! second-player win in the link smoothing game.
//!
//! A multigraph has `k` edge-disjoint spanning trees iff every partition `P`
//! of its vertices has at least `k(|P| - 1)` edges between different parts.
//! Loops never count; parallel edges count individually.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::board::{Board, RegionKind};
use crate::error::{Error, Result};
use crate::ribbon::RibbonGraph;
use crate::unionfind::UnionFind;

/// Largest edge count the exhaustive tree search accepts.
pub const MAX_TREE_EDGES: usize = 24;
/// Largest vertex count the partition search accepts.
pub const MAX_PARTITION_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<MultiGraph> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::Domain(format!(
                "edge ({u}, {v}) leaves the vertex range 0..{vertices}"
            )));
        }
        Ok(MultiGraph {
            names: (0..vertices).map(|i| i.to_string()).collect(),
            edges,
        })
    }

    /// Parses one `u v` pair per line. A line with a single name adds an
    /// isolated vertex; `#` starts a comment. Vertices are numbered in order
    /// of first appearance.
    pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut id = |name: &str, names: &mut Vec<String>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {}
                [v] => {
                    id(v, &mut names);
                }
                [u, v] => {
                    let a = id(u, &mut names);
                    let b = id(v, &mut names);
                    edges.push((a, b));
                }
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        column: 1,
                        message: format!("expected `u v`, found {} tokens", tokens.len()),
                    })
                }
            }
        }
        Ok(MultiGraph { names, edges })
    }

    /// The checkerboard graph of a board: vertex regions joined by crossings.
    pub fn from_board(board: &Board) -> Result<MultiGraph> {
        if let Some(e) = board.embedding() {
            let g = RibbonGraph::compile(e, board.crossings())?;
            let edges = (0..board.n()).map(|c| g.ends(c)).collect();
            return Ok(MultiGraph {
                names: g.vertex_names().to_vec(),
                edges,
            });
        }
        if !board.kinds_known() {
            return Err(Error::Configuration(format!(
                "board {} has neither an embedding nor region kinds",
                board.name()
            )));
        }
        let vertices: Vec<usize> = (0..board.k())
            .filter(|&r| board.regions()[r].kind == RegionKind::Vertex)
            .collect();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); board.n()];
        for (v, &r) in vertices.iter().enumerate() {
            for c in board.row(r).ones_indices() {
                incident[c].push(v);
            }
        }
        let edges = incident
            .iter()
            .enumerate()
            .map(|(c, vs)| match vs.as_slice() {
                [v] => Ok((*v, *v)),
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::Configuration(format!(
                    "crossing {} touches {} vertex regions",
                    board.crossings()[c],
                    vs.len()
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiGraph {
            names: vertices.iter().map(|&r| board.region_id(r).to_string()).collect(),
            edges,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<MultiGraph> {
        if names.len() != self.names.len() {
            return Err(Error::Dimension {
                expected: self.names.len(),
                found: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.vertex_count() || v >= self.vertex_count() {
            return Err(Error::Domain(format!("edge ({u}, {v}) leaves the vertex range")));
        }
        self.edges.push((u, v));
        Ok(())
    }

    fn non_loop_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|(u, v)| u != v).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.sets() <= 1
    }
}

/// A vertex partition and the number of non-loop edges between its parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<usize>>,
    pub cross_edges: usize,
}

impl PartitionWitness {
    /// Recounts the cross edges and checks `|E_P| < k(|P| - 1)`.
    pub fn is_violation(&self, g: &MultiGraph, k: usize) -> bool {
        let n = g.vertex_count();
        let mut part = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                if v >= n || part[v] != usize::MAX {
                    return false;
                }
                part[v] = i;
            }
        }
        if part.contains(&usize::MAX) || self.parts.iter().any(Vec::is_empty) {
            return false;
        }
        let cross = cross_edge_count(g, &part);
        cross == self.cross_edges && cross < k * (self.parts.len().saturating_sub(1))
    }
}

/// Edges whose ends lie in different parts; `part[v]` labels vertex `v`.
pub fn cross_edge_count(g: &MultiGraph, part: &[usize]) -> usize {
    g.edges.iter().filter(|&&(u, v)| part[u] != part[v]).count()
}

fn check_input(g: &MultiGraph, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::Domain("the graph is not connected".into()));
    }
    if g.edge_count() > MAX_TREE_EDGES {
        return Err(Error::Capacity(format!(
            "{} edges exceeds the limit of {MAX_TREE_EDGES}",
            g.edge_count()
        )));
    }
    Ok(())
}

struct TreeSearch<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    used: Vec<bool>,
}

impl TreeSearch<'_> {
    /// Whether `k` more disjoint spanning trees fit in the unused edges.
    fn trees(&mut self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let free = self.used.iter().filter(|u| !**u).count();
        if free < k * (self.n - 1) {
            return false;
        }
        let mut chosen = Vec::with_capacity(self.n - 1);
        self.grow(k, 0, &mut chosen, &UnionFindState::new(self.n))
    }

    /// Extends a partial forest edge by edge; on a full tree, recurses.
    fn grow(&mut self, k: usize, from: usize, chosen: &mut Vec<usize>, uf: &UnionFindState) -> bool {
        if chosen.len() == self.n - 1 {
            for &e in chosen.iter() {
                self.used[e] = true;
            }
            let ok = self.trees(k - 1);
            for &e in chosen.iter() {
                self.used[e] = false;
            }
            return ok;
        }
        let need = self.n - 1 - chosen.len();
        let available = (from..self.edges.len()).filter(|&e| !self.used[e]).count();
        if available < need {
            return false;
        }
        for e in from..self.edges.len() {
            if self.used[e] {
                continue;
            }
            let (u, v) = self.edges[e];
            let mut next = uf.clone();
            if !next.union(u, v) {
                continue;
            }
            chosen.push(e);
            if self.grow(k, e + 1, chosen, &next) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
        false
    }
}

#[derive(Clone)]
struct UnionFindState {
    parent: Vec<usize>,
}

impl UnionFindState {
    fn new(n: usize) -> Self {
        UnionFindState {
            parent: (0..n).collect(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Whether `g` has `k` pairwise edge-disjoint spanning trees, by exhaustive
/// tree search.
pub fn has_k_disjoint_spanning_trees(g: &MultiGraph, k: usize) -> Result<bool> {
    check_input(g, k)?;
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(true);
    }
    let edges = g.non_loop_edges();
    let mut search = TreeSearch {
        n,
        edges: &edges,
        used: vec![false; edges.len()],
    };
    Ok(search.trees(k))
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

fn witness_from(g: &MultiGraph, labels: &[usize]) -> PartitionWitness {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut parts = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        parts[l].push(v);
    }
    PartitionWitness {
        parts,
        cross_edges: cross_edge_count(g, labels),
    }
}

/// A partition with fewer than `k(|P| - 1)` cross edges, or `None` when no
/// such partition exists.
///
/// Among violating partitions with connected parts the one with the largest
/// deficit is returned, preferring more parts. Every violating partition
/// can be refined into one with connected parts and at least the same deficit.
pub fn violating_partition(g: &MultiGraph, k: usize) -> Result<Option<PartitionWitness>> {
    check_input(g, k)?;
    let n = g.vertex_count();
    if n <= 1 || k == 1 {
        return Ok(None);
    }
    let singletons: Vec<usize> = (0..n).collect();
    let non_loop = g.non_loop_edges().len();
    if non_loop < k * (n - 1) && n > MAX_PARTITION_VERTICES {
        return Ok(Some(witness_from(g, &singletons)));
    }
    if n > MAX_PARTITION_VERTICES {
        return Err(Error::Capacity(format!(
            "{n} vertices exceeds the partition search limit of {MAX_PARTITION_VERTICES}"
        )));
    }
    let deficit = |labels: &[usize]| -> i64 {
        let parts = labels.iter().max().map_or(0, |m| m + 1) as i64;
        k as i64 * (parts - 1) - cross_edge_count(g, labels) as i64
    };
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(singletons.clone());
    queue.push_back(singletons);
    while let Some(labels) = queue.pop_front() {
        let d = deficit(&labels);
        if d > 0 && best.as_ref().is_none_or(|(bd, _)| d > *bd) {
            best = Some((d, labels.clone()));
        }
        for &(u, v) in &g.edges {
            let (a, b) = (labels[u], labels[v]);
            if a == b {
                continue;
            }
            let merged: Vec<usize> = labels.iter().map(|&l| if l == b { a } else { l }).collect();
            let merged = canonical(&merged);
            if seen.insert(merged.clone()) {
                queue.push_back(merged);
            }
        }
    }
    Ok(best.map(|(_, labels)| witness_from(g, &labels)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotPReason {
    OddEdgeCount,
    NoTwoDisjointSpanningTrees,
}

impl fmt::Display for NotPReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotPReason::OddEdgeCount => "odd edge count",
            NotPReason::NoTwoDisjointSpanningTrees => "no two edge-disjoint spanning trees",
        })
    }
}

/// Outcome of the necessary-condition check. A graph that passes is never
/// certified as a second-player win, only as not ruled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum LinkSmoothingClass {
    DefinitelyNotP {
        reasons: Vec<NotPReason>,
        witness: Option<PartitionWitness>,
        /// `|E| < 2(|V| - 1)`.
        below_edge_bound: bool,
    },
    PNecessaryConditionsHold,
}

pub fn classify_link_smoothing(g: &MultiGraph) -> Result<LinkSmoothingClass> {
    if !g.is_connected() {
        return Err(Error::Domain("the graph is not connected".into()));
    }
    let e = g.edge_count();
    let n = g.vertex_count();
    let below_edge_bound = e < 2 * n.saturating_sub(1);
    let mut reasons = Vec::new();
    if e % 2 == 1 {
        reasons.push(NotPReason::OddEdgeCount);
    }
    let mut witness = None;
    match has_k_disjoint_spanning_trees(g, 2) {
        Ok(true) => {}
        Ok(false) => {
            reasons.push(NotPReason::NoTwoDisjointSpanningTrees);
            witness = violating_partition(g, 2)?;
        }
        Err(err) if reasons.is_empty() => return Err(err),
        Err(_) => {}
    }
    if reasons.is_empty() {
        Ok(LinkSmoothingClass::PNecessaryConditionsHold)
    } else {
        Ok(LinkSmoothingClass::DefinitelyNotP {
            reasons,
            witness,
            below_edge_bound,
        })
    }
}
