//! Connectivity of smoothed states.
//!
//! A state is connected when its smoothing is a single closed curve. Three
//! backends decide this:
//!
//! * `PlanarGraph`: on the sphere the curve count is `|E_on| - |V| + 2c`,
//!   where `c` counts components of the on-subgraph including bare vertices;
//! * `RibbonEmbedding`: boundary circles of the band neighbourhood, valid on
//!   any surface;
//! * `DesignatedSet`: a list of states known to be connected.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::BitVec;
use crate::board::{Board, RegionKind};
use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::ribbon::RibbonGraph;
use crate::unionfind::UnionFind;

/// States beyond this many crossings are not enumerated.
pub const MAX_ENUMERATED_CROSSINGS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    PlanarGraph,
    RibbonEmbedding,
    DesignatedSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ComponentCount {
    Exact(usize),
    AtLeastTwo,
    Unknown,
}

impl ComponentCount {
    pub fn is_connected(self) -> Option<bool> {
        match self {
            ComponentCount::Exact(c) => Some(c == 1),
            ComponentCount::AtLeastTwo => Some(false),
            ComponentCount::Unknown => None,
        }
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Planar {
        vertices: usize,
        ends: Vec<(usize, usize)>,
    },
    Ribbon(RibbonGraph),
    Designated {
        states: HashSet<BitVec>,
        total: bool,
    },
}

/// Whether the board lives on the sphere; assumed when nothing says otherwise.
fn spherical(board: &Board) -> Result<bool> {
    Ok(match (board.euler_characteristic(), board.embedding()) {
        (Some(chi), _) => chi == 2,
        (None, Some(e)) => RibbonGraph::compile(e, board.crossings())?.euler_characteristic() == 2,
        (None, None) => true,
    })
}

/// A compiled connectivity oracle for one board.
#[derive(Clone, Debug)]
pub struct Connectivity {
    n: usize,
    backend: Backend,
}

impl Connectivity {
    /// Picks the planar fast path when the board is spherical with known
    /// region kinds, then the ribbon embedding, then the designated set.
    pub fn for_board(board: &Board) -> Result<Connectivity> {
        if spherical(board)? && board.kinds_known() {
            if let Ok(c) = Connectivity::with_backend(board, BackendKind::PlanarGraph) {
                return Ok(c);
            }
        }
        if board.embedding().is_some() {
            return Connectivity::with_backend(board, BackendKind::RibbonEmbedding);
        }
        if board.designated().is_some() {
            return Connectivity::with_backend(board, BackendKind::DesignatedSet);
        }
        Err(Error::Configuration(format!(
            "board {} has no connectivity backend: it needs region kinds on the sphere, an embedding, or connected_states",
            board.name()
        )))
    }

    pub fn with_backend(board: &Board, kind: BackendKind) -> Result<Connectivity> {
        let n = board.n();
        let backend = match kind {
            BackendKind::PlanarGraph => {
                if !spherical(board)? {
                    return Err(Error::Configuration(
                        "the planar backend only applies to boards on the sphere".into(),
                    ));
                }
                if !board.kinds_known() {
                    return Err(Error::Configuration(
                        "the planar backend needs every region kind".into(),
                    ));
                }
                let vertex_regions: Vec<usize> = (0..board.k())
                    .filter(|&i| board.regions()[i].kind == RegionKind::Vertex)
                    .collect();
                let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
                for (v, &ri) in vertex_regions.iter().enumerate() {
                    for c in board.row(ri).ones_indices() {
                        incident[c].push(v);
                    }
                }
                let ends = incident
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
                Backend::Planar {
                    vertices: vertex_regions.len(),
                    ends,
                }
            }
            BackendKind::RibbonEmbedding => {
                let e = board
                    .embedding()
                    .ok_or_else(|| Error::Configuration("board has no embedding".into()))?;
                Backend::Ribbon(RibbonGraph::compile(e, board.crossings())?)
            }
            BackendKind::DesignatedSet => {
                let d = board
                    .designated()
                    .ok_or_else(|| Error::Configuration("board has no connected_states".into()))?;
                Backend::Designated {
                    states: d.states.iter().cloned().collect(),
                    total: d.total,
                }
            }
        };
        Ok(Connectivity { n, backend })
    }

    pub fn kind(&self) -> BackendKind {
        match self.backend {
            Backend::Planar { .. } => BackendKind::PlanarGraph,
            Backend::Ribbon(_) => BackendKind::RibbonEmbedding,
            Backend::Designated { .. } => BackendKind::DesignatedSet,
        }
    }

    /// Whether every state gets a definite answer.
    pub fn is_total(&self) -> bool {
        match &self.backend {
            Backend::Designated { total, .. } => *total,
            _ => true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn component_count(&self, v: &BitVec) -> Result<ComponentCount> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(match &self.backend {
            Backend::Planar { vertices, ends } => {
                ComponentCount::Exact(planar_count(*vertices, ends, &|c| v.get(c)))
            }
            Backend::Ribbon(g) => ComponentCount::Exact(g.boundary_components(v)?),
            Backend::Designated { states, total } => {
                if states.contains(v) {
                    ComponentCount::Exact(1)
                } else if *total {
                    ComponentCount::AtLeastTwo
                } else {
                    ComponentCount::Unknown
                }
            }
        })
    }

    pub fn is_connected(&self, v: &BitVec) -> Result<Option<bool>> {
        let connected = self.component_count(v)?.is_connected();
        if let (Backend::Planar { vertices, ends }, Some(c)) = (&self.backend, connected) {
            debug_assert_eq!(c, planar_spanning_tree(*vertices, ends, &|i| v.get(i)));
        }
        Ok(connected)
    }

    /// Connectivity of the state whose bit `i` is bit `i` of `mask`.
    pub(crate) fn connected_mask(&self, mask: u64) -> Option<bool> {
        debug_assert!(self.n <= 64);
        match &self.backend {
            Backend::Planar { vertices, ends } => {
                Some(planar_count(*vertices, ends, &|c| mask >> c & 1 == 1) == 1)
            }
            Backend::Ribbon(g) => Some(g.boundary_components_mask(mask) == 1),
            Backend::Designated { .. } => self.is_connected(&BitVec::from_mask(mask, self.n)).ok().flatten(),
        }
    }

    /// The designated states, if this is a designated-set backend.
    pub(crate) fn designated_states(&self) -> Option<&HashSet<BitVec>> {
        match &self.backend {
            Backend::Designated { states, .. } => Some(states),
            _ => None,
        }
    }
}

fn planar_components(vertices: usize, ends: &[(usize, usize)], on: &dyn Fn(usize) -> bool) -> (usize, usize) {
    let mut uf = UnionFind::new(vertices);
    let mut edges = 0;
    for (c, &(a, b)) in ends.iter().enumerate() {
        if on(c) {
            edges += 1;
            uf.union(a, b);
        }
    }
    (edges, uf.sets())
}

fn planar_count(vertices: usize, ends: &[(usize, usize)], on: &dyn Fn(usize) -> bool) -> usize {
    let (edges, comps) = planar_components(vertices, ends, on);
    edges + 2 * comps - vertices
}

fn planar_spanning_tree(vertices: usize, ends: &[(usize, usize)], on: &dyn Fn(usize) -> bool) -> bool {
    let (edges, comps) = planar_components(vertices, ends, on);
    comps == 1 && edges + 1 == vertices
}

/// Number of closed curves in the smoothed state `v`.
pub fn component_count(board: &Board, v: &BitVec) -> Result<ComponentCount> {
    Connectivity::for_board(board)?.component_count(v)
}

/// `Some(true)` iff `v` is a single curve; `None` when the backend cannot tell.
pub fn is_connected_state(board: &Board, v: &BitVec) -> Result<Option<bool>> {
    Connectivity::for_board(board)?.is_connected(v)
}

/// All connected states of `board`, in lexicographic order of their text form.
pub fn enumerate_connected_states(board: &Board, mode: Parallelism) -> Result<Vec<BitVec>> {
    let conn = Connectivity::for_board(board)?;
    enumerate_with(&conn, mode)
}

pub fn enumerate_with(conn: &Connectivity, mode: Parallelism) -> Result<Vec<BitVec>> {
    if !conn.is_total() {
        return Err(Error::Configuration(
            "the designated set is partial, so connected states cannot be enumerated".into(),
        ));
    }
    if let Some(states) = conn.designated_states() {
        let mut out: Vec<BitVec> = states.iter().cloned().collect();
        out.sort_by_key(BitVec::lex_key);
        return Ok(out);
    }
    let n = conn.n();
    if n > MAX_ENUMERATED_CROSSINGS {
        return Err(Error::Capacity(format!(
            "{n} crossings exceeds the enumeration limit of {MAX_ENUMERATED_CROSSINGS}"
        )));
    }
    let mut masks = par::filter_map_range(mode, 0..1u64 << n, |m| {
        conn.connected_mask(m).unwrap_or(false).then_some(m)
    });
    masks.sort_by_key(|m| m.reverse_bits());
    Ok(masks.into_iter().map(|m| BitVec::from_mask(m, n)).collect())
}

/// Whether the swap-equivalence class of `v0` holds a connected state.
pub fn class_has_connected_state(board: &Board, v0: &BitVec, mode: Parallelism) -> Result<bool> {
    board.check_len(v0)?;
    let conn = Connectivity::for_board(board)?;
    if conn.is_connected(v0)? == Some(true) {
        return Ok(true);
    }
    let matrix = board.move_matrix()?;
    let known: Vec<BitVec> = match conn.designated_states() {
        Some(states) => states.iter().cloned().collect(),
        None => enumerate_with(&conn, mode)?,
    };
    let basis = matrix.rref();
    for s in &known {
        if basis.in_affine_span(s, v0)? {
            return Ok(true);
        }
    }
    if conn.is_total() {
        Ok(false)
    } else {
        Err(Error::Configuration(
            "no designated state is in this class and the designated set is partial".into(),
        ))
    }
}

/// Size of the swap-equivalence class of any state: `2^rank`.
pub fn class_size(board: &Board) -> Result<u128> {
    let rank = board.move_matrix()?.rank();
    Ok(1u128 << rank)
}
