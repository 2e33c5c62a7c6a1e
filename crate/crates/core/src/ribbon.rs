//! Ribbon graphs: rotation systems with twisted edges, on any surface.
//!
//! Boundary walk convention. Every edge band has two ends (half-edges) and
//! two long sides. A *flag* is a half-edge together with one of its sides,
//! named relative to the rotation at its vertex: `NEXT` faces the following
//! half-edge in the cyclic order, `PREV` the preceding one. Two involutions
//! glue flags together:
//!
//! * at a vertex, `(h, NEXT)` is glued to `(next(h), PREV)`;
//! * along an untwisted band, `(h, NEXT)` is glued to `(h', PREV)` where `h'`
//!   is the opposite end; along a twisted band `(h, NEXT)` is glued to
//!   `(h', NEXT)` instead.
//!
//! Boundary circles of the band neighbourhood are the classes of flags under
//! both gluings. A vertex carrying no edge contributes one circle.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::BitVec;
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// One end of a crossing's band: `(crossing id, end)` with `end` 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdge(pub String, pub u8);

impl HalfEdge {
    pub fn new(crossing: impl Into<String>, end: u8) -> Self {
        HalfEdge(crossing.into(), end)
    }
}

/// Embedding data as stored in a board file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonEmbedding {
    /// Cyclic order of half-edges around each vertex region.
    pub rotations: IndexMap<String, Vec<HalfEdge>>,
    /// Vertex regions at end 0 and end 1 of each crossing.
    pub endpoints: IndexMap<String, [String; 2]>,
    /// Crossings whose band passes an orientation-reversing identification.
    #[serde(default)]
    pub twisted: Vec<String>,
}

impl RibbonEmbedding {
    pub(crate) fn canonical(
        &self,
        crossing_index: &HashMap<String, usize>,
        region_index: &HashMap<String, usize>,
    ) -> RibbonEmbedding {
        let rank = |map: &HashMap<String, usize>, id: &String| {
            (map.get(id).copied().unwrap_or(usize::MAX), id.clone())
        };
        let mut rotations: Vec<_> = self.rotations.clone().into_iter().collect();
        rotations.sort_by_key(|(v, _)| rank(region_index, v));
        let mut endpoints: Vec<_> = self.endpoints.clone().into_iter().collect();
        endpoints.sort_by_key(|(c, _)| rank(crossing_index, c));
        let mut twisted = self.twisted.clone();
        twisted.sort_by_key(|c| rank(crossing_index, c));
        twisted.dedup();
        RibbonEmbedding {
            rotations: rotations.into_iter().collect(),
            endpoints: endpoints.into_iter().collect(),
            twisted,
        }
    }

    pub(crate) fn relabeled(
        &self,
        crossings: &HashMap<&str, &str>,
        regions: &HashMap<&str, &str>,
    ) -> RibbonEmbedding {
        let c = |id: &String| crossings.get(id.as_str()).map_or(id.clone(), |s| s.to_string());
        let r = |id: &String| regions.get(id.as_str()).map_or(id.clone(), |s| s.to_string());
        RibbonEmbedding {
            rotations: self
                .rotations
                .iter()
                .map(|(v, rot)| (r(v), rot.iter().map(|HalfEdge(x, e)| HalfEdge(c(x), *e)).collect()))
                .collect(),
            endpoints: self
                .endpoints
                .iter()
                .map(|(x, [a, b])| (c(x), [r(a), r(b)]))
                .collect(),
            twisted: self.twisted.iter().map(c).collect(),
        }
    }
}

const PREV: usize = 0;
const NEXT: usize = 1;

/// A validated embedding indexed against a fixed crossing order.
///
/// Half-edge `2c + e` is end `e` of crossing `c`.
#[derive(Clone, Debug)]
pub struct RibbonGraph {
    vertices: Vec<String>,
    rotation: Vec<Vec<usize>>,
    half_edge_vertex: Vec<usize>,
    twisted: Vec<bool>,
}

impl RibbonGraph {
    /// Checks `embedding` against `crossings` and indexes it.
    pub fn compile(embedding: &RibbonEmbedding, crossings: &[String]) -> Result<RibbonGraph> {
        let index: HashMap<&str, usize> =
            crossings.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let lookup = |c: &str| index.get(c).copied().ok_or_else(|| Error::UnknownCrossing(c.to_owned()));
        let n = crossings.len();
        let mut half_edge_vertex = vec![usize::MAX; 2 * n];
        let mut vertices = Vec::new();
        let mut rotation = Vec::new();
        for (v, (name, rot)) in embedding.rotations.iter().enumerate() {
            vertices.push(name.clone());
            let mut order = Vec::with_capacity(rot.len());
            for HalfEdge(c, end) in rot {
                if *end > 1 {
                    return Err(Error::Structural(format!("end index {end} of {c} at {name}")));
                }
                let h = 2 * lookup(c)? + *end as usize;
                if half_edge_vertex[h] != usize::MAX {
                    return Err(Error::Structural(format!("end {end} of {c} appears twice")));
                }
                half_edge_vertex[h] = v;
                order.push(h);
            }
            rotation.push(order);
        }
        for (c, name) in crossings.iter().enumerate() {
            for end in 0..2 {
                if half_edge_vertex[2 * c + end] == usize::MAX {
                    return Err(Error::Structural(format!("end {end} of {name} is in no rotation")));
                }
            }
            let Some([a, b]) = embedding.endpoints.get(name) else {
                return Err(Error::Structural(format!("no endpoints for {name}")));
            };
            let at = |h: usize| vertices[half_edge_vertex[h]].as_str();
            if at(2 * c) != a || at(2 * c + 1) != b {
                return Err(Error::Structural(format!(
                    "endpoints of {name} are [{a}, {b}] but the rotations place it at [{}, {}]",
                    at(2 * c),
                    at(2 * c + 1)
                )));
            }
        }
        for c in embedding.endpoints.keys() {
            lookup(c)?;
        }
        let mut twisted = vec![false; n];
        for c in &embedding.twisted {
            twisted[lookup(c)?] = true;
        }
        Ok(RibbonGraph {
            vertices,
            rotation,
            half_edge_vertex,
            twisted,
        })
    }

    /// Compiles using the crossing order of the endpoint map.
    pub fn from_embedding(embedding: &RibbonEmbedding) -> Result<RibbonGraph> {
        let crossings: Vec<String> = embedding.endpoints.keys().cloned().collect();
        RibbonGraph::compile(embedding, &crossings)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.twisted.len()
    }

    /// Vertex indices at end 0 and end 1 of crossing `c`.
    pub fn ends(&self, c: usize) -> (usize, usize) {
        (self.half_edge_vertex[2 * c], self.half_edge_vertex[2 * c + 1])
    }

    pub fn is_twisted(&self, c: usize) -> bool {
        self.twisted[c]
    }

    fn flag(h: usize, side: usize) -> usize {
        2 * h + side
    }

    /// Classes of flags of the on-edges, plus the count of bare vertices.
    fn walk(&self, on: &dyn Fn(usize) -> bool) -> (UnionFind, Vec<usize>, usize) {
        let n = self.edge_count();
        let mut uf = UnionFind::new(4 * n);
        let mut used = Vec::new();
        for c in (0..n).filter(|&c| on(c)) {
            let (h0, h1) = (2 * c, 2 * c + 1);
            if self.twisted[c] {
                uf.union(Self::flag(h0, NEXT), Self::flag(h1, NEXT));
                uf.union(Self::flag(h0, PREV), Self::flag(h1, PREV));
            } else {
                uf.union(Self::flag(h0, NEXT), Self::flag(h1, PREV));
                uf.union(Self::flag(h0, PREV), Self::flag(h1, NEXT));
            }
            used.extend([h0, h1].into_iter().flat_map(|h| [Self::flag(h, PREV), Self::flag(h, NEXT)]));
        }
        let mut bare = 0;
        for rot in &self.rotation {
            let live: Vec<usize> = rot.iter().copied().filter(|&h| on(h / 2)).collect();
            if live.is_empty() {
                bare += 1;
                continue;
            }
            for (i, &h) in live.iter().enumerate() {
                let next = live[(i + 1) % live.len()];
                uf.union(Self::flag(h, NEXT), Self::flag(next, PREV));
            }
        }
        (uf, used, bare)
    }

    fn count_with(&self, on: &dyn Fn(usize) -> bool) -> usize {
        let (mut uf, used, bare) = self.walk(on);
        let roots: BTreeSet<usize> = used.into_iter().map(|f| uf.find(f)).collect();
        roots.len() + bare
    }

    /// Boundary circles of the neighbourhood of the on-edges and all vertices.
    pub fn boundary_components(&self, on: &BitVec) -> Result<usize> {
        if on.len() != self.edge_count() {
            return Err(Error::Dimension {
                expected: self.edge_count(),
                found: on.len(),
            });
        }
        Ok(self.count_with(&|c| on.get(c)))
    }

    pub(crate) fn boundary_components_mask(&self, on: u64) -> usize {
        self.count_with(&|c| on >> c & 1 == 1)
    }

    /// Number of faces of the full embedded graph.
    pub fn face_count(&self) -> usize {
        self.count_with(&|_| true)
    }

    /// `V - E + F` of the full graph.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Crossings along each face of the full graph (vertex-only faces omitted).
    pub fn face_boundaries(&self) -> Vec<BTreeSet<usize>> {
        let (mut uf, used, _) = self.walk(&|_| true);
        let mut faces: IndexMap<usize, BTreeSet<usize>> = IndexMap::new();
        for f in used {
            let root = uf.find(f);
            faces.entry(root).or_default().insert(f / 4);
        }
        faces.into_values().collect()
    }

    /// Whether the band neighbourhood of the on-edges is orientable.
    ///
    /// Vertices without on-edges are ignored; the remaining edges must form
    /// one connected piece.
    pub fn neighborhood_orientable(&self, on: &BitVec) -> Result<bool> {
        if on.len() != self.edge_count() {
            return Err(Error::Dimension {
                expected: self.edge_count(),
                found: on.len(),
            });
        }
        let nv = self.vertex_count();
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
        for c in on.ones_indices() {
            let (a, b) = self.ends(c);
            adj[a].push((b, self.twisted[c]));
            adj[b].push((a, self.twisted[c]));
        }
        let touched: Vec<usize> = (0..nv).filter(|&v| !adj[v].is_empty()).collect();
        let Some(&root) = touched.first() else {
            return Ok(true);
        };
        let mut sign: Vec<Option<bool>> = vec![None; nv];
        sign[root] = Some(false);
        let mut stack = vec![root];
        let mut orientable = true;
        while let Some(v) = stack.pop() {
            let sv = sign[v].expect("visited vertices are signed");
            for &(w, twist) in &adj[v] {
                let want = sv ^ twist;
                match sign[w] {
                    None => {
                        sign[w] = Some(want);
                        stack.push(w);
                    }
                    Some(sw) if sw != want => orientable = false,
                    Some(_) => {}
                }
            }
        }
        if touched.iter().any(|&v| sign[v].is_none()) {
            return Err(Error::Domain(
                "on-edges form more than one component; orientability is per component".into(),
            ));
        }
        Ok(orientable)
    }
}

pub fn boundary_components(embedding: &RibbonEmbedding, on: &BitVec) -> Result<usize> {
    RibbonGraph::from_embedding(embedding)?.boundary_components(on)
}

pub fn neighborhood_orientable(embedding: &RibbonEmbedding, on: &BitVec) -> Result<bool> {
    RibbonGraph::from_embedding(embedding)?.neighborhood_orientable(on)
}

pub fn euler_characteristic(embedding: &RibbonEmbedding) -> Result<i64> {
    Ok(RibbonGraph::from_embedding(embedding)?.euler_characteristic())
}
