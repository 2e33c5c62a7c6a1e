//! Game boards: crossings, regions, move rows, and the JSON board file.
//!
//! A region's move row is the indicator of the crossings on its boundary.
//! A region touching the same crossing at two corners still toggles it once.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{BitMatrix, BitVec};
use crate::error::{Error, Result};
use crate::ribbon::{HalfEdge, RibbonEmbedding, RibbonGraph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Vertex,
    Face,
    #[default]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: String,
    #[serde(default)]
    pub kind: RegionKind,
    pub crossings: Vec<String>,
}

impl Region {
    pub fn new(id: impl Into<String>, kind: RegionKind, crossings: &[&str]) -> Self {
        Region {
            id: id.into(),
            kind,
            crossings: crossings.iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// States known to be connected, used when no embedding is available.
///
/// Membership means connected. Non-membership means unknown unless the set
/// is declared total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignatedSet {
    pub states: Vec<BitVec>,
    pub total: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateRegion,
    DuplicateCrossing,
    EmptyRegion,
    UnknownCrossing,
    UnreferencedCrossing,
    CrossingOverused,
    EulerRelation,
    VertexIncidence,
    Embedding,
    RepeatedCorner,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::DuplicateRegion => "duplicate region id",
            ViolationKind::DuplicateCrossing => "duplicate crossing id",
            ViolationKind::EmptyRegion => "region without crossings",
            ViolationKind::UnknownCrossing => "unknown crossing",
            ViolationKind::UnreferencedCrossing => "crossing on no region",
            ViolationKind::CrossingOverused => "crossing on more than four regions",
            ViolationKind::EulerRelation => "euler relation k = n + chi",
            ViolationKind::VertexIncidence => "vertex incidence",
            ViolationKind::Embedding => "embedding",
            ViolationKind::RepeatedCorner => "region meets a crossing twice",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    /// Informational; does not make the board invalid.
    Notice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub severity: Severity,
    pub message: String,
    pub ids: Vec<String>,
}

impl Violation {
    fn error(kind: ViolationKind, message: impl Into<String>, ids: Vec<String>) -> Self {
        Violation {
            kind,
            severity: Severity::Error,
            message: message.into(),
            ids,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// Sort key for ids: numeric suffix first, then the whole id.
pub fn id_key(id: &str) -> (Option<u64>, &str) {
    let digits = id.len() - id.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let suffix = id[id.len() - digits..].parse().ok();
    (suffix, id)
}

/// An immutable game board, stored in canonical order.
#[derive(Clone, Debug)]
pub struct Board {
    name: String,
    euler_characteristic: Option<i64>,
    crossings: Vec<String>,
    regions: Vec<Region>,
    embedding: Option<RibbonEmbedding>,
    designated: Option<DesignatedSet>,
    start_state: Option<BitVec>,
    crossing_index: HashMap<String, usize>,
    region_index: HashMap<String, usize>,
    rows: Vec<BitVec>,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.euler_characteristic == other.euler_characteristic
            && self.crossings == other.crossings
            && self.regions == other.regions
            && self.embedding == other.embedding
            && self.designated == other.designated
            && self.start_state == other.start_state
    }
}

impl Eq for Board {}

impl Board {
    /// Builds a board, sorting crossings and regions into canonical order.
    pub fn new(name: impl Into<String>, crossings: Vec<String>, regions: Vec<Region>) -> Self {
        let mut crossings = crossings;
        crossings.sort_by(|a, b| id_key(a).cmp(&id_key(b)));
        let mut regions = regions;
        regions.sort_by(|a, b| id_key(&a.id).cmp(&id_key(&b.id)));

        let crossing_index: HashMap<String, usize> = crossings
            .iter()
            .enumerate()
            .rev()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        for r in &mut regions {
            let mut seen = HashSet::new();
            r.crossings.retain(|c| seen.insert(c.clone()));
            r.crossings.sort_by_key(|c| {
                (crossing_index.get(c).copied().unwrap_or(usize::MAX), c.clone())
            });
        }
        let region_index = regions
            .iter()
            .enumerate()
            .rev()
            .map(|(i, r)| (r.id.clone(), i))
            .collect();
        let n = crossings.len();
        let rows = regions
            .iter()
            .map(|r| {
                let mut row = BitVec::zeros(n);
                for c in &r.crossings {
                    if let Some(&j) = crossing_index.get(c) {
                        row.set(j, true);
                    }
                }
                row
            })
            .collect();

        Board {
            name: name.into(),
            euler_characteristic: None,
            crossings,
            regions,
            embedding: None,
            designated: None,
            start_state: None,
            crossing_index,
            region_index,
            rows,
        }
    }

    pub fn with_euler_characteristic(mut self, chi: i64) -> Self {
        self.euler_characteristic = Some(chi);
        self
    }

    pub fn with_embedding(mut self, embedding: RibbonEmbedding) -> Self {
        self.embedding = Some(embedding.canonical(&self.crossing_index, &self.region_index));
        self
    }

    /// Attaches designated connected states, given in canonical crossing order.
    pub fn with_designated(mut self, states: Vec<BitVec>, total: bool) -> Result<Self> {
        for s in &states {
            self.check_len(s)?;
        }
        let mut states = states;
        states.sort_by_key(BitVec::lex_key);
        states.dedup();
        self.designated = Some(DesignatedSet { states, total });
        Ok(self)
    }

    pub fn with_start_state(mut self, start: BitVec) -> Result<Self> {
        self.check_len(&start)?;
        self.start_state = Some(start);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn euler_characteristic(&self) -> Option<i64> {
        self.euler_characteristic
    }

    pub fn crossings(&self) -> &[String] {
        &self.crossings
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn embedding(&self) -> Option<&RibbonEmbedding> {
        self.embedding.as_ref()
    }

    pub fn designated(&self) -> Option<&DesignatedSet> {
        self.designated.as_ref()
    }

    pub fn start_state(&self) -> Option<&BitVec> {
        self.start_state.as_ref()
    }

    /// Number of crossings `n`.
    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    /// Number of regions `k`.
    pub fn k(&self) -> usize {
        self.regions.len()
    }

    pub fn crossing_index(&self, id: &str) -> Result<usize> {
        self.crossing_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCrossing(id.to_owned()))
    }

    pub fn region_index(&self, id: &str) -> Result<usize> {
        self.region_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownRegion(id.to_owned()))
    }

    pub fn region_id(&self, index: usize) -> &str {
        &self.regions[index].id
    }

    /// Move row of the region at `index`: bit `j` set iff crossing `j` is on
    /// its boundary.
    pub fn row(&self, index: usize) -> &BitVec {
        &self.rows[index]
    }

    pub fn check_len(&self, v: &BitVec) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Whether every region kind is known.
    pub fn kinds_known(&self) -> bool {
        self.regions.iter().all(|r| r.kind != RegionKind::Unknown)
    }

    /// Checks the structural invariants. Violations of severity
    /// [`Severity::Error`] make the board invalid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for c in &self.crossings {
            if !seen.insert(c) {
                out.push(Violation::error(
                    ViolationKind::DuplicateCrossing,
                    format!("crossing {c} is listed more than once"),
                    vec![c.clone()],
                ));
            }
        }
        let mut seen = HashSet::new();
        for r in &self.regions {
            if !seen.insert(&r.id) {
                out.push(Violation::error(
                    ViolationKind::DuplicateRegion,
                    format!("region {} is listed more than once", r.id),
                    vec![r.id.clone()],
                ));
            }
        }

        let mut uses = vec![0usize; self.n()];
        let mut vertex_uses = vec![0usize; self.n()];
        for r in &self.regions {
            if r.crossings.is_empty() {
                out.push(Violation::error(
                    ViolationKind::EmptyRegion,
                    format!("region {} has no incident crossings", r.id),
                    vec![r.id.clone()],
                ));
            }
            for c in &r.crossings {
                match self.crossing_index.get(c) {
                    Some(&j) => {
                        uses[j] += 1;
                        if r.kind == RegionKind::Vertex {
                            vertex_uses[j] += 1;
                        }
                    }
                    None => out.push(Violation::error(
                        ViolationKind::UnknownCrossing,
                        format!("region {} references unknown crossing {c}", r.id),
                        vec![r.id.clone(), c.clone()],
                    )),
                }
            }
        }
        for (j, c) in self.crossings.iter().enumerate() {
            if uses[j] == 0 {
                out.push(Violation::error(
                    ViolationKind::UnreferencedCrossing,
                    format!("crossing {c} is on no region"),
                    vec![c.clone()],
                ));
            }
            if uses[j] > 4 {
                out.push(Violation::error(
                    ViolationKind::CrossingOverused,
                    format!("crossing {c} is on {} regions", uses[j]),
                    vec![c.clone()],
                ));
            }
            if self.kinds_known() && vertex_uses[j] > 2 {
                out.push(Violation::error(
                    ViolationKind::VertexIncidence,
                    format!("crossing {c} touches {} vertex regions", vertex_uses[j]),
                    vec![c.clone()],
                ));
            }
        }

        if let Some(chi) = self.euler_characteristic {
            let (n, k) = (self.n() as i64, self.k() as i64);
            if k != n + chi {
                out.push(Violation::error(
                    ViolationKind::EulerRelation,
                    format!("{k} regions but {n} crossings with euler characteristic {chi}"),
                    vec![],
                ));
            }
        }

        if let Some(e) = &self.embedding {
            out.extend(self.check_embedding(e));
        }
        out
    }

    fn check_embedding(&self, e: &RibbonEmbedding) -> Vec<Violation> {
        let mut out = Vec::new();
        let graph = match RibbonGraph::compile(e, &self.crossings) {
            Ok(g) => g,
            Err(err) => {
                out.push(Violation::error(ViolationKind::Embedding, err.to_string(), vec![]));
                return out;
            }
        };
        for (vertex, rotation) in &e.rotations {
            let Some(&ri) = self.region_index.get(vertex) else {
                out.push(Violation::error(
                    ViolationKind::Embedding,
                    format!("rotation given for unknown region {vertex}"),
                    vec![vertex.clone()],
                ));
                continue;
            };
            let region = &self.regions[ri];
            if region.kind == RegionKind::Face {
                out.push(Violation::error(
                    ViolationKind::Embedding,
                    format!("rotation given for face region {vertex}"),
                    vec![vertex.clone()],
                ));
            }
            let mut around: Vec<&String> = rotation.iter().map(|HalfEdge(c, _)| c).collect();
            around.sort();
            let repeated: Vec<String> = around
                .windows(2)
                .filter(|w| w[0] == w[1])
                .map(|w| w[0].clone())
                .collect();
            around.dedup();
            let mut incident: Vec<&String> = region.crossings.iter().collect();
            incident.sort();
            if around != incident {
                out.push(Violation::error(
                    ViolationKind::Embedding,
                    format!("rotation at {vertex} does not match its incident crossings"),
                    vec![vertex.clone()],
                ));
            }
            for c in repeated {
                out.push(Violation {
                    kind: ViolationKind::RepeatedCorner,
                    severity: Severity::Notice,
                    message: format!(
                        "region {vertex} meets crossing {c} at two corners; its swap toggles {c} once"
                    ),
                    ids: vec![vertex.clone(), c],
                });
            }
        }
        for r in &self.regions {
            if r.kind == RegionKind::Vertex && !e.rotations.contains_key(&r.id) {
                out.push(Violation::error(
                    ViolationKind::Embedding,
                    format!("vertex region {} has no rotation", r.id),
                    vec![r.id.clone()],
                ));
            }
        }
        let faces = self.k() as i64 - graph.vertex_count() as i64;
        let walked = graph.face_count() as i64;
        if faces != walked {
            out.push(Violation::error(
                ViolationKind::Embedding,
                format!("embedding has {walked} faces but the board has {faces} non-vertex regions"),
                vec![],
            ));
        }
        if let Some(chi) = self.euler_characteristic {
            if graph.euler_characteristic() != chi {
                out.push(Violation::error(
                    ViolationKind::Embedding,
                    format!(
                        "embedding has euler characteristic {} but the board declares {chi}",
                        graph.euler_characteristic()
                    ),
                    vec![],
                ));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(|v| v.severity != Severity::Error)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let errors: Vec<Violation> = self
            .validate()
            .into_iter()
            .filter(|v| v.severity == Severity::Error)
            .collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errors))
        }
    }

    /// The `k × n` matrix whose row `i` is the move row of region `i`.
    pub fn move_matrix(&self) -> Result<BitMatrix> {
        self.ensure_valid()?;
        BitMatrix::new(self.n(), self.rows.clone())
    }

    /// Whether every crossing lies on four distinct regions, in which case
    /// indicator and parity incidence agree.
    pub fn four_regions_per_crossing(&self) -> bool {
        let mut uses = vec![0usize; self.n()];
        for row in &self.rows {
            for j in row.ones_indices() {
                uses[j] += 1;
            }
        }
        uses.iter().all(|&u| u == 4)
    }

    /// Relabels the board: crossing `j` becomes `crossing_names[j]`, region
    /// `i` becomes `region_names[i]`. States move along with their crossings.
    pub fn relabeled(&self, crossing_names: &[String], region_names: &[String]) -> Board {
        assert_eq!(crossing_names.len(), self.n());
        assert_eq!(region_names.len(), self.k());
        let cmap: HashMap<&str, &str> = self
            .crossings
            .iter()
            .map(String::as_str)
            .zip(crossing_names.iter().map(String::as_str))
            .collect();
        let rmap: HashMap<&str, &str> = self
            .regions
            .iter()
            .map(|r| r.id.as_str())
            .zip(region_names.iter().map(String::as_str))
            .collect();
        let regions = self
            .regions
            .iter()
            .map(|r| Region {
                id: rmap[r.id.as_str()].to_owned(),
                kind: r.kind,
                crossings: r.crossings.iter().map(|c| cmap[c.as_str()].to_owned()).collect(),
            })
            .collect();
        let mut b = Board::new(self.name.clone(), crossing_names.to_vec(), regions);
        b.euler_characteristic = self.euler_characteristic;
        let perm: Vec<usize> = crossing_names.iter().map(|c| b.crossing_index[c]).collect();
        if let Some(e) = &self.embedding {
            let e = e.relabeled(&cmap, &rmap);
            b = b.with_embedding(e);
        }
        if let Some(d) = &self.designated {
            let states = d.states.iter().map(|s| s.permute(&perm)).collect();
            b = b.with_designated(states, d.total).expect("lengths preserved");
        }
        if let Some(s) = &self.start_state {
            b.start_state = Some(s.permute(&perm));
        }
        b
    }

    pub fn to_document(&self) -> BoardDocument {
        BoardDocument {
            name: self.name.clone(),
            euler_characteristic: self.euler_characteristic,
            crossings: self.crossings.clone(),
            regions: self.regions.clone(),
            embedding: self.embedding.clone(),
            connected_states: self.designated.as_ref().map(|d| d.states.clone()),
            connected_states_total: self.designated.as_ref().map(|d| d.total).filter(|&t| t),
            start_state: self.start_state.clone(),
        }
    }

    pub fn from_document(doc: BoardDocument) -> Result<Board> {
        let doc_crossings = doc.crossings.clone();
        let mut board = Board::new(doc.name, doc.crossings, doc.regions);
        board.euler_characteristic = doc.euler_characteristic;
        // Bit strings in the document follow the document's crossing order.
        let perm: Vec<usize> = doc_crossings.iter().map(|c| board.crossing_index[c]).collect();
        let reorder = |field: &str, s: BitVec| -> Result<BitVec> {
            if s.len() != perm.len() {
                return Err(Error::Field {
                    field: field.to_owned(),
                    message: format!("bit string {s} has length {}, expected {}", s.len(), perm.len()),
                });
            }
            Ok(s.permute(&perm))
        };
        if let Some(e) = doc.embedding {
            board = board.with_embedding(e);
        }
        if let Some(states) = doc.connected_states {
            let states = states
                .into_iter()
                .map(|s| reorder("connected_states", s))
                .collect::<Result<Vec<_>>>()?;
            board = board.with_designated(states, doc.connected_states_total.unwrap_or(false))?;
        }
        if let Some(s) = doc.start_state {
            board.start_state = Some(reorder("start_state", s)?);
        }
        Ok(board)
    }
}

/// The on-disk JSON shape of a board.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    pub crossings: Vec<String>,
    pub regions: Vec<Region>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<RibbonEmbedding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected_states: Option<Vec<BitVec>>,
    /// Declares `connected_states` to be the complete list of connected states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected_states_total: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_state: Option<BitVec>,
}

impl Serialize for Board {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_document().serialize(serializer)
    }
}

pub fn parse_board(text: &str) -> Result<Board> {
    let doc: BoardDocument = serde_json::from_str(text)?;
    Board::from_document(doc)
}

pub fn write_board(board: &Board) -> String {
    let mut s = serde_json::to_string_pretty(&board.to_document()).expect("board serializes");
    s.push('\n');
    s
}
