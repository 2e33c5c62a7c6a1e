//! The boards studied in the literature on this game, with their start
//! states and known pairing strategies.
//!
//! Matrices, start vectors and strategies that are printed in the source are
//! marked [`Source::Published`]. Vertex identifications, rotations and
//! labelings that had to be rebuilt from figures are marked
//! [`Source::Reconstructed`]; the integration tests check them against every
//! published datum.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::Serialize;

use crate::algebra::BitVec;
use crate::board::{Board, Region, RegionKind};
use crate::error::{Error, Result};
use crate::ribbon::{HalfEdge, RibbonEmbedding};
use crate::strategy::PairingStrategy;

pub const LADDER_MIN: usize = 2;
pub const LADDER_MAX: usize = 8;

/// Names of the shipped board files, in catalog order.
pub const NAMES: [&str; 9] = [
    "twist5",
    "figure8",
    "trefoil",
    "borromean",
    "ladder-2",
    "ladder-3",
    "ladder-4",
    "ladder-5",
    "two-klein",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Published,
    Reconstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub field: String,
    pub source: Source,
    pub note: String,
}

/// A strategy together with the start states it is claimed to win from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedStrategy {
    pub label: String,
    pub strategy: PairingStrategy,
    pub starts: Vec<BitVec>,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub board: Board,
    pub starts: Vec<BitVec>,
    pub strategies: Vec<NamedStrategy>,
    pub provenance: Vec<Provenance>,
}

fn bits(s: &str) -> BitVec {
    s.parse().expect("catalog bit string")
}

fn bits_all(list: &[&str]) -> Vec<BitVec> {
    list.iter().map(|s| bits(s)).collect()
}

fn strat(text: &str) -> PairingStrategy {
    text.parse().expect("catalog strategy")
}

fn note(field: &str, source: Source, note: &str) -> Provenance {
    Provenance {
        field: field.into(),
        source,
        note: note.into(),
    }
}

fn named(label: &str, text: &str, starts: &[&str], source: Source) -> NamedStrategy {
    NamedStrategy {
        label: label.into(),
        strategy: strat(text),
        starts: bits_all(starts),
        source,
    }
}

/// Builds a board whose vertex regions carry a rotation system.
///
/// `vertices` gives each vertex region's rotation as crossing ids;
/// `edges` gives `(crossing, end-0 vertex, end-1 vertex)`. For a loop the
/// first occurrence in the rotation is end 0.
struct Embedded<'a> {
    name: &'a str,
    crossings: Vec<String>,
    vertices: Vec<(String, Vec<String>)>,
    faces: Vec<(String, Vec<String>)>,
    edges: Vec<(String, String, String)>,
    twisted: Vec<String>,
    euler: i64,
}

impl Embedded<'_> {
    fn build(self) -> Board {
        let endpoints: IndexMap<String, [String; 2]> = self
            .edges
            .iter()
            .map(|(c, u, v)| (c.clone(), [u.clone(), v.clone()]))
            .collect();
        let mut rotations = IndexMap::new();
        for (v, rot) in &self.vertices {
            let mut seen: HashMap<&str, u8> = HashMap::new();
            let halves = rot
                .iter()
                .map(|c| {
                    let [a, b] = &endpoints[c];
                    let end = if a == b {
                        let count = seen.entry(c).or_insert(0);
                        *count += 1;
                        *count - 1
                    } else {
                        u8::from(b == v)
                    };
                    HalfEdge::new(c.clone(), end)
                })
                .collect();
            rotations.insert(v.clone(), halves);
        }
        let mut regions: Vec<Region> = Vec::new();
        for (v, rot) in &self.vertices {
            let cs: Vec<&str> = rot.iter().map(String::as_str).collect();
            regions.push(Region::new(v.clone(), RegionKind::Vertex, &cs));
        }
        for (f, cs) in &self.faces {
            let cs: Vec<&str> = cs.iter().map(String::as_str).collect();
            regions.push(Region::new(f.clone(), RegionKind::Face, &cs));
        }
        Board::new(self.name, self.crossings, regions)
            .with_euler_characteristic(self.euler)
            .with_embedding(RibbonEmbedding {
                rotations,
                endpoints,
                twisted: self.twisted,
            })
    }
}

fn strings(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn crossing_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("c{i}")).collect()
}

fn planar(
    name: &str,
    n: usize,
    vertices: &[(&str, &[&str])],
    faces: &[(&str, &[&str])],
    edges: &[(&str, &str, &str)],
) -> Board {
    Embedded {
        name,
        crossings: crossing_names(n),
        vertices: vertices.iter().map(|(v, r)| (v.to_string(), strings(r))).collect(),
        faces: faces.iter().map(|(f, c)| (f.to_string(), strings(c))).collect(),
        edges: edges
            .iter()
            .map(|(c, u, v)| (c.to_string(), u.to_string(), v.to_string()))
            .collect(),
        twisted: Vec::new(),
        euler: 2,
    }
    .build()
}

/// The 5-crossing twist knot shadow.
pub fn twist5() -> CatalogEntry {
    let board = planar(
        "twist5",
        5,
        &[
            ("r2", &["c1", "c2"]),
            ("r3", &["c1", "c4", "c3"]),
            ("r6", &["c5", "c2"]),
            ("r7", &["c3", "c4", "c5"]),
        ],
        &[
            ("r1", &["c1", "c2", "c4", "c5"]),
            ("r4", &["c1", "c2", "c3", "c5"]),
            ("r5", &["c3", "c4"]),
        ],
        &[
            ("c1", "r2", "r3"),
            ("c2", "r2", "r6"),
            ("c3", "r3", "r7"),
            ("c4", "r3", "r7"),
            ("c5", "r6", "r7"),
        ],
    )
    .with_start_state(bits("11001"))
    .expect("start length");
    let group_a = ["01011", "11010", "01101", "11100"];
    let group_b = ["10101", "10011"];
    let group_c = ["11001"];
    CatalogEntry {
        name: "twist5".into(),
        board,
        starts: bits_all(&["11001", "01011", "11010", "01101", "11100", "10101", "10011"]),
        strategies: vec![
            named("a", "first; prelude r5:0; r1==r4; r2==r6; r3==r7", &group_a, Source::Published),
            named("b", "first; prelude r5:0; r1==r4; r2!=r6; r3==r7", &group_b, Source::Published),
            named("c", "first; prelude r5:0; r1!=r4; r2!=r6; r3==r7", &group_c, Source::Published),
        ],
        provenance: vec![
            note("move matrix", Source::Published, "rows r1..r7 over c1..c5"),
            note("start state", Source::Published, "V0 = 11001"),
            note(
                "vertex regions",
                Source::Reconstructed,
                "r2, r3, r6, r7: the only four rows whose columns each sum to 2",
            ),
            note("embedding", Source::Reconstructed, "planar drawing of the checkerboard graph"),
            note("strategies", Source::Published, "three pairings with prelude r5 kept"),
            note(
                "strategy groups",
                Source::Reconstructed,
                "partition of the seven connected starts by winning pairing",
            ),
        ],
    }
}

/// The figure-eight knot shadow.
pub fn figure8() -> CatalogEntry {
    let board = planar(
        "figure8",
        4,
        &[
            ("r1", &["c1", "c2"]),
            ("r2", &["c3", "c1", "c2", "c4"]),
            ("r3", &["c3", "c4"]),
        ],
        &[
            ("r4", &["c1", "c2"]),
            ("r5", &["c3", "c4"]),
            ("r6", &["c1", "c2", "c3", "c4"]),
        ],
        &[
            ("c1", "r1", "r2"),
            ("c2", "r1", "r2"),
            ("c3", "r2", "r3"),
            ("c4", "r2", "r3"),
        ],
    )
    .with_start_state(bits("1010"))
    .expect("start length");
    let starts = ["1010", "1001", "0110", "0101"];
    CatalogEntry {
        name: "figure8".into(),
        board,
        starts: bits_all(&starts),
        strategies: vec![named(
            "mimic",
            "second; r1==r2; r3==r6; r4==r5",
            &starts,
            Source::Published,
        )],
        provenance: vec![
            note(
                "checkerboard graph",
                Source::Reconstructed,
                "vertices a, b, c with doubled edges a-b and b-c",
            ),
            note("strategy", Source::Published, "pairs r1/r2, r3/r6, r4/r5, all equal"),
        ],
    }
}

/// The trefoil shadow: a dipole with three parallel edges.
pub fn trefoil() -> CatalogEntry {
    let board = planar(
        "trefoil",
        3,
        &[("r1", &["c2", "c1", "c3"]), ("r2", &["c1", "c2", "c3"])],
        &[("r3", &["c1", "c2"]), ("r4", &["c1", "c3"]), ("r5", &["c2", "c3"])],
        &[("c1", "r1", "r2"), ("c2", "r1", "r2"), ("c3", "r1", "r2")],
    )
    .with_start_state(bits("100"))
    .expect("start length");
    CatalogEntry {
        name: "trefoil".into(),
        board,
        starts: bits_all(&["100", "010", "001"]),
        strategies: vec![
            named("c1 on", "first; prelude r5:0; r1==r2; r3!=r4", &["100"], Source::Published),
            named("c2 on", "first; prelude r4:0; r1==r2; r3!=r5", &["010"], Source::Reconstructed),
            named("c3 on", "first; prelude r3:0; r1==r2; r4!=r5", &["001"], Source::Reconstructed),
        ],
        provenance: vec![
            note("checkerboard graph", Source::Reconstructed, "dipole with three bigon faces"),
            note(
                "prelude region",
                Source::Reconstructed,
                "the face not bordering the on-edge, kept as-is",
            ),
            note("pairs", Source::Published, "vertices equal, remaining faces unequal"),
        ],
    }
}

/// The Borromean rings shadow, whose checkerboard graph is K4.
///
/// Crossings c1..c6 are the edges 12, 13, 14, 23, 24, 34; vertex 1 sits
/// inside the outer face 234.
pub fn borromean() -> CatalogEntry {
    let board = planar(
        "borromean",
        6,
        &[
            ("r1", &["c1", "c2", "c3"]),
            ("r7", &["c4", "c1", "c5"]),
            ("r3", &["c6", "c2", "c4"]),
            ("r5", &["c5", "c3", "c6"]),
        ],
        &[
            ("r2", &["c4", "c5", "c6"]),
            ("r4", &["c1", "c3", "c5"]),
            ("r6", &["c1", "c2", "c4"]),
            ("r8", &["c2", "c3", "c6"]),
        ],
        &[
            ("c1", "r1", "r7"),
            ("c2", "r1", "r3"),
            ("c3", "r1", "r5"),
            ("c4", "r7", "r3"),
            ("c5", "r7", "r5"),
            ("c6", "r3", "r5"),
        ],
    )
    .with_start_state(bits("100101"))
    .expect("start length");
    let paths = [
        "100101", "001101", "001110", "010011", "010110", "011010", "011100", "100011", "101001", "101100",
        "110001", "110010",
    ];
    let stars = ["111000", "100110", "010101", "001011"];
    let mut starts = bits_all(&paths);
    starts.extend(bits_all(&stars));
    CatalogEntry {
        name: "borromean".into(),
        board,
        starts,
        strategies: vec![
            named("opposite", "second; r1==r2; r3==r4; r5==r6; r7==r8", &paths, Source::Published),
            named("star trek", "second; r1==r7; r2==r8; r3==r5; r4==r6", &stars, Source::Published),
        ],
        provenance: vec![
            note("checkerboard graph", Source::Published, "the complete graph K4"),
            note(
                "region labels",
                Source::Reconstructed,
                "odd regions are vertices, each paired with its opposite face",
            ),
            note("strategies", Source::Published, "opposite-face pairing and star trek pairing"),
        ],
    }
}

/// The n-step ladder on the Klein bottle.
///
/// Heights `j = 1..2n` hold crossings `c(2j-1)` and `c(2j)`. Odd heights are
/// rails: height `2m+1` joins level `m` to `m+1`, and height `2n-1` holds the
/// twisted rails from the top level back to level 0. Even heights are steps:
/// height `2m` is level `m`, and height `2n` is level 0. The even crossing of
/// a step height is the direct step; the odd one wraps around the side.
/// Regions `r(2i-1)`, `r(2i)` are the two vertices of a step height, or the
/// inner and outer faces of a rail height.
pub fn ladder(n: usize) -> Result<CatalogEntry> {
    if !(LADDER_MIN..=LADDER_MAX).contains(&n) {
        return Err(Error::Capacity(format!(
            "ladder size {n} is outside {LADDER_MIN}..={LADDER_MAX}"
        )));
    }
    let c = |i: usize| format!("c{i}");
    let r = |i: usize| format!("r{i}");
    let step_height = |m: usize| if m == 0 { 2 * n } else { 2 * m };
    // Direct and wrapping steps of level m.
    let step0 = |m: usize| c(2 * step_height(m));
    let step1 = |m: usize| c(2 * step_height(m) - 1);
    // Rails above level m: (left end, right end) crossings.
    let rails_up = |m: usize| (c(2 * (2 * m + 1)), c(2 * (2 * m + 1) - 1));
    let vertex = |m: usize, right: bool| r(2 * step_height(m) - 1 + usize::from(right));

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for m in 0..n {
        let below = (m + n - 1) % n;
        let (up_l, up_r) = rails_up(m);
        let (down_l, down_r) = rails_up(below);
        // Down rails of level 0 arrive through the reversing identification,
        // so the left vertex meets the top level's right rail and vice versa.
        let (down_at_l, down_at_r) = if m == 0 { (down_r, down_l) } else { (down_l, down_r) };
        vertices.push((vertex(m, false), vec![up_l.clone(), step0(m), down_at_l, step1(m)]));
        vertices.push((vertex(m, true), vec![up_r.clone(), step1(m), down_at_r, step0(m)]));
        edges.push((step0(m), vertex(m, false), vertex(m, true)));
        edges.push((step1(m), vertex(m, false), vertex(m, true)));
        if m + 1 < n {
            edges.push((up_l, vertex(m, false), vertex(m + 1, false)));
            edges.push((up_r, vertex(m, true), vertex(m + 1, true)));
        } else {
            edges.push((up_l, vertex(m, false), vertex(0, true)));
            edges.push((up_r, vertex(m, true), vertex(0, false)));
        }
    }
    let mut faces = Vec::new();
    for m in 0..n {
        let above = (m + 1) % n;
        let (rl, rr) = rails_up(m);
        let h = 2 * m + 1;
        faces.push((r(2 * h - 1), vec![step0(m), step0(above), rl.clone(), rr.clone()]));
        faces.push((r(2 * h), vec![step1(m), step1(above), rl, rr]));
    }
    let (top_l, top_r) = rails_up(n - 1);
    let name = format!("ladder-{n}");
    let start: BitVec = BitVec::from_bools((1..=4 * n).map(|i| i % 2 == 0));
    let board = Embedded {
        name: &name,
        crossings: crossing_names(4 * n),
        vertices,
        faces,
        edges,
        twisted: vec![top_r, top_l],
        euler: 0,
    }
    .build()
    .with_start_state(start.clone())
    .expect("start length");
    let pairs: Vec<String> = (1..=2 * n).map(|i| format!("r{}==r{}", 2 * i - 1, 2 * i)).collect();
    let strategy = strat(&format!("second; {}", pairs.join("; ")));
    Ok(CatalogEntry {
        name,
        board,
        starts: vec![start.clone()],
        strategies: vec![NamedStrategy {
            label: "mimic".into(),
            strategy,
            starts: vec![start],
            source: Source::Published,
        }],
        provenance: vec![
            note("surface", Source::Published, "Klein bottle, square with one reversed side pair"),
            note(
                "labeling",
                Source::Reconstructed,
                "heights, region pairs and rotations chosen to satisfy the pair toggle law",
            ),
            note("strategy", Source::Published, "pairs r(2i-1), r(2i), all equal"),
        ],
    })
}

/// The board on the connected sum of two Klein bottles, known only by its
/// move matrix and four connected states.
pub fn two_klein() -> CatalogEntry {
    let rows = [
        "1110001010",
        "0110010110",
        "0001101101",
        "1001110001",
        "0010010111",
        "1001101001",
        "1101110000",
        "0110001110",
    ];
    let crossings = crossing_names(10);
    let regions = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let cs: Vec<&str> = row
                .chars()
                .enumerate()
                .filter(|&(_, b)| b == '1')
                .map(|(j, _)| crossings[j].as_str())
                .collect();
            Region::new(format!("r{}", i + 1), RegionKind::Unknown, &cs)
        })
        .collect();
    let starts = ["0100110011", "1011001100", "0100101011", "1011010100"];
    let board = Board::new("two-klein", crossings.clone(), regions)
        .with_euler_characteristic(-2)
        .with_designated(bits_all(&starts), false)
        .expect("designated lengths")
        .with_start_state(bits(starts[0]))
        .expect("start length");
    CatalogEntry {
        name: "two-klein".into(),
        board,
        starts: bits_all(&starts),
        strategies: vec![named(
            "mimic",
            "second; r1==r3; r2==r6; r4==r8; r5==r7",
            &starts,
            Source::Published,
        )],
        provenance: vec![
            note("move matrix", Source::Published, "8 regions by 10 crossings"),
            note("connected states", Source::Published, "the four listed start vectors"),
            note("euler characteristic", Source::Reconstructed, "k = n + chi gives -2"),
            note("strategy", Source::Published, "pairs r1/r3, r2/r6, r4/r8, r5/r7, all equal"),
        ],
    }
}

/// The entry for a shipped board name such as `ladder-3`.
pub fn by_name(name: &str) -> Result<CatalogEntry> {
    match name {
        "twist5" => Ok(twist5()),
        "figure8" => Ok(figure8()),
        "trefoil" => Ok(trefoil()),
        "borromean" => Ok(borromean()),
        "two-klein" => Ok(two_klein()),
        _ => match name.strip_prefix("ladder-").and_then(|s| s.parse().ok()) {
            Some(n) => ladder(n),
            None => Err(Error::Field {
                field: "name".into(),
                message: format!("no catalog board named {name:?}"),
            }),
        },
    }
}

/// Every shipped board, in [`NAMES`] order.
pub fn all() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|name| by_name(name).expect("catalog name"))
        .collect()
}
