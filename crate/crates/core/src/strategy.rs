//! Pairing strategies for player C.
//!
//! C plays an optional prelude, then answers each D move inside a pair of
//! regions. An equal pair copies D's choice, an unequal pair inverts it. Since
//! the final state does not depend on move order, a strategy is verified by
//! enumerating one free bit per pair.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::algebra::BitVec;
use crate::board::Board;
use crate::connectivity::{enumerate_with, Connectivity};
use crate::engine::Player;
use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::solver::MAX_SOLVER_REGIONS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CMoves {
    First,
    Second,
}

impl CMoves {
    /// The player who opens the game.
    pub fn first_player(self) -> Player {
        match self {
            CMoves::First => Player::C,
            CMoves::Second => Player::D,
        }
    }
}

impl fmt::Display for CMoves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CMoves::First => "first",
            CMoves::Second => "second",
        })
    }
}

impl FromStr for CMoves {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(CMoves::First),
            "second" => Ok(CMoves::Second),
            _ => Err(Error::Strategy(format!("expected first or second, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equal,
    Unequal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub a: String,
    pub b: String,
    pub relation: Relation,
}

impl Pair {
    pub fn new(a: impl Into<String>, b: impl Into<String>, relation: Relation) -> Self {
        Pair {
            a: a.into(),
            b: b.into(),
            relation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingStrategy {
    pub c_moves: CMoves,
    pub prelude: Vec<(String, bool)>,
    pub pairs: Vec<Pair>,
}

impl fmt::Display for PairingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c_moves)?;
        for (r, e) in &self.prelude {
            write!(f, "; prelude {r}:{}", u8::from(*e))?;
        }
        for p in &self.pairs {
            let op = match p.relation {
                Relation::Equal => "==",
                Relation::Unequal => "!=",
            };
            write!(f, "; {}{op}{}", p.a, p.b)?;
        }
        Ok(())
    }
}

impl FromStr for PairingStrategy {
    type Err = Error;

    /// Parses `first|second; prelude rX:0|1; a==b; c!=d`.
    fn from_str(s: &str) -> Result<Self> {
        let mut items = s.split(';').map(str::trim).filter(|t| !t.is_empty());
        let c_moves: CMoves = items
            .next()
            .ok_or_else(|| Error::Strategy("empty strategy".into()))?
            .parse()?;
        let mut prelude = Vec::new();
        let mut pairs = Vec::new();
        for item in items {
            if let Some(rest) = item.strip_prefix("prelude") {
                let (r, e) = rest
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| Error::Strategy(format!("prelude needs region:bit, got {item:?}")))?;
                let e = match e.trim() {
                    "0" => false,
                    "1" => true,
                    other => return Err(Error::Strategy(format!("prelude bit must be 0 or 1, got {other:?}"))),
                };
                prelude.push((r.trim().to_string(), e));
            } else if let Some((a, b)) = item.split_once("==") {
                pairs.push(Pair::new(a.trim(), b.trim(), Relation::Equal));
            } else if let Some((a, b)) = item.split_once("!=") {
                pairs.push(Pair::new(a.trim(), b.trim(), Relation::Unequal));
            } else {
                return Err(Error::Strategy(format!("cannot parse {item:?}")));
            }
        }
        for (a, b) in pairs.iter().map(|p| (&p.a, &p.b)).chain(prelude.iter().map(|(r, _)| (r, r))) {
            if a.is_empty() || b.is_empty() {
                return Err(Error::Strategy(format!("missing region name in {s:?}")));
            }
        }
        Ok(PairingStrategy {
            c_moves,
            prelude,
            pairs,
        })
    }
}

/// A strategy with region ids replaced by indices and checked against a board.
#[derive(Clone, Debug)]
struct Resolved {
    prelude: Vec<(usize, bool)>,
    pairs: Vec<(usize, usize, Relation)>,
}

impl PairingStrategy {
    fn resolve(&self, board: &Board) -> Result<Resolved> {
        let mut seen = vec![false; board.k()];
        let mut claim = |id: &str| -> Result<usize> {
            let i = board
                .region_index(id)
                .map_err(|_| Error::Strategy(format!("unknown region {id:?}")))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Strategy(format!("region {id} is used twice")));
            }
            Ok(i)
        };
        let prelude = self
            .prelude
            .iter()
            .map(|(r, e)| Ok((claim(r)?, *e)))
            .collect::<Result<Vec<_>>>()?;
        let pairs = self
            .pairs
            .iter()
            .map(|p| Ok((claim(&p.a)?, claim(&p.b)?, p.relation)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Strategy(format!(
                "region {} is neither in the prelude nor in a pair",
                board.region_id(missing)
            )));
        }
        let expected_prelude = match self.c_moves {
            CMoves::First => 1,
            CMoves::Second => 0,
        };
        if prelude.len() != expected_prelude {
            return Err(Error::Strategy(format!(
                "a strategy where C moves {} needs exactly {expected_prelude} prelude moves, found {}",
                self.c_moves,
                prelude.len()
            )));
        }
        Ok(Resolved { prelude, pairs })
    }

    /// `start` plus the prelude toggles.
    fn base(&self, board: &Board, r: &Resolved, start: &BitVec) -> Result<BitVec> {
        let mut v = start.clone();
        for &(i, e) in &r.prelude {
            if e {
                v.add_assign(board.row(i))?;
            }
        }
        Ok(v)
    }
}

/// The final state when D's free bit in pair `i` is bit `i` of `choices`.
fn final_state(board: &Board, r: &Resolved, base: &BitVec, choices: u64) -> BitVec {
    let mut v = base.clone();
    for (i, &(a, b, rel)) in r.pairs.iter().enumerate() {
        let bit = choices >> i & 1 == 1;
        let rows: &[usize] = match (rel, bit) {
            (Relation::Equal, false) => &[],
            (Relation::Equal, true) => &[a, b],
            (Relation::Unequal, false) => &[a],
            (Relation::Unequal, true) => &[b],
        };
        for &row in rows {
            v.add_assign(board.row(row)).expect("row length matches");
        }
    }
    v
}

/// D's choice in each pair: `true` means the pair's second option (for an
/// equal pair, both regions swapped; for an unequal pair, `b` swapped).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub choices: Vec<bool>,
    pub final_state: BitVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub wins: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyOutcome {
    pub choices: Vec<bool>,
    pub final_state: BitVec,
    pub connected: Option<bool>,
}

const MAX_VERIFY_PAIRS: usize = 30;

fn unpack(choices: u64, pairs: usize) -> Vec<bool> {
    (0..pairs).map(|i| choices >> i & 1 == 1).collect()
}

/// Every final state the strategy can reach, one per D choice vector.
pub fn outcomes(board: &Board, start: &BitVec, p: &PairingStrategy) -> Result<Vec<StrategyOutcome>> {
    board.check_len(start)?;
    let conn = Connectivity::for_board(board)?;
    let r = p.resolve(board)?;
    let base = p.base(board, &r, start)?;
    let np = r.pairs.len();
    if np > MAX_VERIFY_PAIRS {
        return Err(Error::Capacity(format!("{np} pairs is too many to enumerate")));
    }
    (0..1u64 << np)
        .map(|m| {
            let v = final_state(board, &r, &base, m);
            Ok(StrategyOutcome {
                choices: unpack(m, np),
                connected: conn.is_connected(&v)?,
                final_state: v,
            })
        })
        .collect()
}

pub fn verify(board: &Board, start: &BitVec, p: &PairingStrategy) -> Result<Verdict> {
    verify_with(board, start, p, Parallelism::default())
}

pub fn verify_with(board: &Board, start: &BitVec, p: &PairingStrategy, mode: Parallelism) -> Result<Verdict> {
    board.check_len(start)?;
    board.ensure_valid()?;
    let conn = Connectivity::for_board(board)?;
    let r = p.resolve(board)?;
    let base = p.base(board, &r, start)?;
    let np = r.pairs.len();
    if np > MAX_VERIFY_PAIRS {
        return Err(Error::Capacity(format!("{np} pairs is too many to enumerate")));
    }
    let found = par::find_map_first_range(mode, 0..1u64 << np, |m| {
        let v = final_state(board, &r, &base, m);
        match conn.is_connected(&v) {
            Ok(Some(true)) => None,
            Ok(Some(false)) => Some(Ok((m, v))),
            Ok(None) => Some(Err(Error::Configuration(format!(
                "connectivity of reachable final state {v} is unknown"
            )))),
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        None => Ok(Verdict {
            wins: true,
            counterexample: None,
        }),
        Some(Ok((m, v))) => Ok(Verdict {
            wins: false,
            counterexample: Some(Counterexample {
                choices: unpack(m, np),
                final_state: v,
            }),
        }),
        Some(Err(e)) => Err(e),
    }
}

/// `row_a + row_b`, the toggle of an equal pair when both regions swap.
pub fn pair_toggle(board: &Board, a: &str, b: &str) -> Result<BitVec> {
    let (i, j) = (board.region_index(a)?, board.region_index(b)?);
    if i == j {
        return Err(Error::Strategy(format!("region {a} cannot be paired with itself")));
    }
    board.row(i).add(board.row(j))
}

/// The set of states a search may end in: connected states, or the
/// designated states when the backend is a designated set.
fn target_states(conn: &Connectivity, mode: Parallelism) -> Result<FxHashSet<u64>> {
    let states = match conn.designated_states() {
        Some(s) => s.iter().cloned().collect(),
        None => enumerate_with(conn, mode)?,
    };
    Ok(states.iter().map(|v| v.to_mask().expect("n <= 64")).collect())
}

struct SearchCtx<'a> {
    rows: &'a [u64],
    all_equal: bool,
}

impl SearchCtx<'_> {
    /// Finds a matching of `rest` (sorted) so that some translate of the
    /// reachable toggle set lands inside `good`. `good` holds the states `x`
    /// whose whole orbit under the toggles chosen so far is acceptable.
    fn matching(
        &self,
        rest: &[usize],
        good: &FxHashSet<u64>,
        base: u64,
        chosen: &mut Vec<(usize, usize)>,
    ) -> Option<Vec<Relation>> {
        if rest.is_empty() {
            return self.relations(chosen, good, base);
        }
        let r = rest[0];
        for (pos, &s) in rest.iter().enumerate().skip(1) {
            let d = self.rows[r] ^ self.rows[s];
            let next: FxHashSet<u64> = good.iter().copied().filter(|x| good.contains(&(x ^ d))).collect();
            if next.is_empty() || (self.all_equal && !next.contains(&base)) {
                continue;
            }
            let remaining: Vec<usize> = rest[1..]
                .iter()
                .enumerate()
                .filter(|&(i, _)| i + 1 != pos)
                .map(|(_, &x)| x)
                .collect();
            chosen.push((r, s));
            if let Some(rel) = self.matching(&remaining, &next, base, chosen) {
                return Some(rel);
            }
            chosen.pop();
        }
        None
    }

    /// Relation assignment (all-equal first) whose offset puts `base` in `good`.
    fn relations(&self, chosen: &[(usize, usize)], good: &FxHashSet<u64>, base: u64) -> Option<Vec<Relation>> {
        let limit = if self.all_equal { 1 } else { 1u64 << chosen.len() };
        (0..limit).find_map(|m| {
            let offset = chosen
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .fold(0u64, |acc, (_, &(a, _))| acc ^ self.rows[a]);
            good.contains(&(base ^ offset)).then(|| {
                (0..chosen.len())
                    .map(|i| {
                        if m >> i & 1 == 1 {
                            Relation::Unequal
                        } else {
                            Relation::Equal
                        }
                    })
                    .collect()
            })
        })
    }
}

/// Searches all prelude choices, perfect matchings of the other regions, and
/// relation assignments for a winning pairing strategy. All-equal pairings are
/// tried before mixed ones.
pub fn search(board: &Board, start: &BitVec, c_moves: CMoves) -> Result<Option<PairingStrategy>> {
    search_with(board, start, c_moves, Parallelism::default())
}

pub fn search_with(
    board: &Board,
    start: &BitVec,
    c_moves: CMoves,
    mode: Parallelism,
) -> Result<Option<PairingStrategy>> {
    board.check_len(start)?;
    board.ensure_valid()?;
    let k = board.k();
    if k > MAX_SOLVER_REGIONS {
        return Err(Error::Capacity(format!(
            "{k} regions exceeds the search limit of {MAX_SOLVER_REGIONS}"
        )));
    }
    let conn = Connectivity::for_board(board)?;
    let good = target_states(&conn, mode)?;
    let rows: Vec<u64> = (0..k).map(|r| board.row(r).to_mask().expect("n <= 64")).collect();
    let s0 = start.to_mask().expect("n <= 64");

    let preludes: Vec<Option<(usize, bool)>> = match c_moves {
        CMoves::Second => vec![None],
        CMoves::First => (0..k).flat_map(|r| [Some((r, false)), Some((r, true))]).collect(),
    };
    if !(k - usize::from(c_moves == CMoves::First)).is_multiple_of(2) {
        return Ok(None);
    }

    for all_equal in [true, false] {
        let ctx = SearchCtx { rows: &rows, all_equal };
        let found = par::find_map_first_slice(mode, &preludes, |pre| {
            let base = match pre {
                Some((r, true)) => s0 ^ rows[*r],
                _ => s0,
            };
            let rest: Vec<usize> = (0..k).filter(|&i| pre.map(|(r, _)| r) != Some(i)).collect();
            let mut chosen = Vec::new();
            ctx.matching(&rest, &good, base, &mut chosen)
                .map(|rel| (*pre, chosen, rel))
        });
        if let Some((pre, chosen, rel)) = found {
            let strategy = PairingStrategy {
                c_moves,
                prelude: pre
                    .map(|(r, e)| vec![(board.region_id(r).to_string(), e)])
                    .unwrap_or_default(),
                pairs: chosen
                    .iter()
                    .zip(rel)
                    .map(|(&(a, b), relation)| Pair::new(board.region_id(a), board.region_id(b), relation))
                    .collect(),
            };
            debug_assert!(verify_with(board, start, &strategy, Parallelism::Sequential)
                .map(|v| v.wins)
                .unwrap_or(true));
            return Ok(Some(strategy));
        }
    }
    Ok(None)
}
