//! The randomized entropy-compression colouring loop and its record.
//!
//! Each step colours the least-index uncoloured vertex with a uniformly drawn
//! entry of its list. If that creates a repetitively coloured facial path,
//! the half of the path holding the new vertex is uncoloured and the step is
//! logged as `(h, q, o)`; otherwise the step is logged as empty.
//!
//! The record together with the final partial colouring determines every
//! draw of the run. [`reconstruct`] recovers the draws by replaying the
//! uncoloured sets left to right and then rolling the colouring back right
//! to left.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{FacialPath, PlaneGraph, Vertex};
use crate::repetition::find_repetition_through;
use crate::Colour;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid list assignment: {0}")]
    InvalidLists(String),
    #[error("list assignment covers {lists} vertices, graph has {n}")]
    ListMismatch { lists: usize, n: usize },
    #[error("path is not in the canonical enumeration for vertex {0}")]
    PathNotCanonical(Vertex),
    #[error("orientation index {o} out of range (only {available} candidates)")]
    IndexOutOfRange { o: usize, available: usize },
    #[error("record is inconsistent with the colouring: {0}")]
    Inconsistent(String),
}

/// Ordered colour lists. Only the first `l` entries of each list are used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ListsJson", into = "ListsJson")]
pub struct ListAssignment {
    lists: Vec<Vec<Colour>>,
    l: usize,
}

#[derive(Serialize, Deserialize)]
struct ListsJson {
    l: usize,
    lists: Vec<Vec<Colour>>,
}

impl TryFrom<ListsJson> for ListAssignment {
    type Error = EngineError;

    fn try_from(j: ListsJson) -> Result<Self, Self::Error> {
        ListAssignment::new(j.lists, j.l)
    }
}

impl From<ListAssignment> for ListsJson {
    fn from(a: ListAssignment) -> Self {
        ListsJson {
            l: a.l,
            lists: a.lists,
        }
    }
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<Colour>>, l: usize) -> Result<Self, EngineError> {
        if l == 0 && !lists.is_empty() {
            return Err(EngineError::InvalidLists("l must be at least 1".into()));
        }
        for (v, list) in lists.iter().enumerate() {
            if list.len() < l {
                return Err(EngineError::InvalidLists(format!(
                    "list of vertex {v} has {} colours, need {l}",
                    list.len()
                )));
            }
            if list.contains(&0) {
                return Err(EngineError::InvalidLists(format!(
                    "list of vertex {v} contains 0"
                )));
            }
            let distinct: BTreeSet<_> = list.iter().collect();
            if distinct.len() != list.len() {
                return Err(EngineError::InvalidLists(format!(
                    "list of vertex {v} repeats a colour"
                )));
            }
        }
        Ok(ListAssignment { lists, l })
    }

    /// Declares `l` as the shortest list length.
    pub fn from_lists(lists: Vec<Vec<Colour>>) -> Result<Self, EngineError> {
        let l = lists.iter().map(Vec::len).min().unwrap_or(1);
        Self::new(lists, l)
    }

    /// Every vertex gets `1, 2, .., l`.
    pub fn identical(n: usize, l: usize) -> Self {
        ListAssignment {
            lists: vec![(1..=l as Colour).collect(); n],
            l,
        }
    }

    /// Independent uniformly random `l`-subsets of `1..=universe`, in random order.
    pub fn random<R: Rng + ?Sized>(n: usize, l: usize, universe: usize, rng: &mut R) -> Self {
        assert!(universe >= l, "universe smaller than list size");
        let lists = (0..n)
            .map(|_| {
                sample(rng, universe, l)
                    .into_iter()
                    .map(|i| i as Colour + 1)
                    .collect()
            })
            .collect();
        ListAssignment { lists, l }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// The usable part of the list of `v`.
    pub fn list(&self, v: Vertex) -> &[Colour] {
        &self.lists[v][..self.l]
    }

    /// Copy with shorter usable lists (the first `l` entries of each list).
    pub fn truncated(&self, l: usize) -> Self {
        assert!(l <= self.l);
        ListAssignment {
            lists: self.lists.iter().map(|x| x[..l].to_vec()).collect(),
            l,
        }
    }
}

/// One logged step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecordEntry {
    Empty,
    Rep { h: usize, q: usize, o: usize },
}

impl RecordEntry {
    /// Number of vertices uncoloured by this step.
    pub fn erased(&self) -> usize {
        match self {
            RecordEntry::Empty => 0,
            RecordEntry::Rep { h, .. } => *h,
        }
    }
}

impl Serialize for RecordEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RecordEntry::Empty => s.serialize_str("E"),
            RecordEntry::Rep { h, q, o } => [*h, *q, *o].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RecordEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Tag(String),
            Triple([usize; 3]),
        }
        match Wire::deserialize(d)? {
            Wire::Tag(t) if t == "E" => Ok(RecordEntry::Empty),
            Wire::Tag(t) => Err(de::Error::custom(format!("unknown record tag {t:?}"))),
            Wire::Triple([h, q, o]) => {
                if h == 0 || q >= h || o == 0 {
                    return Err(de::Error::custom(format!("malformed entry [{h},{q},{o}]")));
                }
                Ok(RecordEntry::Rep { h, q, o })
            }
        }
    }
}

impl fmt::Display for RecordEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordEntry::Empty => write!(f, "E"),
            RecordEntry::Rep { h, q, o } => write!(f, "({h},{q},{o})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    #[serde(rename = "T")]
    pub budget: usize,
    pub entries: Vec<RecordEntry>,
}

impl Record {
    /// Coloured-vertex count after each step: `t - sum(h)`.
    pub fn coloured_counts(&self) -> Vec<i64> {
        let mut acc = 0i64;
        self.entries
            .iter()
            .map(|e| {
                acc += 1 - e.erased() as i64;
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Success,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub steps: usize,
    pub colouring: Vec<Colour>,
    pub record: Record,
    /// The drawn list indices, 1-based, one per step.
    pub choices: Vec<usize>,
}

impl RunOutcome {
    pub fn is_success(&self) -> bool {
        self.status == Status::Success
    }
}

/// Supplies list indices in `1..=l`.
pub trait IndexSource {
    fn draw(&mut self, l: usize) -> usize;
}

/// ChaCha8 stream seeded from a `u64`; indices drawn with `Rng::random_range`,
/// which rejects out-of-range samples and so has no modulo bias.
pub struct SeededSource(ChaCha8Rng);

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl IndexSource for SeededSource {
    fn draw(&mut self, l: usize) -> usize {
        self.0.random_range(1..=l)
    }
}

/// Replays a fixed sequence of indices.
pub struct ScriptedSource {
    script: Vec<usize>,
    pos: usize,
}

impl ScriptedSource {
    pub fn new(script: Vec<usize>) -> Self {
        ScriptedSource { script, pos: 0 }
    }
}

impl IndexSource for ScriptedSource {
    fn draw(&mut self, l: usize) -> usize {
        let i = *self.script.get(self.pos).expect("script exhausted");
        assert!((1..=l).contains(&i), "scripted index {i} outside 1..={l}");
        self.pos += 1;
        i
    }
}

/// `64 n max(1, Δ)`.
pub fn default_budget(g: &PlaneGraph) -> usize {
    64 * g.n().max(1) * g.max_degree().max(1)
}

/// Runs the algorithm with a ChaCha8 stream seeded by `seed`.
pub fn run(
    g: &PlaneGraph,
    lists: &ListAssignment,
    seed: u64,
    budget: usize,
) -> Result<RunOutcome, EngineError> {
    let mut out = run_with(g, lists, &mut SeededSource::new(seed), budget)?;
    out.seed = Some(seed);
    Ok(out)
}

pub fn run_with<S: IndexSource>(
    g: &PlaneGraph,
    lists: &ListAssignment,
    source: &mut S,
    budget: usize,
) -> Result<RunOutcome, EngineError> {
    run_observed(g, lists, source, budget, |_, _, _| {})
}

/// Same as [`run_with`], calling `observe(step, colouring, entry)` after
/// every step.
pub fn run_observed<S, F>(
    g: &PlaneGraph,
    lists: &ListAssignment,
    source: &mut S,
    budget: usize,
    mut observe: F,
) -> Result<RunOutcome, EngineError>
where
    S: IndexSource,
    F: FnMut(usize, &[Colour], &RecordEntry),
{
    if lists.n() != g.n() {
        return Err(EngineError::ListMismatch {
            lists: lists.n(),
            n: g.n(),
        });
    }
    let mut colouring = vec![0; g.n()];
    let mut uncoloured: BTreeSet<Vertex> = (0..g.n()).collect();
    let mut entries = Vec::new();
    let mut choices = Vec::new();
    let mut steps = 0;
    while steps < budget {
        let Some(&v) = uncoloured.iter().next() else { break };
        let idx = source.draw(lists.l());
        choices.push(idx);
        colouring[v] = lists.list(v)[idx - 1];
        uncoloured.remove(&v);
        let entry = match find_repetition_through(g, &colouring, v) {
            Some(rep) => {
                for &x in &rep.path.vertices[..rep.h] {
                    colouring[x] = 0;
                    uncoloured.insert(x);
                }
                RecordEntry::Rep {
                    h: rep.h,
                    q: rep.q,
                    o: rep.o,
                }
            }
            None => RecordEntry::Empty,
        };
        entries.push(entry);
        steps += 1;
        observe(steps, &colouring, &entry);
    }
    let status = if uncoloured.is_empty() {
        Status::Success
    } else {
        Status::Exhausted
    };
    Ok(RunOutcome {
        status,
        seed: None,
        steps,
        colouring,
        record: Record { budget, entries },
        choices,
    })
}

/// `(h, q, o)` for a facial path `path` of order `2h` holding `v` at offset `q < h`.
pub fn encode(g: &PlaneGraph, v: Vertex, path: &FacialPath) -> Result<(usize, usize, usize), EngineError> {
    let len = path.len();
    let h = len / 2;
    let q = path
        .vertices
        .iter()
        .position(|&x| x == v)
        .ok_or(EngineError::PathNotCanonical(v))?;
    if len == 0 || len % 2 == 1 || q >= h {
        return Err(EngineError::PathNotCanonical(v));
    }
    let o = g
        .facial_paths_through(v, h, q)
        .iter()
        .position(|p| p == path)
        .ok_or(EngineError::PathNotCanonical(v))?;
    Ok((h, q, o + 1))
}

pub fn decode(g: &PlaneGraph, v: Vertex, h: usize, q: usize, o: usize) -> Result<FacialPath, EngineError> {
    let mut paths = g.facial_paths_through(v, h, q);
    if o == 0 || o > paths.len() {
        return Err(EngineError::IndexOutOfRange {
            o,
            available: paths.len(),
        });
    }
    Ok(paths.swap_remove(o - 1))
}

fn inconsistent(msg: impl Into<String>) -> EngineError {
    EngineError::Inconsistent(msg.into())
}

fn list_index(lists: &ListAssignment, v: Vertex, colour: Colour, step: usize) -> Result<usize, EngineError> {
    lists
        .list(v)
        .iter()
        .position(|&c| c == colour)
        .map(|i| i + 1)
        .ok_or_else(|| {
            inconsistent(format!(
                "step {step}: colour {colour} is not in the list of vertex {v}"
            ))
        })
}

/// Recovers the drawn list indices from a record and the final colouring.
///
/// The recovered draws are replayed through the engine as a final check, so
/// `Ok` is returned exactly when some run produces this record and colouring.
pub fn reconstruct(
    g: &PlaneGraph,
    lists: &ListAssignment,
    record: &Record,
    final_colouring: &[Colour],
) -> Result<Vec<usize>, EngineError> {
    let n = g.n();
    if lists.n() != n {
        return Err(EngineError::ListMismatch { lists: lists.n(), n });
    }
    if final_colouring.len() != n {
        return Err(inconsistent(format!(
            "colouring has {} entries, graph has {n} vertices",
            final_colouring.len()
        )));
    }

    // Left to right: which vertex was coloured at each step, and the erased path.
    let mut uncoloured: BTreeSet<Vertex> = (0..n).collect();
    let mut steps: Vec<(Vertex, Option<FacialPath>)> = Vec::with_capacity(record.entries.len());
    for (t, entry) in record.entries.iter().enumerate() {
        let Some(&j) = uncoloured.iter().next() else {
            return Err(inconsistent(format!(
                "step {}: every vertex is already coloured",
                t + 1
            )));
        };
        uncoloured.remove(&j);
        match *entry {
            RecordEntry::Empty => steps.push((j, None)),
            RecordEntry::Rep { h, q, o } => {
                let path = decode(g, j, h, q, o).map_err(|e| inconsistent(format!("step {}: {e}", t + 1)))?;
                if let Some(x) = path.vertices.iter().find(|x| uncoloured.contains(x)) {
                    return Err(inconsistent(format!(
                        "step {}: vertex {x} of the erased path was uncoloured",
                        t + 1
                    )));
                }
                uncoloured.extend(path.vertices[..h].iter().copied());
                steps.push((j, Some(path)));
            }
        }
    }
    let zeros: BTreeSet<Vertex> = (0..n).filter(|&v| final_colouring[v] == 0).collect();
    if zeros != uncoloured {
        return Err(inconsistent(
            "uncoloured vertices differ from those implied by the record",
        ));
    }

    // Right to left: undo each step.
    let mut c = final_colouring.to_vec();
    let mut choices = vec![0; steps.len()];
    for (t, (j, path)) in steps.iter().enumerate().rev() {
        let j = *j;
        match path {
            None => {
                choices[t] = list_index(lists, j, c[j], t + 1)?;
                c[j] = 0;
            }
            Some(path) => {
                let h = path.len() / 2;
                let q = path.vertices.iter().position(|&x| x == j).unwrap();
                if let Some(&x) = path.vertices[..h].iter().find(|&&x| c[x] != 0) {
                    return Err(inconsistent(format!(
                        "step {}: vertex {x} should be uncoloured",
                        t + 1
                    )));
                }
                if let Some(&x) = path.vertices[h..].iter().find(|&&x| c[x] == 0) {
                    return Err(inconsistent(format!(
                        "step {}: second half of the erased path contains uncoloured vertex {x}",
                        t + 1
                    )));
                }
                choices[t] = list_index(lists, j, c[path.vertices[q + h]], t + 1)?;
                for p in (0..h).filter(|&p| p != q) {
                    let (x, colour) = (path.vertices[p], c[path.vertices[p + h]]);
                    list_index(lists, x, colour, t + 1)?;
                    c[x] = colour;
                }
            }
        }
    }
    if c.iter().any(|&x| x != 0) {
        return Err(inconsistent("rollback did not end at the empty colouring"));
    }

    let replay = run_with(
        g,
        lists,
        &mut ScriptedSource::new(choices.clone()),
        record.entries.len(),
    )?;
    if replay.record.entries != record.entries || replay.colouring != final_colouring {
        return Err(inconsistent(
            "replaying the recovered draws gives a different run",
        ));
    }
    Ok(choices)
}
