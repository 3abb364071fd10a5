//! Deterministic list colourers for special families.
//!
//! Every construction reduces to colouring paths and cycles from pruned
//! lists. A cycle is coloured by giving one vertex a colour removed from
//! all other lists and colouring the remaining path; a path is coloured by
//! the engine (reseeded until it succeeds). Each colourer checks its result
//! with the facial verifier before returning it.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{PlaneGraph, Vertex};
use crate::engine::{run, ListAssignment};
use crate::generators::{generate_family, Family, GenError};
use crate::oracle::{feasible_for_lists, OracleBudget};
use crate::repetition::verify_facial_nonrepetitive;
use crate::Colour;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{family} needs lists of length {required}, got {got}")]
    ListTooShort {
        family: Family,
        required: usize,
        got: usize,
    },
    #[error("colourer for {expected} cannot handle a {got} instance")]
    WrongFamily { expected: &'static str, got: Family },
    #[error("graph lacks the `{0}` label")]
    MissingLabel(String),
    #[error("list assignment covers {lists} vertices, graph has {n}")]
    ListMismatch { lists: usize, n: usize },
    #[error("vertex {vertex}: {removed} colours removed, bound is {bound}")]
    PruningBoundExceeded {
        vertex: Vertex,
        removed: usize,
        bound: usize,
    },
    #[error("vertex {0} has no colour left")]
    EmptyList(Vertex),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Generate(#[from] GenError),
}

#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub family: Family,
    pub graph: PlaneGraph,
    pub lists: ListAssignment,
}

impl FamilyInstance {
    pub fn new(family: Family, graph: PlaneGraph, lists: ListAssignment) -> Result<Self, FamilyError> {
        if lists.n() != graph.n() {
            return Err(FamilyError::ListMismatch {
                lists: lists.n(),
                n: graph.n(),
            });
        }
        Ok(FamilyInstance { family, graph, lists })
    }

    /// Generated graph with uniformly random `l`-lists from `1..=universe`.
    pub fn random(
        family: Family,
        params: &[usize],
        l: usize,
        universe: usize,
        seed: u64,
    ) -> Result<Self, FamilyError> {
        let graph = generate_family(family, params)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lists = ListAssignment::random(graph.n(), l, universe, &mut rng);
        Self::new(family, graph, lists)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyColouring {
    pub colours: Vec<Colour>,
    pub construction_trace: Vec<String>,
}

/// Whether the sequence contains no block `x x`.
pub fn is_nonrepetitive_sequence(s: &[Colour]) -> bool {
    (1..=s.len() / 2).all(|h| (0..=s.len() - 2 * h).all(|i| s[i..i + h] != s[i + h..i + 2 * h]))
}

/// `B^0 A_{1,n_1} B^1 A_{n_1+1,n_2} .. B^r A_{n_r+1,m} B^{r+1}` for cut
/// points `n_1 < .. < n_r`; needs `blocks.len() == cuts.len() + 2`. Cuts at
/// `0` or `a.len()` leave an empty piece, so two blocks become adjacent.
pub fn interleave(a: &[Colour], cuts: &[usize], blocks: &[Vec<Colour>]) -> Vec<Colour> {
    assert_eq!(blocks.len(), cuts.len() + 2);
    assert!(cuts.windows(2).all(|w| w[0] < w[1]) && cuts.iter().all(|&c| c <= a.len()));
    let mut out = blocks[0].clone();
    let mut prev = 0;
    for (i, &cut) in cuts.iter().chain(std::iter::once(&a.len())).enumerate() {
        out.extend_from_slice(&a[prev..cut]);
        out.extend_from_slice(&blocks[i + 1]);
        prev = cut;
    }
    out
}

/// Whether the interleaving of `a` with `blocks` is non-repetitive.
pub fn nonrep_seq_concat_check(a: &[Colour], cuts: &[usize], blocks: &[Vec<Colour>]) -> bool {
    is_nonrepetitive_sequence(&interleave(a, cuts, blocks))
}

const PATH_ATTEMPTS: usize = 1000;
const FALLBACK_MAX: usize = 20;
const WHEEL_ATTEMPTS: usize = 64;

struct Builder<'a> {
    inst: &'a FamilyInstance,
    rng: ChaCha8Rng,
    colours: Vec<Colour>,
    forbidden: Vec<BTreeSet<Colour>>,
    trace: Vec<String>,
}

impl<'a> Builder<'a> {
    fn new(inst: &'a FamilyInstance, seed: u64) -> Self {
        let n = inst.graph.n();
        Builder {
            inst,
            rng: ChaCha8Rng::seed_from_u64(seed),
            colours: vec![0; n],
            forbidden: vec![BTreeSet::new(); n],
            trace: Vec::new(),
        }
    }

    fn label(&self, name: &str) -> Result<Vec<Vertex>, FamilyError> {
        self.inst
            .graph
            .label(name)
            .map(|l| l.vertices())
            .ok_or_else(|| FamilyError::MissingLabel(name.to_string()))
    }

    fn forbid(&mut self, v: Vertex, c: Colour) {
        self.forbidden[v].insert(c);
    }

    /// Declared list of `v` without forbidden colours, after checking the
    /// number of forbidden colours against `bound`.
    fn residual(&self, v: Vertex, bound: usize) -> Result<Vec<Colour>, FamilyError> {
        let removed = self.forbidden[v].len();
        if removed > bound {
            return Err(FamilyError::PruningBoundExceeded {
                vertex: v,
                removed,
                bound,
            });
        }
        let rest: Vec<Colour> = self
            .inst
            .lists
            .list(v)
            .iter()
            .copied()
            .filter(|c| !self.forbidden[v].contains(c))
            .collect();
        if rest.is_empty() {
            return Err(FamilyError::EmptyList(v));
        }
        Ok(rest)
    }

    fn pick(&mut self, v: Vertex, bound: usize) -> Result<Colour, FamilyError> {
        let rest = self.residual(v, bound)?;
        let c = rest[self.rng.random_range(0..rest.len())];
        self.colours[v] = c;
        Ok(c)
    }

    /// Colours `vs` as a path, consecutive entries adjacent.
    fn path(&mut self, what: &str, vs: &[Vertex], bound: usize) -> Result<(), FamilyError> {
        if vs.is_empty() {
            return Ok(());
        }
        let lists = vs
            .iter()
            .map(|&v| self.residual(v, bound))
            .collect::<Result<Vec<_>, _>>()?;
        let (cs, how) = colour_sequence(lists, &mut self.rng)?;
        for (&v, c) in vs.iter().zip(cs) {
            self.colours[v] = c;
        }
        self.trace
            .push(format!("{what}: path of {} vertices coloured ({how})", vs.len()));
        Ok(())
    }

    /// Colours `vs` as a cycle: `vs[0]` gets a colour removed from the
    /// other lists, the rest is coloured as a path.
    fn cycle(&mut self, what: &str, vs: &[Vertex], bound: usize) -> Result<(), FamilyError> {
        let Some((&first, rest)) = vs.split_first() else {
            return Ok(());
        };
        let c = self.pick(first, bound)?;
        self.trace
            .push(format!("{what}: vertex {first} <- {c}, unique on the cycle"));
        for &v in rest {
            self.forbid(v, c);
        }
        self.path(what, rest, bound + 1)
    }

    fn finish(self) -> Result<FamilyColouring, FamilyError> {
        if let Err(v) = verify_facial_nonrepetitive(&self.inst.graph, &self.colours) {
            return Err(FamilyError::ConstructionFailed(format!(
                "repetition {:?} on face {} at vertices {:?}",
                v.block, v.face, v.vertices
            )));
        }
        Ok(FamilyColouring {
            colours: self.colours,
            construction_trace: self.trace,
        })
    }
}

fn path_graph(k: usize) -> PlaneGraph {
    let rot = (0..k)
        .map(|i| {
            let mut r = Vec::with_capacity(2);
            if i > 0 {
                r.push(i - 1);
            }
            if i + 1 < k {
                r.push(i + 1);
            }
            r
        })
        .collect();
    PlaneGraph::new(k, rot).expect("path rotation is valid")
}

/// Non-repetitive sequence with `s[i]` from `lists[i]`.
///
/// Runs the engine on a path with budget `64k`, reseeding on exhaustion.
/// Short sequences fall back to exhaustive search.
fn colour_sequence(
    lists: Vec<Vec<Colour>>,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Colour>, String), FamilyError> {
    let k = lists.len();
    let g = path_graph(k);
    let lists =
        ListAssignment::from_lists(lists).map_err(|e| FamilyError::ConstructionFailed(e.to_string()))?;
    for attempt in 1..=PATH_ATTEMPTS {
        let out = run(&g, &lists, rng.random(), 64 * k)
            .map_err(|e| FamilyError::ConstructionFailed(e.to_string()))?;
        if out.is_success() {
            let plural = if attempt == 1 { "" } else { "s" };
            return Ok((out.colouring, format!("engine, {attempt} run{plural}")));
        }
    }
    if k <= FALLBACK_MAX {
        let budget = OracleBudget {
            max_vertices: FALLBACK_MAX,
            max_universe: usize::MAX,
            ..OracleBudget::default()
        };
        let out = feasible_for_lists(&g, &lists, &budget)
            .map_err(|e| FamilyError::ConstructionFailed(e.to_string()))?;
        if let Some(w) = out.witness() {
            return Ok((w.to_vec(), "exhaustive search".into()));
        }
    }
    Err(FamilyError::ConstructionFailed(format!(
        "no non-repetitive colouring found for a path of {k} vertices"
    )))
}

fn require(inst: &FamilyInstance, expected: &'static str, allowed: &[Family]) -> Result<(), FamilyError> {
    if !allowed.contains(&inst.family) {
        return Err(FamilyError::WrongFamily {
            expected,
            got: inst.family,
        });
    }
    if inst.lists.n() != inst.graph.n() {
        return Err(FamilyError::ListMismatch {
            lists: inst.lists.n(),
            n: inst.graph.n(),
        });
    }
    let required = inst.family.min_list_size();
    if inst.lists.l() < required {
        return Err(FamilyError::ListTooShort {
            family: inst.family,
            required,
            got: inst.lists.l(),
        });
    }
    Ok(())
}

pub fn colour_path(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(inst, "path", &[Family::Path])?;
    let mut b = Builder::new(inst, seed);
    let vs = b.label("path")?;
    b.path("path", &vs, 0)?;
    b.finish()
}

pub fn colour_cycle(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(inst, "cycle", &[Family::Cycle])?;
    let mut b = Builder::new(inst, seed);
    let vs = b.label("cycle")?;
    b.cycle("cycle", &vs, 0)?;
    b.finish()
}

/// Star, subdivided star or wheel: the hub gets a colour removed from every
/// other list, then each component of the rest is coloured on its own.
pub fn colour_unique_hub(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(
        inst,
        "star, subdivided star or wheel",
        &[Family::Star, Family::SubdividedStar, Family::Wheel],
    )?;
    let mut b = Builder::new(inst, seed);
    let hub = b.label("hub")?[0];
    let h = b.pick(hub, 0)?;
    b.trace
        .push(format!("hub: vertex {hub} <- {h}, removed from all other lists"));
    for v in (0..inst.graph.n()).filter(|&v| v != hub) {
        b.forbid(v, h);
    }
    match inst.family {
        Family::Star => {
            for v in b.label("leaves")? {
                b.pick(v, 1)?;
            }
            b.trace.push("leaves: any remaining colour".into());
        }
        Family::SubdividedStar => {
            let arms = (0..inst.graph.degree(hub))
                .map(|i| b.label(&format!("arm[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            for (i, arm) in arms.iter().enumerate() {
                b.path(&format!("arm {i}"), arm, 1)?;
            }
        }
        _ => {
            let rim = b.label("rim")?;
            b.cycle("rim", &rim, 1)?;
        }
    }
    b.finish()
}

/// Subdivision of a wheel.
///
/// Branch vertices `v_i` are the rim vertices of degree 3, `u_i` the
/// neighbour of `v_i` on spoke `i` (absent when the spoke is a single edge).
/// Stages: hub; the `u_i` as a cycle in their order around the hub; pruning
/// of spokes and rim by the colours of nearby `u_i`; the rim as a cycle;
/// the remaining spoke interiors as paths.
///
/// The rim may give a branch vertex away from the hub the hub's colour,
/// and in rare cases that closes a repetition through the hub. Such
/// attempts are caught by the verifier and redone with fresh random choices.
pub fn colour_subdivided_wheel(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(inst, "subdivided wheel", &[Family::SubdividedWheel])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for attempt in 1..=WHEEL_ATTEMPTS {
        match subdivided_wheel_attempt(inst, rng.random()) {
            Ok(mut out) => {
                if !failures.is_empty() {
                    let mut trace = failures;
                    trace.push(format!("attempt {attempt} passed"));
                    trace.append(&mut out.construction_trace);
                    out.construction_trace = trace;
                }
                return Ok(out);
            }
            Err(FamilyError::ConstructionFailed(why)) => {
                failures.push(format!("attempt {attempt} rejected by the verifier: {why}"));
            }
            Err(e) => return Err(e),
        }
    }
    Err(FamilyError::ConstructionFailed(format!(
        "all {WHEEL_ATTEMPTS} attempts produced a repetition"
    )))
}

fn subdivided_wheel_attempt(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    let mut b = Builder::new(inst, seed);
    let hub = b.label("hub")?[0];
    let branch = b.label("branch")?;
    let n = branch.len();
    let spokes = (0..n)
        .map(|i| b.label(&format!("spoke[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let rims = (0..n)
        .map(|i| b.label(&format!("rim[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let rim = b.label("rim")?;

    let h = b.pick(hub, 0)?;
    b.trace
        .push(format!("hub: vertex {hub} <- {h}, removed from non-branch lists"));
    let branch_set: BTreeSet<_> = branch.iter().copied().collect();
    for v in (0..inst.graph.n()).filter(|v| *v != hub && !branch_set.contains(v)) {
        b.forbid(v, h);
    }

    let u: Vec<Option<Vertex>> = spokes.iter().map(|s| s.last().copied()).collect();
    let ring: Vec<Vertex> = u.iter().flatten().copied().collect();
    b.cycle("u-ring", &ring, 1)?;

    for j in 0..n {
        let Some(uj) = u[j] else { continue };
        let c = b.colours[uj];
        let mut targets: Vec<Vertex> = Vec::new();
        for i in [(j + n - 1) % n, j, (j + 1) % n] {
            targets.extend(&spokes[i]);
            targets.push(branch[i]);
        }
        targets.extend(&rims[(j + n - 1) % n]);
        targets.extend(&rims[j]);
        for t in targets {
            if b.colours[t] == 0 {
                b.forbid(t, c);
            }
        }
    }
    for i in 0..n {
        if u[i].is_none() {
            b.forbid(branch[i], h);
        }
    }
    b.trace.push("pruned spokes and rim by the u-ring colours".into());

    b.cycle("rim", &rim, 3)?;
    for (i, s) in spokes.iter().enumerate() {
        if s.len() > 1 {
            b.path(&format!("spoke {i}"), &s[..s.len() - 1], 4)?;
        }
    }
    b.finish()
}

/// Grid `P_n □ P_m`.
///
/// `v = (0,1)`, `w = (0,0)`, `z = (1,0)`, `u = (1,1)`. The outer cycle is
/// `v` with a unique colour plus a path; the interior is coloured along a
/// boustrophedon from the bottom interior row up to `u`. An interior
/// vertex avoids its coloured neighbours and, on each square where its two
/// neighbours share a colour, the colour of the opposite corner.
pub fn colour_grid(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(inst, "grid", &[Family::Grid])?;
    let mut b = Builder::new(inst, seed);
    let mut rows = Vec::new();
    while let Some(l) = inst.graph.label(&format!("row[{}]", rows.len())) {
        rows.push(l.vertices());
    }
    let outer = b.label("outer")?;
    let (n, m) = (rows.len(), rows.first().map_or(0, Vec::len));
    if n < 3 || m < 3 {
        return Err(FamilyError::MissingLabel("row[0..3]".into()));
    }

    let v = rows[0][1];
    let h = b.pick(v, 0)?;
    b.trace
        .push(format!("v: vertex {v} <- {h}, removed from the outer cycle"));
    let pos = outer
        .iter()
        .position(|&x| x == v)
        .ok_or_else(|| FamilyError::MissingLabel("outer".into()))?;
    let rest: Vec<Vertex> = outer[pos + 1..].iter().chain(&outer[..pos]).copied().collect();
    for &x in &rest {
        b.forbid(x, h);
    }
    b.path("outer", &rest, 1)?;

    let mut q = Vec::new();
    for r in (1..n - 1).rev() {
        let cols: Vec<usize> = if (r - 1) % 2 == 0 {
            (1..m - 1).rev().collect()
        } else {
            (1..m - 1).collect()
        };
        q.extend(cols.into_iter().map(|c| rows[r][c]));
    }
    let u = rows[1][1];
    debug_assert_eq!(q.last(), Some(&u));
    let mut most = 0;
    for &x in &q {
        let g = &inst.graph;
        let rot = g.rotation(x);
        for &y in rot {
            if b.colours[y] > 0 {
                b.forbid(x, b.colours[y]);
            }
        }
        for i in 0..rot.len() {
            let (a, c) = (rot[i], rot[(i + 1) % rot.len()]);
            if b.colours[a] == 0 || b.colours[a] != b.colours[c] {
                continue;
            }
            let d = g
                .rotation(a)
                .iter()
                .copied()
                .find(|&d| d != x && g.has_edge(d, c));
            if let Some(d) = d.filter(|&d| b.colours[d] > 0) {
                b.forbid(x, b.colours[d]);
            }
        }
        most = most.max(b.forbidden[x].len());
        b.pick(x, if x == u { 4 } else { 3 })?;
    }
    b.trace.push(format!(
        "interior: {} vertices along Q ending at u = {u}, at most {most} colours removed",
        q.len()
    ));
    b.finish()
}

/// Ladder, pendant ladder, prism and apic graph.
///
/// Ladder, prism and apic: `v_1` and `u_n` get two colours removed from all
/// other lists, then the path `v_2..v_n`; each `u_i` (`i < n`) loses the
/// colours of `v_i` and `v_{i+1}`; then the path `u_1..u_{n-1}`.
/// Pendant ladder: the path `v_0..v_{n+1}`; each `u_i` (`i <= n`) loses the
/// colours of `v_i` and `v_{i+1}`; then the path `u_0..u_{n+1}`.
pub fn colour_two_rail(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(
        inst,
        "ladder, pendant ladder, prism or apic graph",
        &[Family::Ladder, Family::PendantLadder, Family::Prism, Family::Apic],
    )?;
    let mut b = Builder::new(inst, seed);
    let v = b.label("rail-v")?;
    let u = b.label("rail-u")?;
    let k = v.len();
    if inst.family == Family::PendantLadder {
        b.path("rail v", &v, 0)?;
        for i in 0..k - 1 {
            let (c1, c2) = (b.colours[v[i]], b.colours[v[i + 1]]);
            b.forbid(u[i], c1);
            b.forbid(u[i], c2);
        }
        b.path("rail u", &u, 2)?;
        return b.finish();
    }
    let c1 = b.pick(v[0], 0)?;
    b.forbid(u[k - 1], c1);
    let c2 = b.pick(u[k - 1], 1)?;
    b.trace.push(format!(
        "ends: v_1 = {} <- {c1}, u_n = {} <- {c2}, removed from all other lists",
        v[0],
        u[k - 1]
    ));
    for x in v[1..].iter().chain(&u[..k - 1]) {
        b.forbid(*x, c1);
        b.forbid(*x, c2);
    }
    b.path("rail v", &v[1..], 2)?;
    for i in 0..k - 1 {
        let (a, c) = (b.colours[v[i]], b.colours[v[i + 1]]);
        b.forbid(u[i], a);
        b.forbid(u[i], c);
    }
    b.path("rail u", &u[..k - 1], 4)?;
    b.finish()
}

/// Antiprism: outer cycle, then the inner cycle with each `u_i` avoiding
/// its two outer neighbours.
pub fn colour_antiprism(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    require(inst, "antiprism", &[Family::Antiprism])?;
    let mut b = Builder::new(inst, seed);
    let outer = b.label("outer")?;
    let inner = b.label("inner")?;
    b.cycle("outer", &outer, 0)?;
    let on_outer: BTreeSet<_> = outer.iter().copied().collect();
    for &x in &inner {
        let cs: Vec<Colour> = inst
            .graph
            .rotation(x)
            .iter()
            .filter(|y| on_outer.contains(y))
            .map(|&y| b.colours[y])
            .collect();
        for c in cs {
            b.forbid(x, c);
        }
    }
    b.cycle("inner", &inner, 2)?;
    b.finish()
}

/// Dispatches on the family tag.
pub fn colour_family(inst: &FamilyInstance, seed: u64) -> Result<FamilyColouring, FamilyError> {
    match inst.family {
        Family::Path => colour_path(inst, seed),
        Family::Cycle => colour_cycle(inst, seed),
        Family::Star | Family::SubdividedStar | Family::Wheel => colour_unique_hub(inst, seed),
        Family::SubdividedWheel => colour_subdivided_wheel(inst, seed),
        Family::Grid => colour_grid(inst, seed),
        Family::Ladder | Family::PendantLadder | Family::Prism | Family::Apic => colour_two_rail(inst, seed),
        Family::Antiprism => colour_antiprism(inst, seed),
    }
}

/// Colour pattern of a closed walk of length 4 up to renaming, as a
/// string over `A..D` (`ABAC`, `ABCD`, ..).
pub fn square_pattern(cs: [Colour; 4]) -> String {
    let mut names: Vec<Colour> = Vec::new();
    cs.iter()
        .map(|c| {
            let i = names.iter().position(|x| x == c).unwrap_or_else(|| {
                names.push(*c);
                names.len() - 1
            });
            (b'A' + i as u8) as char
        })
        .collect()
}

/// Whether every 4-face reads `ABCD` or `ABAC` from some starting corner.
pub fn squares_have_safe_patterns(g: &PlaneGraph, c: &[Colour]) -> bool {
    g.faces()
        .iter()
        .filter(|f| f.edge_count() == 4 && f.boundary.len() == 4)
        .all(|f| {
            (0..4).any(|s| {
                let cs = [0, 1, 2, 3].map(|i| c[f.boundary[(s + i) % 4]]);
                matches!(square_pattern(cs).as_str(), "ABCD" | "ABAC")
            })
        })
}
