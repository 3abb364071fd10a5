//! Generators for the named plane graph families.
//!
//! Each generator lays the graph out as a straight-line drawing and derives
//! the rotation system by sorting neighbours clockwise around every vertex.
//! Role labels (hub, rails, spokes, ...) are attached for the colourers in
//! [`crate::families`].

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{EmbedError, Label, PlaneGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad parameters for {family}: {reason}")]
    BadParams { family: Family, reason: String },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Cycle,
    Star,
    SubdividedStar,
    Wheel,
    SubdividedWheel,
    Grid,
    Ladder,
    PendantLadder,
    Prism,
    Apic,
    Antiprism,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Path,
        Family::Cycle,
        Family::Star,
        Family::SubdividedStar,
        Family::Wheel,
        Family::SubdividedWheel,
        Family::Grid,
        Family::Ladder,
        Family::PendantLadder,
        Family::Prism,
        Family::Apic,
        Family::Antiprism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::SubdividedStar => "subdivided-star",
            Family::Wheel => "wheel",
            Family::SubdividedWheel => "subdivided-wheel",
            Family::Grid => "grid",
            Family::Ladder => "ladder",
            Family::PendantLadder => "pendant-ladder",
            Family::Prism => "prism",
            Family::Apic => "apic",
            Family::Antiprism => "antiprism",
        }
    }

    /// Smallest list length for which the family's constructive bound holds.
    pub fn min_list_size(self) -> usize {
        match self {
            Family::Path => 4,
            Family::Cycle => 5,
            Family::Star => 2,
            Family::SubdividedStar => 5,
            Family::Wheel => 6,
            Family::SubdividedWheel => 8,
            Family::Grid => 5,
            Family::Ladder => 8,
            Family::PendantLadder => 6,
            Family::Prism => 8,
            Family::Apic => 8,
            Family::Antiprism => 7,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

/// Straight-line drawing: points plus edges. Rotations come from angles.
#[derive(Default)]
struct Drawing {
    points: Vec<(f64, f64)>,
    edges: Vec<(Vertex, Vertex)>,
    labels: BTreeMap<String, Label>,
}

impl Drawing {
    fn add(&mut self, x: f64, y: f64) -> Vertex {
        self.points.push((x, y));
        self.points.len() - 1
    }

    fn edge(&mut self, a: Vertex, b: Vertex) {
        self.edges.push((a, b));
    }

    fn chain(&mut self, vs: &[Vertex]) {
        for w in vs.windows(2) {
            self.edge(w[0], w[1]);
        }
    }

    fn ring(&mut self, vs: &[Vertex]) {
        self.chain(vs);
        if vs.len() > 2 {
            self.edge(vs[vs.len() - 1], vs[0]);
        }
    }

    fn label(&mut self, name: impl Into<String>, vs: Vec<Vertex>) {
        self.labels.insert(name.into(), Label::Vertices(vs));
    }

    fn label_one(&mut self, name: impl Into<String>, v: Vertex) {
        self.labels.insert(name.into(), Label::Vertex(v));
    }

    fn finish(self) -> Result<PlaneGraph, EmbedError> {
        let n = self.points.len();
        let mut nbrs = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        let rotation = nbrs
            .into_iter()
            .enumerate()
            .map(|(v, mut ns)| {
                let (x, y) = self.points[v];
                let angle = |u: &Vertex| {
                    let (ux, uy) = self.points[*u];
                    (uy - y).atan2(ux - x)
                };
                // Clockwise: decreasing angle.
                ns.sort_by(|a, b| angle(b).total_cmp(&angle(a)));
                ns
            })
            .collect();
        PlaneGraph::with_labels(n, rotation, self.labels)
    }
}

fn polar(r: f64, k: usize, n: usize, shift: f64) -> (f64, f64) {
    let t = TAU * (k as f64 + shift) / n as f64;
    (r * t.cos(), r * t.sin())
}

fn bad(family: Family, reason: impl Into<String>) -> GenError {
    GenError::BadParams {
        family,
        reason: reason.into(),
    }
}

fn expect_params(family: Family, params: &[usize], count: usize) -> Result<(), GenError> {
    if params.len() != count {
        return Err(bad(
            family,
            format!("expected {count} parameter(s), got {}", params.len()),
        ));
    }
    Ok(())
}

/// Builds the canonical embedding of a named family.
///
/// Parameters:
/// `path [n>=1]`, `cycle [n>=3]`, `star [n>=1]`,
/// `subdivided-star [arms, len]` or `[arms, len_1, .., len_arms]`,
/// `wheel [n>=3]`, `subdivided-wheel [n]`, `[n, s, r]` or
/// `[n, s_1..s_n, r_1..r_n]` (interior vertices per spoke / rim segment),
/// `grid [n>=3, m>=3]`, `ladder [n>=2]`, `pendant-ladder [n>=2]`,
/// `prism [n>=3]`, `apic [n>=3]`, `antiprism [n>=3]`.
pub fn generate_family(family: Family, params: &[usize]) -> Result<PlaneGraph, GenError> {
    let g = match family {
        Family::Path => {
            expect_params(family, params, 1)?;
            if params[0] < 1 {
                return Err(bad(family, "need n >= 1"));
            }
            path(params[0])
        }
        Family::Cycle => {
            expect_params(family, params, 1)?;
            if params[0] < 3 {
                return Err(bad(family, "need n >= 3"));
            }
            cycle(params[0])
        }
        Family::Star => {
            expect_params(family, params, 1)?;
            if params[0] < 1 {
                return Err(bad(family, "need n >= 1"));
            }
            subdivided_star(&vec![1; params[0]])
        }
        Family::SubdividedStar => {
            let arms = match params {
                [r, len] if *r >= 1 => vec![*len; *r],
                [r, lens @ ..] if *r >= 1 && lens.len() == *r => lens.to_vec(),
                _ => return Err(bad(family, "expected [arms, len] or [arms, len_1..len_arms]")),
            };
            if arms.contains(&0) {
                return Err(bad(family, "arm lengths must be >= 1"));
            }
            subdivided_star(&arms)
        }
        Family::Wheel => {
            expect_params(family, params, 1)?;
            if params[0] < 3 {
                return Err(bad(family, "need n >= 3"));
            }
            subdivided_wheel(&vec![0; params[0]], &vec![0; params[0]])
        }
        Family::SubdividedWheel => {
            let (spokes, rims) = match params {
                [n] => (vec![0; *n], vec![0; *n]),
                [n, s, r] => (vec![*s; *n], vec![*r; *n]),
                [n, rest @ ..] if rest.len() == 2 * n => (rest[..*n].to_vec(), rest[*n..].to_vec()),
                _ => return Err(bad(family, "expected [n], [n, s, r] or [n, s_1..s_n, r_1..r_n]")),
            };
            if spokes.len() < 3 {
                return Err(bad(family, "need n >= 3"));
            }
            subdivided_wheel(&spokes, &rims)
        }
        Family::Grid => {
            expect_params(family, params, 2)?;
            if params[0] < 3 || params[1] < 3 {
                return Err(bad(family, "need n >= 3 and m >= 3"));
            }
            grid(params[0], params[1])
        }
        Family::Ladder => {
            expect_params(family, params, 1)?;
            if params[0] < 2 {
                return Err(bad(family, "need n >= 2"));
            }
            two_rail(params[0], false, false)
        }
        Family::PendantLadder => {
            expect_params(family, params, 1)?;
            if params[0] < 2 {
                return Err(bad(family, "need n >= 2"));
            }
            two_rail(params[0], true, false)
        }
        Family::Prism => {
            expect_params(family, params, 1)?;
            if params[0] < 3 {
                return Err(bad(family, "need n >= 3"));
            }
            prism(params[0], false)
        }
        Family::Apic => {
            expect_params(family, params, 1)?;
            if params[0] < 3 {
                return Err(bad(family, "need n >= 3"));
            }
            two_rail(params[0], false, true)
        }
        Family::Antiprism => {
            expect_params(family, params, 1)?;
            if params[0] < 3 {
                return Err(bad(family, "need n >= 3"));
            }
            prism(params[0], true)
        }
    };
    Ok(g?)
}

fn path(n: usize) -> Result<PlaneGraph, EmbedError> {
    let mut d = Drawing::default();
    let vs: Vec<_> = (0..n).map(|i| d.add(i as f64, 0.0)).collect();
    d.chain(&vs);
    d.label("path", vs);
    d.finish()
}

fn cycle(n: usize) -> Result<PlaneGraph, EmbedError> {
    let mut d = Drawing::default();
    let vs: Vec<_> = (0..n)
        .map(|i| {
            let (x, y) = polar(1.0, i, n, 0.0);
            d.add(x, y)
        })
        .collect();
    d.ring(&vs);
    d.label("cycle", vs);
    d.finish()
}

fn subdivided_star(arms: &[usize]) -> Result<PlaneGraph, EmbedError> {
    let mut d = Drawing::default();
    let hub = d.add(0.0, 0.0);
    d.label_one("hub", hub);
    let r = arms.len();
    let mut leaves = Vec::new();
    for (i, &len) in arms.iter().enumerate() {
        let mut arm = vec![hub];
        for k in 1..=len {
            let (x, y) = polar(k as f64, i, r, 0.0);
            arm.push(d.add(x, y));
        }
        d.chain(&arm);
        leaves.push(*arm.last().unwrap());
        d.label(format!("arm[{i}]"), arm[1..].to_vec());
    }
    d.label("leaves", leaves);
    d.finish()
}

/// Wheel with `spokes[i]` interior vertices on spoke `i` and `rims[i]`
/// interior vertices on the rim between branch vertices `i` and `i+1`.
fn subdivided_wheel(spokes: &[usize], rims: &[usize]) -> Result<PlaneGraph, EmbedError> {
    let n = spokes.len();
    let mut d = Drawing::default();
    let hub = d.add(0.0, 0.0);
    d.label_one("hub", hub);
    let outer = 1.0 + spokes.iter().copied().max().unwrap_or(0) as f64;
    // Clockwise around the hub: decreasing angle.
    let branch: Vec<_> = (0..n)
        .map(|i| {
            let (x, y) = polar(outer, n - i, n, 0.0);
            d.add(x, y)
        })
        .collect();
    let mut rim_cycle = Vec::new();
    for i in 0..n {
        let s = spokes[i];
        let mut spoke = vec![hub];
        for k in 1..=s {
            let (x, y) = polar(outer * k as f64 / (s + 1) as f64, n - i, n, 0.0);
            spoke.push(d.add(x, y));
        }
        spoke.push(branch[i]);
        d.chain(&spoke);
        d.label(format!("spoke[{i}]"), spoke[1..spoke.len() - 1].to_vec());

        let r = rims[i];
        let mut seg = Vec::new();
        for k in 1..=r {
            let frac = k as f64 / (r + 1) as f64;
            let (x, y) = polar(outer, n - i, n, -frac);
            seg.push(d.add(x, y));
        }
        let mut run = vec![branch[i]];
        run.extend(&seg);
        run.push(branch[(i + 1) % n]);
        d.chain(&run);
        rim_cycle.push(branch[i]);
        rim_cycle.extend(&seg);
        d.label(format!("rim[{i}]"), seg);
    }
    d.label("branch", branch);
    d.label("rim", rim_cycle);
    d.finish()
}

fn grid(n: usize, m: usize) -> Result<PlaneGraph, EmbedError> {
    let mut d = Drawing::default();
    for r in 0..n {
        for c in 0..m {
            d.add(c as f64, -(r as f64));
        }
    }
    let id = |r: usize, c: usize| r * m + c;
    for r in 0..n {
        let row: Vec<_> = (0..m).map(|c| id(r, c)).collect();
        d.chain(&row);
        d.label(format!("row[{r}]"), row);
    }
    for c in 0..m {
        let col: Vec<_> = (0..n).map(|r| id(r, c)).collect();
        d.chain(&col);
    }
    let mut outer = Vec::new();
    outer.extend((0..m).map(|c| id(0, c)));
    outer.extend((1..n).map(|r| id(r, m - 1)));
    outer.extend((0..m - 1).rev().map(|c| id(n - 1, c)));
    outer.extend((1..n - 1).rev().map(|r| id(r, 0)));
    d.label("outer", outer);
    d.finish()
}

/// Ladder-like graphs on rails `v` (top) and `u` (bottom).
///
/// `pendants` adds `v_0, u_0, v_{n+1}, u_{n+1}` at the rail ends. `diagonals`
/// adds the edge `u_i v_{i+1}` inside every quadrangle (apic graph), which
/// keeps `v_1` and `u_n` at degree two.
fn two_rail(n: usize, pendants: bool, diagonals: bool) -> Result<PlaneGraph, EmbedError> {
    let mut d = Drawing::default();
    let range: Vec<i64> = if pendants {
        (0..=n as i64 + 1).collect()
    } else {
        (1..=n as i64).collect()
    };
    let v: Vec<_> = range.iter().map(|&i| d.add(i as f64, 1.0)).collect();
    let u: Vec<_> = range.iter().map(|&i| d.add(i as f64, 0.0)).collect();
    d.chain(&v);
    d.chain(&u);
    let off = usize::from(pendants);
    for i in 0..n {
        d.edge(v[i + off], u[i + off]);
    }
    if diagonals {
        for i in 0..n - 1 {
            d.edge(u[i + off], v[i + 1 + off]);
        }
    }
    d.label("rail-v", v);
    d.label("rail-u", u);
    d.finish()
}

/// Prism (`twisted = false`) or antiprism (`twisted = true`).
///
/// Outer ring `v_1..v_n`, inner ring `u_1..u_n`. In the antiprism `u_i` sits
/// between `v_{i-1}` and `v_i` and is adjacent to both.
fn prism(n: usize, twisted: bool) -> Result<PlaneGraph, EmbedError> {
    let mut d = Drawing::default();
    let v: Vec<_> = (0..n)
        .map(|i| {
            let (x, y) = polar(2.0, i, n, 0.0);
            d.add(x, y)
        })
        .collect();
    let shift = if twisted { -0.5 } else { 0.0 };
    let u: Vec<_> = (0..n)
        .map(|i| {
            let (x, y) = polar(1.0, i, n, shift);
            d.add(x, y)
        })
        .collect();
    d.ring(&v);
    d.ring(&u);
    for i in 0..n {
        d.edge(u[i], v[i]);
        if twisted {
            d.edge(u[i], v[(i + n - 1) % n]);
        }
    }
    if twisted {
        d.label("outer", v);
        d.label("inner", u);
    } else {
        d.label("rail-v", v);
        d.label("rail-u", u);
    }
    d.finish()
}

/// Random plane graph on `n` vertices.
///
/// Starts from a triangle, inserts each further vertex into a uniformly
/// chosen triangular face (a stacked triangulation), then keeps each edge
/// independently with probability `keep`. Deleting edges from a rotation
/// system keeps it a plane embedding; the result may be disconnected.
pub fn random_plane_graph<R: Rng + ?Sized>(n: usize, keep: f64, rng: &mut R) -> PlaneGraph {
    let mut rot: Vec<Vec<Vertex>> = match n {
        0 => Vec::new(),
        1 => vec![vec![]],
        2 => vec![vec![1], vec![0]],
        _ => vec![vec![1, 2], vec![2, 0], vec![0, 1]],
    };
    let mut triangles: Vec<[Vertex; 3]> = if n >= 3 {
        vec![[0, 1, 2], [0, 2, 1]]
    } else {
        Vec::new()
    };
    for x in 3..n {
        let t = rng.random_range(0..triangles.len());
        let [a, b, c] = triangles.swap_remove(t);
        // Face walk a -> b -> c: at b, c follows a; insert x between them.
        insert_after(&mut rot[b], a, x);
        insert_after(&mut rot[c], b, x);
        insert_after(&mut rot[a], c, x);
        rot.push(vec![b, a, c]);
        triangles.extend([[a, b, x], [b, c, x], [c, a, x]]);
    }
    let mut edges = Vec::new();
    for (v, ns) in rot.iter().enumerate() {
        for &u in ns {
            if v < u && !rng.random_bool(keep.clamp(0.0, 1.0)) {
                edges.push((v, u));
            }
        }
    }
    for (a, b) in edges {
        rot[a].retain(|&x| x != b);
        rot[b].retain(|&x| x != a);
    }
    PlaneGraph::new(n, rot).expect("stacked triangulation is a valid rotation system")
}

fn insert_after(rot: &mut Vec<Vertex>, after: Vertex, x: Vertex) {
    let i = rot.iter().position(|&y| y == after).unwrap();
    rot.insert(i + 1, x);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn face_lengths(g: &PlaneGraph) -> Vec<usize> {
        let mut v: Vec<_> = g.faces().iter().map(|f| f.edge_count()).collect();
        v.sort();
        v
    }

    #[test]
    fn wheel_census() {
        let g = generate_family(Family::Wheel, &[5]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 10));
        assert_eq!(face_lengths(&g), vec![3, 3, 3, 3, 3, 5]);
        assert!(g.is_plane());
    }

    #[test]
    fn apic_census() {
        let g = generate_family(Family::Apic, &[4]).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(face_lengths(&g), vec![3, 3, 3, 3, 3, 3, 8]);
        assert!(g.max_degree() <= 4);
        let v = g.label("rail-v").unwrap().vertices();
        let u = g.label("rail-u").unwrap().vertices();
        assert_eq!(g.degree(v[0]), 2);
        assert_eq!(g.degree(*u.last().unwrap()), 2);
    }

    #[test]
    fn antiprism_and_prism_census() {
        let g = generate_family(Family::Antiprism, &[5]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (10, 20));
        assert_eq!(face_lengths(&g), [vec![3; 10], vec![5, 5]].concat());
        let g = generate_family(Family::Prism, &[6]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (12, 18));
        assert_eq!(face_lengths(&g), [vec![4; 6], vec![6, 6]].concat());
        let g = generate_family(Family::Antiprism, &[4]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (8, 16));
    }

    #[test]
    fn grid_census() {
        let g = generate_family(Family::Grid, &[3, 3]).unwrap();
        assert_eq!(face_lengths(&g), vec![4, 4, 4, 4, 8]);
        let g = generate_family(Family::Grid, &[4, 5]).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(g.label("outer").unwrap().vertices().len(), 14);
    }

    #[test]
    fn ladder_family_census() {
        let g = generate_family(Family::Ladder, &[5]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (10, 5 + 2 * 4));
        assert_eq!(face_lengths(&g), vec![4, 4, 4, 4, 10]);
        let g = generate_family(Family::PendantLadder, &[3]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (10, 3 + 2 * 2 + 4));
        assert_eq!(face_lengths(&g), vec![4, 4, 6 + 8]);
    }

    #[test]
    fn star_and_subdivisions() {
        let g = generate_family(Family::Star, &[4]).unwrap();
        assert_eq!(face_lengths(&g), vec![8]);
        let g = generate_family(Family::SubdividedStar, &[3, 3]).unwrap();
        assert_eq!(g.n(), 10);
        let g = generate_family(Family::SubdividedWheel, &[4, 1, 0]).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(face_lengths(&g), vec![4, 5, 5, 5, 5]);
        let g = generate_family(Family::SubdividedWheel, &[3, 0, 1, 2, 1, 0, 3]).unwrap();
        assert!(g.is_plane());
        assert_eq!(g.faces().len(), 4);
    }

    #[test]
    fn bad_params() {
        assert!(matches!(
            generate_family(Family::Grid, &[2, 5]),
            Err(GenError::BadParams { .. })
        ));
        assert!(matches!(
            generate_family(Family::Apic, &[2]),
            Err(GenError::BadParams { .. })
        ));
        assert!(matches!(
            generate_family(Family::Cycle, &[]),
            Err(GenError::BadParams { .. })
        ));
        assert!("hexagon".parse::<Family>().is_err());
        assert_eq!("pendant-ladder".parse::<Family>().unwrap(), Family::PendantLadder);
    }

    #[test]
    fn random_graphs_are_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..14 {
            for _ in 0..20 {
                let g = random_plane_graph(n, 0.7, &mut rng);
                assert!(g.is_plane(), "{:?}", g.rotations());
            }
        }
    }
}
