//! Plane graphs given by a rotation system.
//!
//! A [`PlaneGraph`] stores, for every vertex, the cyclic order of its
//! neighbours. Faces are recovered by the usual tracing rule: after entering
//! `v` along the edge `(u, v)`, leave along the neighbour that follows `u` in
//! the rotation of `v`. Every directed edge lies on exactly one face walk.
//!
//! Facial paths are windows of consecutive positions on a face walk whose
//! vertices are pairwise distinct. Windows wrap around the (cyclic) walk.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("vertex {vertex} lists neighbour {neighbour}, but only {n} vertices exist")]
    VertexOutOfRange {
        vertex: Vertex,
        neighbour: Vertex,
        n: usize,
    },
    #[error("vertex {0} lists itself as a neighbour")]
    LoopEdge(Vertex),
    #[error("vertex {vertex} lists neighbour {neighbour} more than once")]
    DuplicateNeighbour { vertex: Vertex, neighbour: Vertex },
    #[error("vertex {0} lists {1}, but {1} does not list {0}")]
    AsymmetricRotation(Vertex, Vertex),
    #[error("rotation has {got} entries but n = {n}")]
    LengthMismatch { n: usize, got: usize },
    #[error("label {0:?} refers to a vertex out of range")]
    BadLabel(String),
}

/// A role annotation attached by a generator: one vertex or a vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Vertex(Vertex),
    Vertices(Vec<Vertex>),
}

impl Label {
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            Label::Vertex(v) => vec![*v],
            Label::Vertices(vs) => vs.clone(),
        }
    }
}

/// Closed boundary walk of one face.
///
/// An isolated vertex has the single-vertex walk `[v]` with no edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<Vertex>,
    trivial: bool,
}

impl Face {
    /// Number of directed edges on the walk.
    pub fn edge_count(&self) -> usize {
        if self.trivial {
            0
        } else {
            self.boundary.len()
        }
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// The `len` consecutive walk vertices starting at position `start`.
    pub fn window(&self, start: usize, len: usize) -> Vec<Vertex> {
        let walk = self.boundary.len();
        (0..len).map(|i| self.boundary[(start + i) % walk]).collect()
    }
}

/// A simple path lying on consecutive positions of a face walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FacialPath {
    pub vertices: Vec<Vertex>,
}

impl FacialPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Per-component Euler census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentCensus {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl ComponentCensus {
    pub fn euler_ok(&self) -> bool {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 == 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    rotation: Vec<Vec<Vertex>>,
    labels: BTreeMap<String, Label>,
    faces: Vec<Face>,
    /// `incidence[v]` lists every `(face, position)` where `v` sits on a walk.
    incidence: Vec<Vec<(usize, usize)>>,
    components: Vec<ComponentCensus>,
}

impl PlaneGraph {
    /// Validates a rotation system and traces its faces.
    pub fn new(n: usize, rotation: Vec<Vec<Vertex>>) -> Result<Self, EmbedError> {
        Self::with_labels(n, rotation, BTreeMap::new())
    }

    pub fn with_labels(
        n: usize,
        rotation: Vec<Vec<Vertex>>,
        labels: BTreeMap<String, Label>,
    ) -> Result<Self, EmbedError> {
        if rotation.len() != n {
            return Err(EmbedError::LengthMismatch {
                n,
                got: rotation.len(),
            });
        }
        for (v, nbrs) in rotation.iter().enumerate() {
            let mut seen = HashSet::with_capacity(nbrs.len());
            for &u in nbrs {
                if u >= n {
                    return Err(EmbedError::VertexOutOfRange {
                        vertex: v,
                        neighbour: u,
                        n,
                    });
                }
                if u == v {
                    return Err(EmbedError::LoopEdge(v));
                }
                if !seen.insert(u) {
                    return Err(EmbedError::DuplicateNeighbour {
                        vertex: v,
                        neighbour: u,
                    });
                }
            }
        }
        for (v, nbrs) in rotation.iter().enumerate() {
            for &u in nbrs {
                if !rotation[u].contains(&v) {
                    return Err(EmbedError::AsymmetricRotation(v, u));
                }
            }
        }
        for (name, label) in &labels {
            if label.vertices().iter().any(|&v| v >= n) {
                return Err(EmbedError::BadLabel(name.clone()));
            }
        }

        let faces = trace_faces(&rotation);
        let mut incidence = vec![Vec::new(); n];
        for (f, face) in faces.iter().enumerate() {
            for (p, &v) in face.boundary.iter().enumerate() {
                incidence[v].push((f, p));
            }
        }
        let components = census(&rotation, &faces);
        Ok(PlaneGraph {
            rotation,
            labels,
            faces,
            incidence,
            components,
        })
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rotation[u].contains(&v)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn labels(&self) -> &BTreeMap<String, Label> {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Option<&Label> {
        self.labels.get(name)
    }

    pub fn components(&self) -> &[ComponentCensus] {
        &self.components
    }

    /// True when every connected component satisfies `V - E + F = 2`.
    pub fn is_plane(&self) -> bool {
        self.components.iter().all(ComponentCensus::euler_ok)
    }

    /// Successor of `u` in the rotation of `v`.
    pub fn next_after(&self, v: Vertex, u: Vertex) -> Vertex {
        next_in_rotation(&self.rotation[v], u)
    }

    /// Faces (by index) whose walk passes through `v`, with positions.
    pub fn incidence(&self, v: Vertex) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    /// Canonical list of facial paths `P = (p_1, ..., p_2h)` with `p_{q+1} = v`.
    ///
    /// Every occurrence of `v` on a face walk contributes at most two
    /// candidates: the forward window holding `v` at offset `q`, and the
    /// reverse of the forward window holding `v` at offset `2h - 1 - q`.
    /// Candidates are sorted by `(face, window start, direction)`, windows
    /// that are not simple are dropped, and repeated vertex sequences keep
    /// their first occurrence. The list therefore has at most `2 deg(v)`
    /// entries.
    pub fn facial_paths_through(&self, v: Vertex, h: usize, q: usize) -> Vec<FacialPath> {
        if h == 0 || q >= h {
            return Vec::new();
        }
        let len = 2 * h;
        let mut candidates: Vec<(usize, usize, u8, Vec<Vertex>)> = Vec::new();
        for &(f, p) in &self.incidence[v] {
            let face = &self.faces[f];
            let walk = face.edge_count();
            if walk < len {
                continue;
            }
            let start = (p + walk - q) % walk;
            let fwd = face.window(start, len);
            if all_distinct(&fwd) {
                candidates.push((f, start, 0, fwd));
            }
            let start = (p + walk - (len - 1 - q)) % walk;
            let mut rev = face.window(start, len);
            if all_distinct(&rev) {
                rev.reverse();
                candidates.push((f, start, 1, rev));
            }
        }
        candidates.sort_by_key(|a| (a.0, a.1, a.2));
        let mut seen = HashSet::new();
        candidates
            .into_iter()
            .filter(|c| seen.insert(c.3.clone()))
            .map(|c| FacialPath { vertices: c.3 })
            .collect()
    }

    /// Largest `h` for which some facial path of order `2h` may pass through `v`.
    pub fn max_half_length_through(&self, v: Vertex) -> usize {
        self.incidence[v]
            .iter()
            .map(|&(f, _)| self.faces[f].edge_count() / 2)
            .max()
            .unwrap_or(0)
    }

    /// Neighbours of `v` in its connected component, breadth first.
    pub fn component_of(&self, v: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![v];
        seen[v] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &y in &self.rotation[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }
}

pub(crate) fn all_distinct(vs: &[Vertex]) -> bool {
    let mut seen = HashSet::with_capacity(vs.len());
    vs.iter().all(|v| seen.insert(*v))
}

fn next_in_rotation(rot: &[Vertex], u: Vertex) -> Vertex {
    let i = rot
        .iter()
        .position(|&x| x == u)
        .expect("neighbour present in rotation");
    rot[(i + 1) % rot.len()]
}

fn trace_faces(rotation: &[Vec<Vertex>]) -> Vec<Face> {
    let n = rotation.len();
    // Dart (v, i) is the edge from v to rotation[v][i].
    let mut used: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = Vec::new();
    for root in 0..n {
        // Trace component by component, in order of the least vertex.
        if rotation[root].is_empty() {
            faces.push(Face {
                boundary: vec![root],
                trivial: true,
            });
            continue;
        }
        for i in 0..rotation[root].len() {
            if used[root][i] {
                continue;
            }
            let mut boundary = Vec::new();
            let (mut v, mut k) = (root, i);
            while !used[v][k] {
                used[v][k] = true;
                boundary.push(v);
                let u = rotation[v][k];
                let w = next_in_rotation(&rotation[u], v);
                k = rotation[u].iter().position(|&x| x == w).unwrap();
                v = u;
            }
            faces.push(Face {
                boundary,
                trivial: false,
            });
        }
    }
    faces
}

fn census(rotation: &[Vec<Vertex>], faces: &[Face]) -> Vec<ComponentCensus> {
    let n = rotation.len();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<ComponentCensus> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let (mut vertices, mut degree_sum) = (0, 0);
        while let Some(x) = stack.pop() {
            vertices += 1;
            degree_sum += rotation[x].len();
            for &y in &rotation[x] {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        out.push(ComponentCensus {
            vertices,
            edges: degree_sum / 2,
            faces: 0,
        });
    }
    for face in faces {
        out[comp[face.boundary[0]]].faces += 1;
    }
    out
}

/// Wire format: `{"n": .., "rotation": [[..], ..], "labels": {..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub rotation: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, Label>,
}

impl TryFrom<GraphJson> for PlaneGraph {
    type Error = EmbedError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        PlaneGraph::with_labels(j.n, j.rotation, j.labels)
    }
}

impl From<&PlaneGraph> for GraphJson {
    fn from(g: &PlaneGraph) -> Self {
        GraphJson {
            n: g.n(),
            rotation: g.rotation.clone(),
            labels: g.labels.clone(),
        }
    }
}

impl Serialize for PlaneGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaneGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        PlaneGraph::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> PlaneGraph {
        let rot = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
        PlaneGraph::new(n, rot).unwrap()
    }

    fn path(n: usize) -> PlaneGraph {
        let rot = (0..n)
            .map(|i| {
                let mut r = Vec::new();
                if i > 0 {
                    r.push(i - 1);
                }
                if i + 1 < n {
                    r.push(i + 1);
                }
                r
            })
            .collect();
        PlaneGraph::new(n, rot).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = PlaneGraph::new(3, vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.faces().len(), 2);
        assert!(g.is_plane());
    }

    #[test]
    fn isolated_vertex_is_one_face() {
        let g = PlaneGraph::new(1, vec![vec![]]).unwrap();
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.faces()[0].edge_count(), 0);
        assert!(g.is_plane());
    }

    #[test]
    fn malformed_rotations_are_rejected() {
        assert_eq!(
            PlaneGraph::new(2, vec![vec![1], vec![0, 0]]),
            Err(EmbedError::DuplicateNeighbour {
                vertex: 1,
                neighbour: 0
            })
        );
        assert_eq!(
            PlaneGraph::new(2, vec![vec![1], vec![]]),
            Err(EmbedError::AsymmetricRotation(0, 1))
        );
        assert_eq!(
            PlaneGraph::new(2, vec![vec![0], vec![]]),
            Err(EmbedError::LoopEdge(0))
        );
        assert!(matches!(
            PlaneGraph::new(2, vec![vec![5], vec![]]),
            Err(EmbedError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn cycle_and_path_faces() {
        let c5 = cycle(5);
        assert_eq!(c5.faces().len(), 2);
        assert!(c5.faces().iter().all(|f| f.edge_count() == 5));
        let p4 = path(4);
        assert_eq!(p4.faces().len(), 1);
        assert_eq!(p4.faces()[0].edge_count(), 6);
    }

    #[test]
    fn consecutive_boundary_vertices_are_adjacent() {
        let g = cycle(7);
        for f in g.faces() {
            for i in 0..f.len() {
                assert!(g.has_edge(f.boundary[i], f.boundary[(i + 1) % f.len()]));
            }
        }
    }

    #[test]
    fn paths_through_on_cycle_and_path() {
        let c6 = cycle(6);
        let ps = c6.facial_paths_through(0, 1, 0);
        assert_eq!(ps.len(), 2);
        assert!(ps.len() <= 2 * c6.max_degree());
        assert!(ps.iter().all(|p| p.vertices[0] == 0));

        let p4 = path(4);
        let ps = p4.facial_paths_through(1, 2, 1);
        assert_eq!(
            ps,
            vec![FacialPath {
                vertices: vec![0, 1, 2, 3]
            }]
        );
    }

    #[test]
    fn paths_through_respects_bounds() {
        let c4 = cycle(4);
        assert!(c4.facial_paths_through(0, 3, 0).is_empty());
        assert!(c4.facial_paths_through(0, 2, 2).is_empty());
        assert_eq!(c4.facial_paths_through(0, 2, 0).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = cycle(5);
        let s = serde_json::to_string(&g).unwrap();
        let back: PlaneGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert!(serde_json::from_str::<PlaneGraph>(r#"{"n":2,"rotation":[[1],[0,0]]}"#).is_err());
    }
}
