//! Repetitions on colour sequences and the facial verifier.
//!
//! Colour `0` marks an uncoloured vertex and never takes part in a
//! repetition.

use serde::{Deserialize, Serialize};

use crate::embed::{all_distinct, FacialPath, PlaneGraph, Vertex};
use crate::Colour;

/// A repetitively coloured facial path found by the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub face: usize,
    pub start: usize,
    pub length: usize,
    pub vertices: Vec<Vertex>,
    /// The colour block that occurs twice.
    pub block: Vec<Colour>,
}

/// A repetition through a given vertex, oriented so that vertex lies in the
/// first half of the path at offset `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundRepetition {
    pub path: FacialPath,
    pub h: usize,
    pub q: usize,
    /// 1-based index of `path` in `facial_paths_through(v, h, q)`.
    pub o: usize,
}

/// `r_1 .. r_2n` with `n >= 1`, all entries positive and `r_i = r_{n+i}`.
pub fn is_repetition(seq: &[Colour]) -> bool {
    let len = seq.len();
    if len == 0 || len % 2 == 1 {
        return false;
    }
    let h = len / 2;
    seq.iter().all(|&c| c > 0) && (0..h).all(|i| seq[i] == seq[i + h])
}

fn colours_of(c: &[Colour], vs: &[Vertex]) -> Vec<Colour> {
    vs.iter().map(|&v| c[v]).collect()
}

fn path_is_repetition(c: &[Colour], vs: &[Vertex]) -> bool {
    let h = vs.len() / 2;
    vs.len().is_multiple_of(2)
        && h > 0
        && (0..h).all(|i| {
            let a = c[vs[i]];
            a > 0 && a == c[vs[i + h]]
        })
}

/// Checks every facial path of every face.
///
/// Returns the violation that is first by `(face, start, length)`.
pub fn verify_facial_nonrepetitive(g: &PlaneGraph, c: &[Colour]) -> Result<(), Violation> {
    assert_eq!(c.len(), g.n(), "colouring length must match vertex count");
    for (f, face) in g.faces().iter().enumerate() {
        let walk = face.edge_count();
        for start in 0..walk {
            // Grow the window while it stays a simple path.
            let mut window: Vec<Vertex> = Vec::new();
            for len in 1..=walk {
                let v = face.boundary[(start + len - 1) % walk];
                if window.contains(&v) {
                    break;
                }
                window.push(v);
                if len % 2 == 0 && path_is_repetition(c, &window) {
                    return Err(Violation {
                        face: f,
                        start,
                        length: len,
                        vertices: window.clone(),
                        block: colours_of(c, &window[..len / 2]),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Like [`verify_facial_nonrepetitive`], restricted to faces through `v`.
pub fn verify_faces_through(g: &PlaneGraph, c: &[Colour], v: Vertex) -> bool {
    let mut faces: Vec<usize> = g.incidence(v).iter().map(|&(f, _)| f).collect();
    faces.dedup();
    faces.into_iter().all(|f| {
        let face = &g.faces()[f];
        let walk = face.edge_count();
        (0..walk).all(|start| {
            (1..=walk / 2).all(|h| {
                let w = face.window(start, 2 * h);
                !all_distinct(&w) || !path_is_repetition(c, &w)
            })
        })
    })
}

/// Whether the window `b[at(0)], .., b[at(2h-1)]` is a repetitively
/// coloured simple path. Colours are compared first since they usually
/// differ early.
fn window_repeats(c: &[Colour], b: &[Vertex], h: usize, at: impl Fn(usize) -> usize) -> bool {
    for i in 0..h {
        let x = c[b[at(i)]];
        if x == 0 || x != c[b[at(i + h)]] {
            return false;
        }
    }
    let w: Vec<Vertex> = (0..2 * h).map(|i| b[at(i)]).collect();
    all_distinct(&w)
}

fn repeats_with_offset(g: &PlaneGraph, c: &[Colour], v: Vertex, h: usize, q: usize) -> bool {
    g.incidence(v).iter().any(|&(f, p)| {
        let b = &g.faces()[f].boundary;
        let walk = g.faces()[f].edge_count();
        if walk < 2 * h {
            return false;
        }
        let fwd = window_repeats(c, b, h, |i| (p + walk - q + i) % walk);
        fwd || window_repeats(c, b, h, |i| (p + q + 2 * walk - i) % walk)
    })
}

/// Finds a repetitively coloured facial path through `v` with `v` in its
/// first half, minimising `(h, q, o)`.
pub fn find_repetition_through(g: &PlaneGraph, c: &[Colour], v: Vertex) -> Option<FoundRepetition> {
    if c[v] == 0 {
        return None;
    }
    let hmax = g.max_half_length_through(v);
    for h in 1..=hmax {
        for q in 0..h {
            if !repeats_with_offset(g, c, v, h, q) {
                continue;
            }
            let paths = g.facial_paths_through(v, h, q);
            let i = paths
                .iter()
                .position(|p| path_is_repetition(c, &p.vertices))
                .expect("scan and canonical list agree");
            let path = paths.into_iter().nth(i).unwrap();
            return Some(FoundRepetition { path, h, q, o: i + 1 });
        }
    }
    None
}
