//! Independent reference implementations used only by the tests.

#![allow(dead_code)]

use facial_thue::embed::PlaneGraph;
use facial_thue::generators::{generate_family, Family};

/// Successor of `u` in the rotation of `v`.
fn succ(g: &PlaneGraph, v: usize, u: usize) -> usize {
    let r = g.rotation(v);
    let i = r.iter().position(|&x| x == u).unwrap();
    r[(i + 1) % r.len()]
}

/// Checks every facial path by walking from each dart: after arriving at
/// `y` from `x`, continue to the successor of `x` around `y`. Stops at the
/// first repeated vertex and checks every even prefix.
pub fn naive_facially_nonrepetitive(g: &PlaneGraph, c: &[u32]) -> bool {
    for a in 0..g.n() {
        for &b in g.rotation(a) {
            let mut walk = vec![a, b];
            loop {
                let k = walk.len();
                if k % 2 == 0 {
                    let h = k / 2;
                    if (0..h).all(|i| c[walk[i]] > 0 && c[walk[i]] == c[walk[i + h]]) {
                        return false;
                    }
                }
                let next = succ(g, walk[k - 1], walk[k - 2]);
                if walk.contains(&next) {
                    break;
                }
                walk.push(next);
            }
        }
    }
    true
}

/// `a_m` by dynamic programming over the position of the last `+1`.
pub fn a_dp(m: usize, delta: u128) -> u128 {
    // closed: weight of prefixes ending in +1 (or empty);
    // open[k]: weight of prefixes ending in a -1 block of length k,
    // excluding the factor of that block.
    let mut closed: u128 = 1;
    let mut open: Vec<u128> = vec![0; m + 1];
    for _ in 0..m {
        let mut next_open = vec![0; m + 1];
        let mut next_closed = closed;
        for k in 1..=m {
            next_closed += open[k] * 2 * delta * k as u128;
        }
        next_open[1] = closed;
        for k in 1..m {
            next_open[k + 1] = open[k];
        }
        closed = next_closed;
        open = next_open;
    }
    closed + (1..=m).map(|k| open[k] * 2 * delta * k as u128).sum::<u128>()
}

fn cubic(delta: f64, x: f64) -> f64 {
    x * x * x - 3.0 * x * x - (2.0 * delta - 3.0) * x - 1.0
}

/// Dominant root by bisection on `[3, 2Δ + 4]`.
pub fn bisect_root(delta: u64) -> f64 {
    let d = delta as f64;
    let (mut lo, mut hi) = (3.0, 2.0 * d + 4.0);
    assert!(cubic(d, lo) < 0.0 && cubic(d, hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cubic(d, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The other two roots, from deflating by the dominant one.
pub fn deflated_pair(delta: u64, r: f64) -> ((f64, f64), (f64, f64)) {
    // x^3 - 3x^2 - (2Δ-3)x - 1 = (x - r)(x^2 + bx + c)
    let b = r - 3.0;
    let c = r * b - (2.0 * delta as f64 - 3.0);
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        let im = (-disc).sqrt() / 2.0;
        ((-b / 2.0, im), (-b / 2.0, -im))
    } else {
        let s = disc.sqrt();
        (((-b + s) / 2.0, 0.0), ((-b - s) / 2.0, 0.0))
    }
}

/// Generated graphs with at most `max_n` vertices, over all families.
pub fn small_family_graphs(max_n: usize) -> Vec<(Family, Vec<usize>, PlaneGraph)> {
    let mut cands: Vec<(Family, Vec<usize>)> = Vec::new();
    for n in 1..=max_n {
        cands.push((Family::Path, vec![n]));
        cands.push((Family::Cycle, vec![n]));
        cands.push((Family::Star, vec![n]));
        cands.push((Family::Wheel, vec![n]));
        cands.push((Family::Ladder, vec![n]));
        cands.push((Family::PendantLadder, vec![n]));
        cands.push((Family::Prism, vec![n]));
        cands.push((Family::Apic, vec![n]));
        cands.push((Family::Antiprism, vec![n]));
        for len in 1..=max_n {
            cands.push((Family::SubdividedStar, vec![n, len]));
        }
        for s in 0..=2 {
            for r in 0..=2 {
                cands.push((Family::SubdividedWheel, vec![n, s, r]));
            }
        }
        for m in 1..=max_n {
            cands.push((Family::Grid, vec![n, m]));
        }
    }
    cands
        .into_iter()
        .filter_map(|(f, p)| generate_family(f, &p).ok().map(|g| (f, p, g)))
        .filter(|(_, _, g)| g.n() <= max_n)
        .collect()
}
