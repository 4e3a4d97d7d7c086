//! Geometric placement. Cycle vertices sit equally spaced on the unit
//! circle; tree vertices are placed by barycentric relaxation inside an
//! inscribed regular polygon, which a radial map identifies with the disk.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::RealizationError;
use crate::graph::VertexId;
use crate::planarity::{Dart, DiskEmbedding};

pub type Point = [f64; 2];

/// Minimum number of polygon corners.
const MIN_CORNERS: usize = 256;
/// Minimum number of polygon edges per cycle edge.
const MIN_SUBDIVISION: usize = 2;
const RELAX_TOL: f64 = 1e-14;
const RELAX_MAX_SWEEPS: usize = 200_000;

/// Regular polygon `Q` inscribed in the unit circle, its first corner at
/// 90 degrees; corner `i * per_edge` is cycle vertex `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub corners: usize,
    pub per_edge: usize,
}

impl Frame {
    pub fn for_cycle(len: usize) -> Self {
        let per_edge = MIN_SUBDIVISION.max(MIN_CORNERS.div_ceil(len));
        Frame { corners: per_edge * len, per_edge }
    }

    pub fn corner_angle(&self, j: usize) -> f64 {
        FRAC_PI_2 + TAU * j as f64 / self.corners as f64
    }

    pub fn corner(&self, j: usize) -> Point {
        let a = self.corner_angle(j % self.corners);
        [a.cos(), a.sin()]
    }

    /// Index of the polygon edge whose angular sector contains `theta`.
    pub fn sector(&self, theta: f64) -> usize {
        let s = (theta - FRAC_PI_2).rem_euclid(TAU) / TAU * self.corners as f64;
        (s.floor() as usize).min(self.corners - 1)
    }

    /// Distance from the origin to the polygon boundary along `theta`.
    pub fn radius(&self, theta: f64) -> f64 {
        let j = self.sector(theta);
        let mid = self.corner_angle(j) + PI / self.corners as f64;
        (PI / self.corners as f64).cos() / (theta - mid).cos()
    }

    /// Disk to polygon.
    pub fn to_q(&self, p: Point) -> Point {
        let theta = p[1].atan2(p[0]);
        let r = self.radius(theta);
        [p[0] * r, p[1] * r]
    }

    /// Polygon to disk.
    pub fn from_q(&self, q: Point) -> Point {
        let theta = q[1].atan2(q[0]);
        let r = self.radius(theta);
        [q[0] / r, q[1] / r]
    }
}

pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let eps = 1e-12;
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)) {
        return true;
    }
    let on = |p: Point, q: Point, r: Point, s: f64| {
        s.abs() <= eps
            && r[0] >= p[0].min(q[0]) - eps
            && r[0] <= p[0].max(q[0]) + eps
            && r[1] >= p[1].min(q[1]) - eps
            && r[1] <= p[1].max(q[1]) + eps
    };
    on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4)
}

/// Polygon-space positions of all vertices.
pub fn q_positions(emb: &DiskEmbedding, frame: &Frame) -> Vec<Point> {
    emb.coords.iter().map(|&(x, y)| frame.to_q([x, y])).collect()
}

/// Direction of dart `d` leaving its tail, as an angle.
fn dart_angle(emb: &DiskEmbedding, frame: &Frame, q: &[Point], on_gamma: &BTreeSet<usize>, d: Dart) -> f64 {
    let u = emb.tail(d);
    let target = if on_gamma.contains(&emb.edge(d)) {
        let p = emb.gamma.position(u).unwrap();
        let j = p * frame.per_edge;
        if emb.gamma.edges[p] == emb.edge(d) {
            frame.corner(j + 1)
        } else {
            frame.corner(j + frame.corners - 1)
        }
    } else {
        q[emb.head(d)]
    };
    (target[1] - q[u][1]).atan2(target[0] - q[u][0])
}

fn rotation_matches(emb: &DiskEmbedding, frame: &Frame, q: &[Point]) -> bool {
    let on_gamma = emb.gamma.edge_set();
    for rot in &emb.rotation {
        if rot.len() < 3 {
            continue;
        }
        let angles: Vec<f64> = rot.iter().map(|&d| dart_angle(emb, frame, q, &on_gamma, d)).collect();
        // counterclockwise turns between consecutive darts add up to one full turn
        let total: f64 = (0..angles.len())
            .map(|i| {
                let t = (angles[(i + 1) % angles.len()] - angles[i]).rem_euclid(TAU);
                if t < 1e-12 {
                    TAU
                } else {
                    t
                }
            })
            .sum();
        if (total - TAU).abs() > 1e-6 {
            return false;
        }
    }
    true
}

fn crossing_free(emb: &DiskEmbedding, q: &[Point]) -> bool {
    let on_gamma = emb.gamma.edge_set();
    let tree_edges: Vec<(VertexId, VertexId)> =
        (0..emb.edges.len()).filter(|e| !on_gamma.contains(e)).map(|e| emb.edges[e]).collect();
    for (i, &(a, b)) in tree_edges.iter().enumerate() {
        for &(c, d) in &tree_edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segments_cross(q[a], q[b], q[c], q[d]) {
                return false;
            }
        }
    }
    true
}

/// Number of cycle vertices reachable from `start` through non-cycle edges
/// without passing `blocked`.
fn reachable_boundary(emb: &DiskEmbedding, on_gamma: &BTreeSet<usize>, start: VertexId, blocked: VertexId) -> usize {
    let mut seen = BTreeSet::from([start, blocked]);
    let mut queue = VecDeque::from([start]);
    let mut count = 0;
    while let Some(x) = queue.pop_front() {
        if emb.gamma.position(x).is_some() {
            count += 1;
            continue;
        }
        for &d in &emb.rotation[x] {
            if on_gamma.contains(&emb.edge(d)) {
                continue;
            }
            let y = emb.head(d);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    count
}

fn relax(emb: &DiskEmbedding, frame: &Frame, weighted: bool) -> Vec<Point> {
    let n = emb.vertex_count();
    let on_gamma = emb.gamma.edge_set();
    let mut q = vec![[0.0, 0.0]; n];
    let mut free = Vec::new();
    for v in 0..n {
        match emb.gamma.position(v) {
            Some(p) => q[v] = frame.corner(p * frame.per_edge),
            None => free.push(v),
        }
    }
    let nbrs: Vec<Vec<(VertexId, f64)>> = (0..n)
        .map(|v| {
            emb.rotation[v]
                .iter()
                .map(|&d| {
                    let u = emb.head(d);
                    let w = if weighted { reachable_boundary(emb, &on_gamma, u, v) as f64 } else { 1.0 };
                    (u, w.max(1.0))
                })
                .collect()
        })
        .collect();
    for _ in 0..RELAX_MAX_SWEEPS {
        let mut change: f64 = 0.0;
        for &v in &free {
            let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
            for &(u, w) in &nbrs[v] {
                sx += w * q[u][0];
                sy += w * q[u][1];
                sw += w;
            }
            let p = [sx / sw, sy / sw];
            change = change.max((p[0] - q[v][0]).abs().max((p[1] - q[v][1]).abs()));
            q[v] = p;
        }
        if change < RELAX_TOL {
            break;
        }
    }
    q
}

/// Fills `coords` with unit-disk positions and checks the straight-line
/// drawing in polygon space against the rotation system.
pub fn assign_coords(emb: &DiskEmbedding) -> Result<DiskEmbedding, RealizationError> {
    let frame = Frame::for_cycle(emb.gamma.len());
    for weighted in [false, true] {
        let q = relax(emb, &frame, weighted);
        let inside = (0..q.len()).all(|v| {
            emb.gamma.position(v).is_some() || {
                let p = frame.from_q(q[v]);
                p[0].hypot(p[1]) < 1.0 - 1e-9
            }
        });
        if inside && crossing_free(emb, &q) && rotation_matches(emb, &frame, &q) {
            let mut out = emb.clone();
            out.coords = (0..q.len())
                .map(|v| match emb.gamma.position(v) {
                    Some(p) => {
                        let a = frame.corner_angle(p * frame.per_edge);
                        (a.cos(), a.sin())
                    }
                    None => {
                        let p = frame.from_q(q[v]);
                        (p[0], p[1])
                    }
                })
                .collect();
            return Ok(out);
        }
    }
    Err(RealizationError::DegenerateDrawing("relaxed drawing disagrees with the embedding".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{decompose, Budget, PoGraph};
    use crate::planarity::build_embedding;
    use crate::structure::find_cr_cycles;

    fn embed(g: &PoGraph) -> DiskEmbedding {
        let c = find_cr_cycles(g, Budget::default()).unwrap().remove(0);
        let dec = decompose(g.graph(), &c).unwrap();
        assign_coords(&build_embedding(g.graph(), &dec).unwrap()).unwrap()
    }

    fn angle_of(emb: &DiskEmbedding, v: VertexId) -> f64 {
        let (x, y) = emb.coords[v];
        y.atan2(x).to_degrees().rem_euclid(360.0)
    }

    #[test]
    fn frame_round_trip() {
        let f = Frame::for_cycle(4);
        assert_eq!(f.corners, 256);
        for k in 0..1000 {
            let t = k as f64 * 0.0123;
            let p = [0.7 * t.cos(), 0.7 * t.sin()];
            let back = f.from_q(f.to_q(p));
            assert!((back[0] - p[0]).abs() < 1e-14 && (back[1] - p[1]).abs() < 1e-14);
            let b = f.to_q([t.cos(), t.sin()]);
            // boundary lands on the polygon edge
            let j = f.sector(t);
            assert!(cross(f.corner(j), f.corner(j + 1), b).abs() < 1e-12);
        }
        assert_eq!(Frame::for_cycle(200).per_edge, 2);
    }

    #[test]
    fn g1_positions() {
        let g = fixtures::g1();
        let emb = embed(&g);
        let angles: Vec<f64> = ["m", "a", "M", "b"].iter().map(|s| angle_of(&emb, g.id(s).unwrap())).collect();
        // the cycle may be traversed from any start, but spacing is 90 degrees
        for i in 0..4 {
            let d = (angles[(i + 1) % 4] - angles[i]).rem_euclid(360.0);
            assert!((d - 90.0).abs() < 1e-9 || (d - 270.0).abs() < 1e-9, "{angles:?}");
        }
        let (a, b) = (emb.coords[g.id("a").unwrap()], emb.coords[g.id("b").unwrap()]);
        assert!((a.0 + b.0).abs() < 1e-12 && (a.1 + b.1).abs() < 1e-12);
    }

    #[test]
    fn g3_centre_at_origin() {
        let g = fixtures::g3();
        let emb = embed(&g);
        let (x, y) = emb.coords[g.id("c").unwrap()];
        assert!(x.hypot(y) < 1e-12);
        for v in 0..8 {
            let (x, y) = emb.coords[v];
            assert!((x.hypot(y) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parallel_pair_is_antipodal() {
        let g = fixtures::parallel_pair();
        let c = find_cr_cycles(&g, Budget::default()).unwrap().remove(0);
        let dec = decompose(g.graph(), &c).unwrap();
        let emb = assign_coords(&build_embedding(g.graph(), &dec).unwrap()).unwrap();
        let (a, b) = (emb.coords[0], emb.coords[1]);
        assert!((a.0 + b.0).abs() < 1e-12 && (a.1 + b.1).abs() < 1e-12);
    }

    #[test]
    fn crossing_detection() {
        assert!(segments_cross([0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]));
        assert!(!segments_cross([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]));
        assert!(segments_cross([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]));
    }
}
