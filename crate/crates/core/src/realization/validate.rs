//! Numerical checks of a realized function: continuity across face
//! boundaries, constancy on the level trees, and the location of extrema.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::faces::DiskFunction;
use super::layout::Point;
use crate::graph::{PoGraph, VertexId};
use crate::planarity::SegmentKind;

fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Largest disagreement between the two face maps meeting along a tree
/// edge, and between a face map and the boundary values along an arc,
/// over `samples` random boundary points per face.
pub fn continuity_defect(f: &DiskFunction, samples: usize, seed: u64) -> f64 {
    let emb = &f.embedding;
    let face_of = emb.face_of_dart();
    let mut map_of_face = vec![None; emb.faces.len()];
    for (m, fm) in f.face_maps.iter().enumerate() {
        map_of_face[fm.face] = Some(m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for (m, fm) in f.face_maps.iter().enumerate() {
        let face = &emb.faces[fm.face];
        let darts: Vec<(usize, bool)> =
            face.segments.iter().flat_map(|s| s.darts.iter().map(move |&d| (d, s.kind == SegmentKind::Arc))).collect();
        for _ in 0..samples {
            let (d, arc) = darts[rng.gen_range(0..darts.len())];
            let t: f64 = rng.gen();
            let (u, v) = (emb.tail(d), emb.head(d));
            if arc {
                let p = emb.gamma.position(u).unwrap();
                let k = f.frame.per_edge;
                let s = t * k as f64;
                let j = (s.floor() as usize).min(k - 1);
                let q = lerp(f.frame.corner(p * k + j), f.frame.corner(p * k + j + 1), s - j as f64);
                let disk = f.frame.from_q(q);
                let r = disk[0].hypot(disk[1]);
                let on_circle = [disk[0] / r, disk[1] / r];
                let expected = f.heights.value(u) * (1.0 - t) + f.heights.value(v) * t;
                worst = worst.max((f.face_value(m, disk) - expected).abs());
                worst = worst.max((f.evaluate(on_circle).unwrap() - expected).abs());
            } else {
                let other = map_of_face[face_of[d ^ 1]].expect("tree edges separate inner faces");
                let disk = f.frame.from_q(lerp(f.q_of(u), f.q_of(v), t));
                let a = f.face_value(m, disk);
                let b = f.face_value(other, disk);
                let c = f.evaluate(disk).unwrap();
                worst = worst.max((a - b).abs()).max((a - c).abs());
            }
        }
    }
    worst
}

/// Largest deviation of `f` from the tree level along every tree edge,
/// seen from the graph and from both adjacent faces.
pub fn level_defect(f: &DiskFunction, samples_per_edge: usize) -> f64 {
    let emb = &f.embedding;
    let face_of = emb.face_of_dart();
    let mut map_of_face = vec![None; emb.faces.len()];
    for (m, fm) in f.face_maps.iter().enumerate() {
        map_of_face[fm.face] = Some(m);
    }
    let mut worst: f64 = 0.0;
    for (e, &(u, v)) in emb.edges.iter().enumerate() {
        if f.edge_tree[e].is_none() {
            continue;
        }
        let level = f.heights.value(u);
        for s in 0..=samples_per_edge {
            let t = s as f64 / samples_per_edge as f64;
            let disk = f.frame.from_q(lerp(f.q_of(u), f.q_of(v), t));
            worst = worst.max((f.evaluate(disk).unwrap() - level).abs());
            for d in [2 * e, 2 * e + 1] {
                if let Some(m) = map_of_face[face_of[d]] {
                    worst = worst.max((f.face_value(m, disk) - level).abs());
                }
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteriorExtremum {
    pub face: usize,
    pub value: f64,
    pub range: (f64, f64),
}

/// Samples each face on an `n` by `n` grid over its bounding box and
/// reports faces where an interior sample leaves the range of the
/// boundary values.
pub fn interior_extrema(f: &DiskFunction, n: usize) -> Vec<InteriorExtremum> {
    let mut out = Vec::new();
    for fm in &f.face_maps {
        let (lo, hi) = fm.boundary_range();
        let xs = fm.polygon.iter().map(|p| p[0]);
        let ys = fm.polygon.iter().map(|p| p[1]);
        let (x0, x1) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
        let (y0, y1) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
        for i in 0..n {
            for j in 0..n {
                let q = [x0 + (x1 - x0) * (i as f64 + 0.5) / n as f64, y0 + (y1 - y0) * (j as f64 + 0.5) / n as f64];
                if !fm.contains_q(q) {
                    continue;
                }
                let v = fm.value_at_q(q);
                if v < lo - 1e-12 || v > hi + 1e-12 {
                    out.push(InteriorExtremum { face: fm.face, value: v, range: (lo, hi) });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryExtrema {
    /// Cycle vertices where the boundary restriction has a local extremum.
    pub extrema: Vec<VertexId>,
    /// Cycle vertices of even degree.
    pub even_degree: Vec<VertexId>,
}

impl BoundaryExtrema {
    pub fn consistent(&self) -> bool {
        self.extrema == self.even_degree && self.extrema.len().is_multiple_of(2)
    }
}

/// Local extrema of `f` on the circle, sampled at the cycle vertices and
/// the arc midpoints.
pub fn boundary_extrema(f: &DiskFunction, g: &PoGraph) -> BoundaryExtrema {
    let gamma = &f.embedding.gamma;
    let k = gamma.len();
    let mid = |p: usize| {
        let a = f.frame.corner_angle(p * f.frame.per_edge) + std::f64::consts::PI / k as f64;
        f.evaluate([a.cos(), a.sin()]).unwrap()
    };
    let mut extrema = Vec::new();
    for p in 0..k {
        let v = gamma.vertices[p];
        let a = f.frame.corner_angle(p * f.frame.per_edge);
        let here = f.evaluate([a.cos(), a.sin()]).unwrap();
        let (before, after) = (mid((p + k - 1) % k), mid(p));
        if (before < here && after < here) || (before > here && after > here) {
            extrema.push(v);
        }
    }
    let mut even_degree: Vec<VertexId> =
        gamma.vertices.iter().copied().filter(|&v| g.degree(v).is_multiple_of(2)).collect();
    extrema.sort_unstable();
    even_degree.sort_unstable();
    BoundaryExtrema { extrema, even_degree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::realization::{realize, RealizeOptions};

    #[test]
    fn fixtures_pass_numeric_checks() {
        for g in [fixtures::g1(), fixtures::g3(), fixtures::g4()] {
            let f = realize(&g, RealizeOptions::default()).unwrap().function;
            assert!(continuity_defect(&f, 1000, 7) <= 1e-9);
            assert!(level_defect(&f, 50) <= 1e-12);
            assert!(interior_extrema(&f, 32).is_empty());
            let b = boundary_extrema(&f, &g);
            assert!(b.consistent(), "{b:?}");
        }
    }

    #[test]
    fn g3_boundary_extrema() {
        let g = fixtures::g3();
        let f = realize(&g, RealizeOptions::default()).unwrap().function;
        let b = boundary_extrema(&f, &g);
        let names: Vec<&str> = b.extrema.iter().map(|&v| g.name(v)).collect();
        assert_eq!(names, vec!["M1", "m1", "M2", "m2"]);
    }
}
