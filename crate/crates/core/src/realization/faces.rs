//! Extension of the vertex heights over every face, and point evaluation.
//!
//! Each inner face is a convex polygon in the frame polygon: cycle edges are
//! subdivided along the frame, tree edges are straight. Every polygon
//! corner carries model coordinates `(X, Y)` fixed by the boundary values;
//! the face map is `L(X, Y)` with `L = c(1 - Y) + c_i Y` on the triangle
//! model and `L = c_i(1 - Y) + c_j Y` on the square model. Inside, `(X, Y)`
//! is interpolated over a fan triangulation whose apex lies on an arc, so
//! no triangle is flat at a tree level and no extremum is interior.

use serde::{Deserialize, Serialize};

use super::heights::HeightAssignment;
use super::layout::{cross, q_positions, Frame, Point};
use super::RealizationError;
use crate::graph::{EdgeId, VertexId};
use crate::planarity::{DiskEmbedding, SegmentKind};

const BOUNDARY_TOL: f64 = 1e-12;
const GRID: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FaceModel {
    /// One arc, through the extremum vertex at level `c`; the tree path is
    /// at level `ci`.
    Triangle { extremum: VertexId, tree: usize, c: f64, ci: f64 },
    /// Two arcs; the tree paths sit at `ci` (model `Y = 0`) and `cj` (`Y = 1`).
    Square { first_tree: usize, second_tree: usize, ci: f64, cj: f64 },
}

impl FaceModel {
    pub fn level(&self, xy: Point) -> f64 {
        let y = xy[1];
        match *self {
            FaceModel::Triangle { c, ci, .. } => c * (1.0 - y) + ci * y,
            FaceModel::Square { ci, cj, .. } => ci * (1.0 - y) + cj * y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceMap {
    /// Index into the embedding's faces.
    pub face: usize,
    pub model: FaceModel,
    /// Frame-space corners, counterclockwise.
    pub polygon: Vec<Point>,
    /// Model coordinates of the corners.
    pub model_coords: Vec<Point>,
    /// Boundary values at the corners.
    pub values: Vec<f64>,
    pub triangles: Vec<[usize; 3]>,
}

impl FaceMap {
    fn barycentric(&self, t: usize, q: Point) -> [f64; 3] {
        let [a, b, c] = self.triangles[t].map(|i| self.polygon[i]);
        let area = cross(a, b, c);
        [cross(q, b, c) / area, cross(a, q, c) / area, cross(a, b, q) / area]
    }

    fn interpolate(&self, t: usize, w: [f64; 3]) -> f64 {
        let idx = self.triangles[t];
        let mut xy = [0.0, 0.0];
        for k in 0..3 {
            xy[0] += w[k] * self.model_coords[idx[k]][0];
            xy[1] += w[k] * self.model_coords[idx[k]][1];
        }
        self.model.level(xy)
    }

    /// Face map at a frame point, extrapolating from the nearest triangle
    /// when `q` lies just outside.
    pub fn value_at_q(&self, q: Point) -> f64 {
        let (t, w) = (0..self.triangles.len())
            .map(|t| (t, self.barycentric(t, q)))
            .max_by(|a, b| min3(a.1).total_cmp(&min3(b.1)))
            .expect("face has triangles");
        self.interpolate(t, w)
    }

    pub fn contains_q(&self, q: Point) -> bool {
        (0..self.polygon.len())
            .all(|i| cross(self.polygon[i], self.polygon[(i + 1) % self.polygon.len()], q) >= -BOUNDARY_TOL)
    }

    pub fn boundary_range(&self) -> (f64, f64) {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

fn min3(w: [f64; 3]) -> f64 {
    w[0].min(w[1]).min(w[2])
}

/// Continuous function on the disk built from an embedding with
/// coordinates and a height assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskFunction {
    pub embedding: DiskEmbedding,
    pub heights: HeightAssignment,
    pub frame: Frame,
    pub face_maps: Vec<FaceMap>,
    /// Tree index of every non-cycle edge.
    pub edge_tree: Vec<Option<usize>>,
    q: Vec<Point>,
    grid: Vec<Vec<(usize, usize)>>,
}

/// One corner of a face polygon under construction.
struct Corner {
    q: Point,
    value: f64,
}

fn polyline_fractions(points: &[Point]) -> Vec<f64> {
    let mut acc = vec![0.0];
    for w in points.windows(2) {
        let d = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        acc.push(acc.last().unwrap() + d);
    }
    let total = *acc.last().unwrap();
    acc.iter().map(|a| if total > 0.0 { a / total } else { 0.0 }).collect()
}

fn violation(face: usize, msg: impl Into<String>) -> RealizationError {
    RealizationError::ArcStructureViolation { face, detail: msg.into() }
}

fn check_unit(face: usize, psi: f64) -> Result<f64, RealizationError> {
    if !(-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&psi) {
        return Err(violation(face, format!("arc value outside the level range (parameter {psi})")));
    }
    Ok(psi.clamp(0.0, 1.0))
}

/// Builds the face maps.
pub fn extend_to_faces(
    emb: &DiskEmbedding,
    heights: &HeightAssignment,
    edge_tree: Vec<Option<usize>>,
) -> Result<DiskFunction, RealizationError> {
    let frame = Frame::for_cycle(emb.gamma.len());
    let mut q = q_positions(emb, &frame);
    for (p, &v) in emb.gamma.vertices.iter().enumerate() {
        q[v] = frame.corner(p * frame.per_edge);
    }
    let k = frame.per_edge;
    let mut maps = Vec::new();
    for (fi, face) in emb.inner_faces() {
        let segs = &face.segments;
        let arcs = face.arc_count();
        if segs.iter().all(|s| s.kind == SegmentKind::Arc) {
            return Err(violation(fi, "face has no tree path"));
        }
        if arcs != 1 && arcs != 2 {
            return Err(violation(fi, format!("face has {arcs} boundary arcs")));
        }
        // corners per segment; a segment's last point is the next one's first
        let mut seg_corners: Vec<Vec<Corner>> = Vec::new();
        for s in segs {
            let mut cs = Vec::new();
            for &d in &s.darts {
                let (u, v) = (emb.tail(d), emb.head(d));
                cs.push(Corner { q: q[u], value: heights.value(u) });
                if s.kind == SegmentKind::Arc {
                    let p = emb.gamma.position(u).unwrap();
                    for j in 1..k {
                        let t = j as f64 / k as f64;
                        cs.push(Corner {
                            q: frame.corner(p * k + j),
                            value: heights.value(u) * (1.0 - t) + heights.value(v) * t,
                        });
                    }
                }
            }
            seg_corners.push(cs);
        }
        let tree_of_seg = |i: usize| match segs[i].kind {
            SegmentKind::TreePath(t) => t,
            SegmentKind::Arc => unreachable!(),
        };
        let mut polygon = Vec::new();
        let mut model_coords = Vec::new();
        let mut values = Vec::new();
        let apex;
        let model;
        if arcs == 1 {
            let alpha = &seg_corners[0];
            let beta = &seg_corners[1];
            let ci = beta[0].value;
            let interior: Vec<usize> = (1..alpha.len()).filter(|&i| i % k == 0).collect();
            if interior.len() != 1 {
                return Err(violation(fi, format!("single arc carries {} interior vertices", interior.len())));
            }
            let iy = interior[0];
            let y_vertex = emb.head(segs[0].darts[iy / k - 1]);
            let c = alpha[iy].value;
            if c == ci {
                return Err(RealizationError::EqualLevels { face: fi, level: c });
            }
            for (i, cn) in alpha.iter().enumerate() {
                let psi = check_unit(fi, (cn.value - c) / (ci - c))?;
                model_coords.push(if i <= iy { [0.0, psi] } else { [psi, psi] });
                polygon.push(cn.q);
                values.push(cn.value);
            }
            let mut pts: Vec<Point> = beta.iter().map(|c| c.q).collect();
            pts.push(alpha[0].q);
            let frac = polyline_fractions(&pts);
            for (i, cn) in beta.iter().enumerate() {
                model_coords.push([1.0 - frac[i], 1.0]);
                polygon.push(cn.q);
                values.push(cn.value);
            }
            apex = iy;
            model = FaceModel::Triangle { extremum: y_vertex, tree: tree_of_seg(1), c, ci };
        } else {
            let ci = seg_corners[1][0].value;
            let cj = seg_corners[3][0].value;
            if ci == cj {
                return Err(RealizationError::EqualLevels { face: fi, level: ci });
            }
            for (si, cs) in seg_corners.iter().enumerate() {
                let next_first = seg_corners[(si + 1) % 4][0].q;
                let mut pts: Vec<Point> = cs.iter().map(|c| c.q).collect();
                pts.push(next_first);
                let frac = polyline_fractions(&pts);
                for (i, cn) in cs.iter().enumerate() {
                    let xy = match si {
                        0 => [0.0, check_unit(fi, (cn.value - ci) / (cj - ci))?],
                        1 => [frac[i], 0.0],
                        2 => [1.0, check_unit(fi, (cn.value - ci) / (cj - ci))?],
                        _ => [1.0 - frac[i], 1.0],
                    };
                    if si % 2 == 0 && cs.len() != k {
                        return Err(violation(fi, "an arc of a two-arc face passes through a vertex"));
                    }
                    model_coords.push(xy);
                    polygon.push(cn.q);
                    values.push(cn.value);
                }
            }
            apex = k / 2;
            model = FaceModel::Square { first_tree: tree_of_seg(1), second_tree: tree_of_seg(3), ci, cj };
        }
        let len = polygon.len();
        let mut triangles = Vec::new();
        for j in 0..len {
            let j1 = (j + 1) % len;
            if j == apex || j1 == apex {
                continue;
            }
            let area = cross(polygon[apex], polygon[j], polygon[j1]);
            if area < -1e-14 {
                return Err(RealizationError::DegenerateDrawing(format!("face {fi} is not convex")));
            }
            if area > 1e-14 {
                triangles.push([apex, j, j1]);
            }
        }
        let map = FaceMap { face: fi, model, polygon, model_coords, values, triangles };
        for (i, &v) in map.values.iter().enumerate() {
            let l = map.model.level(map.model_coords[i]);
            if (l - v).abs() > BOUNDARY_TOL {
                return Err(violation(fi, format!("model level {l} differs from boundary value {v}")));
            }
        }
        maps.push(map);
    }
    let mut grid = vec![Vec::new(); GRID * GRID];
    for (mi, m) in maps.iter().enumerate() {
        for (ti, tri) in m.triangles.iter().enumerate() {
            let pts = tri.map(|i| m.polygon[i]);
            let (x0, x1) = (
                pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
                pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max),
            );
            let (y0, y1) = (
                pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
                pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max),
            );
            let (cx0, cx1) = (cell(x0 - 1e-9), cell(x1 + 1e-9));
            let (cy0, cy1) = (cell(y0 - 1e-9), cell(y1 + 1e-9));
            for cx in cx0..=cx1 {
                for cy in cy0..=cy1 {
                    grid[cy * GRID + cx].push((mi, ti));
                }
            }
        }
    }
    Ok(DiskFunction { embedding: emb.clone(), heights: heights.clone(), frame, face_maps: maps, edge_tree, q, grid })
}

fn cell(x: f64) -> usize {
    (((x + 1.0) / 2.0 * GRID as f64).floor().max(0.0) as usize).min(GRID - 1)
}

fn segment_distance(a: Point, b: Point, p: Point) -> (f64, f64) {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let (x, y) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - x).hypot(p[1] - y), t)
}

impl DiskFunction {
    /// Frame-space position of a vertex.
    pub fn q_of(&self, v: VertexId) -> Point {
        self.q[v]
    }

    /// Value on the boundary circle at angle `theta`.
    pub fn boundary_value(&self, theta: f64) -> f64 {
        let f = &self.frame;
        let j = f.sector(theta);
        let (a, b) = (f.corner(j), f.corner(j + 1));
        let q = f.to_q([theta.cos(), theta.sin()]);
        let s = ((q[0] - a[0]).hypot(q[1] - a[1]) / (b[0] - a[0]).hypot(b[1] - a[1])).clamp(0.0, 1.0);
        let k = f.per_edge;
        let (p, local) = (j / k, j % k);
        let gamma = &self.embedding.gamma;
        let u = gamma.vertices[p];
        let v = gamma.vertices[(p + 1) % gamma.len()];
        let t = (local as f64 + s) / k as f64;
        self.heights.value(u) * (1.0 - t) + self.heights.value(v) * t
    }

    /// Edge containing `q` in frame space, with its level, if any.
    fn on_tree_edge(&self, q: Point) -> Option<(EdgeId, f64)> {
        self.embedding.edges.iter().enumerate().find_map(|(e, &(u, v))| {
            self.edge_tree[e]?;
            let (d, _) = segment_distance(self.q[u], self.q[v], q);
            (d <= BOUNDARY_TOL).then(|| (e, self.heights.value(u)))
        })
    }

    /// Face map index and barycentric weights of the triangle holding `q`.
    fn locate(&self, q: Point) -> Option<(usize, usize, [f64; 3])> {
        let candidates = &self.grid[cell(q[1]) * GRID + cell(q[0])];
        let best = candidates
            .iter()
            .map(|&(m, t)| (m, t, self.face_maps[m].barycentric(t, q)))
            .max_by(|a, b| min3(a.2).total_cmp(&min3(b.2)));
        match best {
            Some(b) if min3(b.2) >= -1e-9 => Some(b),
            _ => None,
        }
    }

    /// Index into `face_maps` of the face containing `p`, if `p` is not
    /// on the graph.
    pub fn face_at(&self, p: Point) -> Option<usize> {
        let q = self.frame.to_q(p);
        if p[0].hypot(p[1]) >= 1.0 - BOUNDARY_TOL || self.on_tree_edge(q).is_some() {
            return None;
        }
        self.locate(q).map(|(m, _, _)| m)
    }

    pub fn evaluate(&self, p: Point) -> Result<f64, RealizationError> {
        let r = p[0].hypot(p[1]);
        if r.is_nan() || r > 1.0 + BOUNDARY_TOL {
            return Err(RealizationError::OutsideDisk(p));
        }
        if r >= 1.0 - BOUNDARY_TOL {
            return Ok(self.boundary_value(p[1].atan2(p[0])));
        }
        let q = self.frame.to_q(p);
        if let Some((_, c)) = self.on_tree_edge(q) {
            return Ok(c);
        }
        match self.locate(q) {
            Some((m, t, w)) => Ok(self.face_maps[m].interpolate(t, w)),
            None => {
                let m = (0..self.face_maps.len())
                    .min_by(|&a, &b| self.polygon_gap(a, q).total_cmp(&self.polygon_gap(b, q)))
                    .ok_or(RealizationError::OutsideDisk(p))?;
                Ok(self.face_maps[m].value_at_q(q))
            }
        }
    }

    fn polygon_gap(&self, m: usize, q: Point) -> f64 {
        let poly = &self.face_maps[m].polygon;
        (0..poly.len()).map(|i| (-cross(poly[i], poly[(i + 1) % poly.len()], q)).max(0.0)).sum()
    }

    /// Value of face map `m` at the disk point `p`; `p` should lie in the
    /// closure of that face.
    pub fn face_value(&self, m: usize, p: Point) -> f64 {
        let q = self.frame.to_q(p);
        let fm = &self.face_maps[m];
        let hit = self.grid[cell(q[1]) * GRID + cell(q[0])]
            .iter()
            .filter(|&&(mi, _)| mi == m)
            .map(|&(_, t)| (t, fm.barycentric(t, q)))
            .max_by(|a, b| min3(a.1).total_cmp(&min3(b.1)));
        match hit {
            Some((t, w)) if min3(w) >= -1e-9 => fm.interpolate(t, w),
            _ => fm.value_at_q(q),
        }
    }

    /// Radially extended value, defined on the whole plane.
    pub fn evaluate_extended(&self, p: Point) -> f64 {
        let r = p[0].hypot(p[1]);
        if r > 1.0 {
            self.boundary_value(p[1].atan2(p[0]))
        } else {
            self.evaluate(p).expect("inside the disk")
        }
    }

    pub fn tree_levels(&self) -> Vec<f64> {
        let mut seen: Vec<Option<f64>> = Vec::new();
        for (e, t) in self.edge_tree.iter().enumerate() {
            if let Some(t) = *t {
                if seen.len() <= t {
                    seen.resize(t + 1, None);
                }
                seen[t] = Some(self.heights.value(self.embedding.edges[e].0));
            }
        }
        seen.into_iter().flatten().collect()
    }

    pub fn value_range(&self) -> (f64, f64) {
        let v = &self.heights.values;
        (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}
