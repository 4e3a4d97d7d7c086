//! Level curves by marching squares over the disk.

use std::collections::{BTreeMap, BTreeSet};

use super::faces::DiskFunction;
use super::layout::Point;

pub type Polyline = Vec<Point>;

const BISECTION_STEPS: usize = 60;

/// Grid edge: horizontal `(i, j, 0)` joins nodes `(i, j)` and `(i + 1, j)`,
/// vertical `(i, j, 1)` joins `(i, j)` and `(i, j + 1)`.
type EdgeKey = (usize, usize, u8);

struct Grid<'a> {
    f: &'a DiskFunction,
    c: f64,
    n: usize,
    values: Vec<f64>,
}

impl Grid<'_> {
    fn node(&self, i: usize, j: usize) -> Point {
        let h = 2.0 / self.n as f64;
        [-1.0 + i as f64 * h, -1.0 + j as f64 * h]
    }

    /// Nodes exactly at the level count as above it.
    fn above(&self, i: usize, j: usize) -> bool {
        self.values[j * (self.n + 1) + i] >= self.c
    }

    fn crossing(&self, key: EdgeKey) -> Point {
        let (i, j, dir) = key;
        let (mut a, mut b) = (self.node(i, j), if dir == 0 { self.node(i + 1, j) } else { self.node(i, j + 1) });
        let a_above = self.above(i, j);
        for _ in 0..BISECTION_STEPS {
            let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            if (self.f.evaluate_extended(m) >= self.c) == a_above {
                a = m;
            } else {
                b = m;
            }
        }
        [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
    }
}

/// Polylines approximating `{p : f(p) = c}` on a `resolution` square grid,
/// clipped to the closed disk. At a tree level the trees at that level are
/// returned exactly, one polyline per edge. Output is deterministic.
pub fn level_set(f: &DiskFunction, c: f64, resolution: usize) -> Vec<Polyline> {
    let n = resolution.max(2);
    let trees = tree_edges_at(f, c, n);
    if !trees.is_empty() {
        return trees;
    }
    let mut grid = Grid { f, c, n, values: Vec::with_capacity((n + 1) * (n + 1)) };
    for j in 0..=n {
        for i in 0..=n {
            let p = grid.node(i, j);
            grid.values.push(f.evaluate_extended(p));
        }
    }
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let bits = [grid.above(i, j), grid.above(i + 1, j), grid.above(i + 1, j + 1), grid.above(i, j + 1)];
            // cell sides counterclockwise from the bottom
            let sides: [EdgeKey; 4] = [(i, j, 0), (i + 1, j, 1), (i, j + 1, 0), (i, j, 1)];
            let cut: Vec<usize> = (0..4).filter(|&s| bits[s] != bits[(s + 1) % 4]).collect();
            match cut.len() {
                2 => segments.push((sides[cut[0]], sides[cut[1]])),
                4 => {
                    let h = 2.0 / n as f64;
                    let centre = grid.node(i, j);
                    let centre_above = f.evaluate_extended([centre[0] + h / 2.0, centre[1] + h / 2.0]) >= c;
                    // pair each cut with the neighbour that keeps the centre's side connected
                    if centre_above == bits[0] {
                        segments.push((sides[0], sides[1]));
                        segments.push((sides[2], sides[3]));
                    } else {
                        segments.push((sides[3], sides[0]));
                        segments.push((sides[1], sides[2]));
                    }
                }
                _ => {}
            }
        }
    }
    let mut adj: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    for &(a, b) in &segments {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut used: BTreeSet<(EdgeKey, EdgeKey)> = BTreeSet::new();
    let mut chains: Vec<Vec<EdgeKey>> = Vec::new();
    let walk = |start: EdgeKey, used: &mut BTreeSet<(EdgeKey, EdgeKey)>| {
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&nb| !used.contains(&(cur.min(nb), cur.max(nb))));
            match next {
                Some(nb) => {
                    used.insert((cur.min(nb), cur.max(nb)));
                    chain.push(nb);
                    cur = nb;
                }
                None => break,
            }
        }
        chain
    };
    let ends: Vec<EdgeKey> = adj.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect();
    for e in ends {
        if adj[&e].iter().all(|&nb| used.contains(&(e.min(nb), e.max(nb)))) {
            continue;
        }
        chains.push(walk(e, &mut used));
    }
    let keys: Vec<EdgeKey> = adj.keys().copied().collect();
    for k in keys {
        while adj[&k].iter().any(|&nb| !used.contains(&(k.min(nb), k.max(nb)))) {
            chains.push(walk(k, &mut used));
        }
    }
    let mut cache: BTreeMap<EdgeKey, Point> = BTreeMap::new();
    let mut out = Vec::new();
    for chain in chains {
        let pts: Vec<Point> = chain.iter().map(|&k| *cache.entry(k).or_insert_with(|| grid.crossing(k))).collect();
        out.extend(clip_to_disk(&pts));
    }
    let h = 2.0 / n as f64;
    for line in &mut out {
        for i in [0, line.len() - 1] {
            if (line[i][0].hypot(line[i][1]) - 1.0).abs() < 1e-12 {
                line[i] = snap_on_circle(f, c, line[i], h);
            }
        }
    }
    out
}

fn tree_edges_at(f: &DiskFunction, c: f64, n: usize) -> Vec<Polyline> {
    let samples = n;
    let emb = &f.embedding;
    let mut out = Vec::new();
    for (e, &(u, v)) in emb.edges.iter().enumerate() {
        if f.edge_tree[e].is_none() || (f.heights.value(u) - c).abs() > 1e-12 {
            continue;
        }
        let (a, b) = (f.q_of(u), f.q_of(v));
        out.push(
            (0..=samples)
                .map(|s| {
                    let t = s as f64 / samples as f64;
                    f.frame.from_q([a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t])
                })
                .collect(),
        );
    }
    out
}

/// Moves a clipped endpoint along the circle to where the boundary values
/// cross `c`, if they do within `window`.
fn snap_on_circle(f: &DiskFunction, c: f64, p: Point, window: f64) -> Point {
    let theta = p[1].atan2(p[0]);
    let (mut lo, mut hi) = (theta - window, theta + window);
    let lo_above = f.boundary_value(lo) >= c;
    if lo_above == (f.boundary_value(hi) >= c) {
        return p;
    }
    for _ in 0..BISECTION_STEPS {
        let m = (lo + hi) / 2.0;
        if (f.boundary_value(m) >= c) == lo_above {
            lo = m;
        } else {
            hi = m;
        }
    }
    let t = (lo + hi) / 2.0;
    [t.cos(), t.sin()]
}

fn inside(p: Point) -> bool {
    p[0].hypot(p[1]) <= 1.0
}

/// Point where the segment from inside `a` to outside `b` meets the circle.
fn exit_point(a: Point, b: Point) -> Point {
    let d = [b[0] - a[0], b[1] - a[1]];
    let (qa, qb, qc) = (d[0] * d[0] + d[1] * d[1], 2.0 * (a[0] * d[0] + a[1] * d[1]), a[0] * a[0] + a[1] * a[1] - 1.0);
    let t = ((-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa)).clamp(0.0, 1.0);
    let p = [a[0] + t * d[0], a[1] + t * d[1]];
    let r = p[0].hypot(p[1]);
    [p[0] / r, p[1] / r]
}

fn clip_to_disk(pts: &[Point]) -> Vec<Polyline> {
    let mut out = Vec::new();
    let mut cur: Polyline = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        if inside(p) {
            if cur.is_empty() && i > 0 {
                cur.push(exit_point(p, pts[i - 1]));
            }
            cur.push(p);
        } else if !cur.is_empty() {
            cur.push(exit_point(*cur.last().unwrap(), p));
            out.push(std::mem::take(&mut cur));
        }
    }
    if cur.len() >= 2 {
        out.push(cur);
    }
    out.retain(|l| l.len() >= 2);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::realization::{realize, RealizeOptions};

    fn on_circle(p: Point) -> bool {
        (p[0].hypot(p[1]) - 1.0).abs() < 1e-9
    }

    #[test]
    fn g1_chord_level() {
        let g = fixtures::g1();
        let f = realize(&g, RealizeOptions::default()).unwrap().function;
        let res = 64;
        let lines = level_set(&f, 1.0, res);
        assert_eq!(lines.len(), 1, "{lines:?}");
        let (a, b) = (f.embedding.coords[g.id("a").unwrap()], f.embedding.coords[g.id("b").unwrap()]);
        // Hausdorff distance to the chord, which is a diameter through a and b
        let dir = [b.0 - a.0, b.1 - a.1];
        let len = dir[0].hypot(dir[1]);
        for p in &lines[0] {
            let d = ((p[0] - a.0) * dir[1] - (p[1] - a.1) * dir[0]).abs() / len;
            assert!(d <= 2.0 / res as f64, "{p:?} at {d}");
        }
        for s in 0..=20 {
            let t = s as f64 / 20.0;
            let q = [a.0 + t * dir[0], a.1 + t * dir[1]];
            let d = lines[0].iter().map(|p| (p[0] - q[0]).hypot(p[1] - q[1])).fold(f64::INFINITY, f64::min);
            assert!(d <= 2.0 / res as f64);
        }
    }

    #[test]
    fn g1_half_level_is_one_arc() {
        let g = fixtures::g1();
        let f = realize(&g, RealizeOptions::default()).unwrap().function;
        let lines = level_set(&f, 0.5, 64);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert!(on_circle(l[0]) && on_circle(*l.last().unwrap()));
        for p in l {
            let v = f.evaluate_extended(*p);
            assert!((v - 0.5).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn g3_star_level() {
        let g = fixtures::g3();
        let f = realize(&g, RealizeOptions::default()).unwrap().function;
        let c = f.heights.value(g.id("c").unwrap());
        let lines = level_set(&f, c, 64);
        let ends: Vec<Point> =
            lines.iter().flat_map(|l| [l[0], *l.last().unwrap()]).filter(|&p| on_circle(p)).collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(ends.len(), 4, "{lines:?}");
        for w in ["w1", "w2", "w3", "w4"] {
            let (x, y) = f.embedding.coords[g.id(w).unwrap()];
            assert!(ends.iter().any(|p| (p[0] - x).hypot(p[1] - y) < 0.05), "{w}");
        }
        assert!(lines.iter().all(|l| l.iter().any(|p| p[0].hypot(p[1]) < 1e-12)));
    }
}
