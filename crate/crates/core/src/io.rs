//! JSON input, machine-readable verdicts, DOT and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_graph, GraphError, PoGraph};
use crate::planarity::{face_arcs, DiskEmbedding};
use crate::realization::validate::boundary_extrema;
use crate::realization::{level_set, realize, DiskFunction, Point, RealizeOptions};
use crate::structure::{is_delta_graph, DeltaVerdict};

/// On-disk graph description; `order` pairs read as `first < second`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("malformed file at line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("unknown vertex id {id:?} in {field}")]
    UnknownId { field: String, id: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile, FileError> {
        serde_json::from_str(text).map_err(|e| FileError::Malformed {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph files serialize")
    }

    pub fn to_graph(&self) -> Result<PoGraph, FileError> {
        let known: std::collections::HashSet<&str> = self.vertices.iter().map(String::as_str).collect();
        for (field, list) in [("edges", &self.edges), ("order", &self.order)] {
            for (i, (a, b)) in list.iter().enumerate() {
                if let Some(id) = [a, b].into_iter().find(|x| !known.contains(x.as_str())) {
                    return Err(FileError::UnknownId { field: format!("{field}[{i}]"), id: id.clone() });
                }
            }
        }
        Ok(build_graph(&self.vertices, &self.edges, &self.order)?)
    }

    /// File for `g`, listing the cover pairs of its order.
    pub fn from_graph(g: &PoGraph) -> GraphFile {
        let name = |v: usize| g.name(v).to_string();
        GraphFile {
            vertices: g.names().to_vec(),
            edges: g.graph().edges().iter().map(|&(u, v)| (name(u), name(v))).collect(),
            order: g.order().covers().into_iter().map(|(u, v)| (name(u), name(v))).collect(),
        }
    }
}

pub fn read_graph(text: &str) -> Result<PoGraph, FileError> {
    GraphFile::parse(text)?.to_graph()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub condition: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSummary {
    pub faces: usize,
    pub inner_faces: usize,
    /// Boundary arc count of every inner face.
    pub arcs: Vec<usize>,
    pub trees: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationSummary {
    pub heights: BTreeMap<String, f64>,
    pub boundary_extrema: Vec<String>,
    pub extrema_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub delta: bool,
    pub cycle: Option<Vec<String>>,
    pub reports: Vec<ReportJson>,
    pub a4: bool,
    pub a4_witness: Option<(String, String, String)>,
    pub embedding: Option<EmbeddingSummary>,
    pub realization: Option<RealizationSummary>,
    pub realization_error: Option<String>,
}

fn report_json(v: &DeltaVerdict) -> Vec<ReportJson> {
    v.reports
        .iter()
        .chain(v.extremal.iter())
        .map(|r| ReportJson { condition: r.condition.to_string(), passed: r.passed, witnesses: r.witnesses.clone() })
        .collect()
}

/// Runs the check and, for Δ-graphs, the realization.
pub fn verdict_json(g: &PoGraph, opts: RealizeOptions) -> Result<VerdictJson, GraphError> {
    let v = is_delta_graph(g, opts.budget)?;
    let names = |vs: &[usize]| vs.iter().map(|&x| g.name(x).to_string()).collect::<Vec<_>>();
    let mut out = VerdictJson {
        delta: v.delta,
        cycle: v.gamma.as_ref().map(|c| names(&c.vertices)),
        reports: report_json(&v),
        a4: v.a4.holds,
        a4_witness: v.a4.witness.map(|(a, b, c)| (g.name(a).into(), g.name(b).into(), g.name(c).into())),
        embedding: None,
        realization: None,
        realization_error: None,
    };
    if !v.delta {
        return Ok(out);
    }
    match realize(g, opts) {
        Ok(r) => {
            out.embedding =
                Some(embedding_summary(&r.function.embedding, r.verdict.decomposition.as_ref().unwrap().trees.len()));
            let ext = boundary_extrema(&r.function, g);
            out.realization = Some(RealizationSummary {
                heights: (0..g.vertex_count()).map(|x| (g.name(x).to_string(), r.function.heights.value(x))).collect(),
                boundary_extrema: names(&ext.extrema),
                extrema_count: ext.extrema.len(),
            });
        }
        Err(e) => out.realization_error = Some(e.to_string()),
    }
    Ok(out)
}

fn embedding_summary(emb: &DiskEmbedding, trees: usize) -> EmbeddingSummary {
    let arcs = face_arcs(emb);
    EmbeddingSummary { faces: emb.faces.len(), inner_faces: arcs.len(), arcs, trees }
}

/// Human-readable summary of a verdict.
pub fn verdict_text(v: &VerdictJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Δ-graph: {}", if v.delta { "yes" } else { "no" });
    if let Some(c) = &v.cycle {
        let _ = writeln!(s, "cycle: {}", c.join(" "));
    }
    for r in &v.reports {
        let _ = writeln!(s, "{}: {}", r.condition, if r.passed { "pass" } else { "FAIL" });
        for w in &r.witnesses {
            let _ = writeln!(s, "  {w}");
        }
    }
    let _ = writeln!(s, "A4: {}", if v.a4 { "holds" } else { "fails" });
    if let Some(e) = &v.embedding {
        let _ = writeln!(s, "faces: {} inner, arcs {:?}", e.inner_faces, e.arcs);
    }
    if let Some(r) = &v.realization {
        let _ = writeln!(s, "boundary extrema: {} ({})", r.extrema_count, r.boundary_extrema.join(" "));
    }
    if let Some(e) = &v.realization_error {
        let _ = writeln!(s, "realization failed: {e}");
    }
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz source; vertices of equal longest-chain rank share a rank.
pub fn to_dot(g: &PoGraph, gamma: Option<&[usize]>) -> String {
    let rank = g.order().rank();
    let mut s = String::from("graph G {\n  rankdir=BT;\n");
    let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        by_rank.entry(rank[v]).or_default().push(v);
        let _ = writeln!(s, "  {} [rank_value={}];", quote(g.name(v)), rank[v]);
    }
    for (r, vs) in &by_rank {
        let names: Vec<String> = vs.iter().map(|&v| quote(g.name(v))).collect();
        let _ = writeln!(s, "  {{ rank=same; {}; }} // rank {r}", names.join("; "));
    }
    let on_cycle = |u: usize, v: usize| {
        gamma.is_some_and(|c| {
            (0..c.len()).any(|i| {
                let (a, b) = (c[i], c[(i + 1) % c.len()]);
                (a, b) == (u, v) || (b, a) == (u, v)
            })
        })
    };
    for &(u, v) in g.graph().edges() {
        let style = if on_cycle(u, v) { " [style=bold]" } else { "" };
        let _ = writeln!(s, "  {} -- {}{style};", quote(g.name(u)), quote(g.name(v)));
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedJson {
    pub vertices: Vec<String>,
    pub coords: Vec<(f64, f64)>,
    pub gamma: Vec<String>,
    pub edges: Vec<(String, String)>,
    /// Counterclockwise neighbour order at each vertex, as dart heads.
    pub rotation: BTreeMap<String, Vec<String>>,
    pub faces: Vec<Vec<String>>,
    pub outer: usize,
    pub insertion_order: Vec<usize>,
}

pub fn embed_json(g: &PoGraph, emb: &DiskEmbedding) -> EmbedJson {
    let name = |v: usize| g.name(v).to_string();
    EmbedJson {
        vertices: g.names().to_vec(),
        coords: emb.coords.clone(),
        gamma: emb.gamma.vertices.iter().map(|&v| name(v)).collect(),
        edges: emb.edges.iter().map(|&(u, v)| (name(u), name(v))).collect(),
        rotation: (0..emb.vertex_count())
            .map(|v| (name(v), emb.rotation[v].iter().map(|&d| name(emb.head(d))).collect()))
            .collect(),
        faces: emb.faces.iter().map(|f| f.darts.iter().map(|&d| name(emb.tail(d))).collect()).collect(),
        outer: emb.outer,
        insertion_order: emb.insertion_order.clone(),
    }
}

const SVG_SIZE: f64 = 512.0;
const SVG_RADIUS: f64 = 240.0;

fn px(p: Point) -> (f64, f64) {
    (SVG_SIZE / 2.0 + SVG_RADIUS * p[0], SVG_SIZE / 2.0 - SVG_RADIUS * p[1])
}

fn points_attr(line: &[Point]) -> String {
    line.iter()
        .map(|&p| {
            let (x, y) = px(p);
            format!("{x:.4},{y:.4}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    format!("rgb({},{},{})", (40.0 + 215.0 * t).round(), 70, (255.0 - 215.0 * t).round())
}

/// Level values `min + k (max - min) / (levels + 1)` for `k = 1..=levels`.
pub fn level_values(f: &DiskFunction, levels: usize) -> Vec<f64> {
    let (lo, hi) = f.value_range();
    (1..=levels).map(|k| lo + k as f64 * (hi - lo) / (levels + 1) as f64).collect()
}

/// Deterministic SVG drawing of the disk, the graph and `levels` level
/// curves.
pub fn render_svg(g: &PoGraph, f: &DiskFunction, levels: usize, resolution: usize) -> String {
    let values = level_values(f, levels);
    let curves: Vec<Vec<Vec<Point>>> = values.par_iter().map(|&c| level_set(f, c, resolution)).collect();
    let (lo, hi) = f.value_range();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let (cx, cy) = px([0.0, 0.0]);
    let _ = writeln!(
        s,
        r#"<circle class="disk" cx="{cx:.4}" cy="{cy:.4}" r="{SVG_RADIUS:.4}" fill="none" stroke="black" stroke-width="2"/>"#
    );
    for (c, lines) in values.iter().zip(&curves) {
        let t = if hi > lo { (c - lo) / (hi - lo) } else { 0.5 };
        let _ = writeln!(
            s,
            r#"<g class="level" data-value="{c:.4}" stroke="{}" fill="none" stroke-width="1.5">"#,
            colour(t)
        );
        for l in lines {
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, points_attr(l));
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g class=\"tree\" stroke=\"black\" fill=\"none\" stroke-width=\"2.5\">\n");
    let emb = &f.embedding;
    for (e, &(u, v)) in emb.edges.iter().enumerate() {
        if f.edge_tree[e].is_none() {
            continue;
        }
        let (a, b) = (f.q_of(u), f.q_of(v));
        let line: Vec<Point> = (0..=16)
            .map(|i| {
                let t = i as f64 / 16.0;
                f.frame.from_q([a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t])
            })
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}"/>"#, points_attr(&line));
    }
    s.push_str("</g>\n<g class=\"vertices\">\n");
    for v in 0..g.vertex_count() {
        let (x, y) = px([emb.coords[v].0, emb.coords[v].1]);
        let t = if hi > lo { (f.heights.value(v) - lo) / (hi - lo) } else { 0.5 };
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.4}" cy="{y:.4}" r="4" fill="{}"><title>{} = {:.4}</title></circle>"#,
            colour(t),
            xml_escape(g.name(v)),
            f.heights.value(v)
        );
        let (lx, ly) = px([emb.coords[v].0 * 1.07, emb.coords[v].1 * 1.07]);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.4}" y="{ly:.4}" font-size="12" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            xml_escape(g.name(v))
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Name of the first failing condition, if any.
pub fn first_failure(v: &VerdictJson) -> Option<&str> {
    v.reports.iter().find(|r| !r.passed).map(|r| r.condition.as_str())
}
