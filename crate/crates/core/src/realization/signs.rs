//! Signs of `f - c_k` on the faces around each level tree.

use serde::{Deserialize, Serialize};

use super::faces::{DiskFunction, FaceModel};
use crate::graph::{Decomposition, VertexId};
use crate::order::{BinaryRelation, RhoKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSigns {
    pub tree: usize,
    pub vertex: VertexId,
    /// Signs of the corners between consecutive tree edges, in rotation
    /// order. For a cycle vertex the corners form a chain from the next
    /// cycle edge to the previous one.
    pub signs: Vec<i8>,
    pub on_gamma: bool,
    pub alternates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSign {
    pub tree: usize,
    /// Index into the embedding's faces.
    pub face: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCensus {
    pub faces: Vec<FaceSign>,
    pub vertices: Vec<VertexSigns>,
    pub ok: bool,
    pub witnesses: Vec<String>,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign of `f - level(tree)` on a face map, from the model.
fn model_sign(model: &FaceModel, tree: usize) -> Option<i8> {
    match *model {
        FaceModel::Triangle { tree: t, c, ci, .. } => (t == tree).then(|| sign(c - ci)),
        FaceModel::Square { first_tree, second_tree, ci, cj } => {
            if first_tree == tree {
                Some(sign(cj - ci))
            } else if second_tree == tree {
                Some(sign(ci - cj))
            } else {
                None
            }
        }
    }
}

pub fn sign_census(f: &DiskFunction, dec: &Decomposition) -> SignCensus {
    let emb = &f.embedding;
    let face_of = emb.face_of_dart();
    let mut map_of_face = vec![None; emb.faces.len()];
    for (m, fm) in f.face_maps.iter().enumerate() {
        map_of_face[fm.face] = Some(m);
    }
    let mut witnesses = Vec::new();
    let mut faces = Vec::new();
    for fm in &f.face_maps {
        for (k, t) in dec.trees.iter().enumerate() {
            let Some(s) = model_sign(&fm.model, k) else { continue };
            let level = f.heights.value(t.vertices()[0]);
            // cross-check at the centroid of the first triangle
            let tri = fm.triangles[0].map(|i| fm.polygon[i]);
            let q = [(tri[0][0] + tri[1][0] + tri[2][0]) / 3.0, (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0];
            let probe = sign(fm.value_at_q(q) - level);
            if probe != s || s == 0 {
                witnesses.push(format!("face {} has sign {s} against tree {k} but probes {probe}", fm.face));
            }
            faces.push(FaceSign { tree: k, face: fm.face, sign: s });
        }
    }
    let face_sign = |face: usize, tree: usize| -> i8 {
        map_of_face[face].and_then(|m| model_sign(&f.face_maps[m].model, tree)).unwrap_or(0)
    };
    let mut vertices = Vec::new();
    for (k, t) in dec.trees.iter().enumerate() {
        for &v in t.vertices() {
            let rot = &emb.rotation[v];
            let on_gamma = dec.on_gamma(v);
            let (signs, relation) = if on_gamma {
                // rotation is [next cycle dart, tree darts..., previous cycle dart]
                let corners: Vec<i8> = rot[..rot.len() - 1].iter().map(|&d| face_sign(face_of[d], k)).collect();
                let pairs = (0..corners.len() - 1).map(|j| (j, j + 1)).collect();
                (corners.clone(), BinaryRelation::new((0..corners.len()).collect(), pairs))
            } else {
                let corners: Vec<i8> = rot.iter().map(|&d| face_sign(face_of[d], k)).collect();
                let m = corners.len();
                let pairs = (0..m).map(|j| (j, (j + 1) % m)).collect();
                (corners, BinaryRelation::new((0..m).collect(), pairs))
            };
            let comps = relation.rho_components().expect("successor relation is convenient");
            let mut alternates = comps.len() == 1 && signs.iter().all(|&s| s != 0);
            for comp in &comps {
                let els = &comp.elements;
                let steps = match comp.kind {
                    RhoKind::Chain => els.len() - 1,
                    RhoKind::Cycle => els.len(),
                };
                for j in 0..steps {
                    if signs[els[j]] == signs[els[(j + 1) % els.len()]] {
                        alternates = false;
                    }
                }
                let tree_degree = t.degree(v);
                let expected = if on_gamma {
                    // odd total degree: even chain, opposite ends; even: odd chain, equal ends
                    comp.kind == RhoKind::Chain && els.len() == tree_degree + 1
                } else {
                    comp.kind == RhoKind::Cycle && els.len() == tree_degree && tree_degree % 2 == 0
                };
                if !expected {
                    alternates = false;
                }
                if on_gamma && alternates {
                    let ends_equal = signs[els[0]] == signs[*els.last().unwrap()];
                    if ends_equal != (tree_degree % 2 == 0) {
                        alternates = false;
                    }
                }
            }
            if !alternates {
                witnesses.push(format!("signs {signs:?} around vertex {v} of tree {k} do not alternate"));
            }
            vertices.push(VertexSigns { tree: k, vertex: v, signs, on_gamma, alternates });
        }
    }
    SignCensus { ok: witnesses.is_empty(), faces, vertices, witnesses }
}
