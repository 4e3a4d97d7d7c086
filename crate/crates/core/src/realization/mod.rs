//! Construction of an explicit height function on the disk whose diagram
//! is a given Δ-graph.

pub mod faces;
pub mod heights;
pub mod layout;
pub mod level;
pub mod signs;
pub mod validate;

use thiserror::Error;

use crate::graph::{Budget, GraphError, PoGraph};
use crate::planarity::{build_embedding, PlanarityError};
use crate::structure::{is_delta_graph, DeltaVerdict};

pub use faces::{extend_to_faces, DiskFunction, FaceMap, FaceModel};
pub use heights::{assign_heights, induced_order, HeightAssignment, HeightOptions, PartitionKind};
pub use layout::{assign_coords, Frame, Point};
pub use level::{level_set, Polyline};
pub use signs::{sign_census, SignCensus, VertexSigns};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizationError {
    #[error("not a Δ-graph: {0}")]
    NotDeltaGraph(String),
    #[error("degenerate drawing: {0}")]
    DegenerateDrawing(String),
    #[error("face {face} has an unexpected boundary structure: {detail}")]
    ArcStructureViolation { face: usize, detail: String },
    #[error("face {face} is bounded by two tree paths at the same level {level}")]
    EqualLevels { face: usize, level: f64 },
    #[error("point ({}, {}) lies outside the unit disk", .0[0], .0[1])]
    OutsideDisk(Point),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Planarity(#[from] PlanarityError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RealizeOptions {
    pub heights: HeightOptions,
    pub budget: Budget,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub verdict: DeltaVerdict,
    pub function: DiskFunction,
}

/// Checks `g` and, when it is a Δ-graph, builds the embedding, heights and
/// face maps.
pub fn realize(g: &PoGraph, opts: RealizeOptions) -> Result<Realization, RealizationError> {
    let verdict = is_delta_graph(g, opts.budget)?;
    if !verdict.delta {
        let msg = match verdict.first_failure() {
            Some(r) => format!("{} fails: {}", r.condition, r.witnesses.join("; ")),
            None => "no cycle found".to_string(),
        };
        return Err(RealizationError::NotDeltaGraph(msg));
    }
    let dec = verdict.decomposition.as_ref().expect("Δ verdict carries a decomposition");
    let heights = assign_heights(g, dec, opts.heights)?;
    let emb = assign_coords(&build_embedding(g.graph(), dec)?)?;
    let mut edge_tree = vec![None; g.edge_count()];
    for (i, t) in dec.trees.iter().enumerate() {
        for e in t.edges() {
            edge_tree[e.id] = Some(i);
        }
    }
    let function = extend_to_faces(&emb, &heights, edge_tree)?;
    Ok(Realization { verdict, function })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn realized(g: &PoGraph) -> DiskFunction {
        realize(g, RealizeOptions::default()).unwrap().function
    }

    #[test]
    fn g1_values() {
        let g = fixtures::g1();
        let f = realized(&g);
        assert!((f.evaluate([0.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        let (x, y) = f.embedding.coords[g.id("m").unwrap()];
        assert_eq!(f.evaluate([x, y]).unwrap(), 0.0);
        let (x, y) = f.embedding.coords[g.id("M").unwrap()];
        assert_eq!(f.evaluate([x, y]).unwrap(), 2.0);
        assert!(matches!(f.evaluate([1.0, 1.0]), Err(RealizationError::OutsideDisk(_))));
    }

    #[test]
    fn g1_triangle_model() {
        let g = fixtures::g1();
        let f = realized(&g);
        let m = g.id("m").unwrap();
        let map = f
            .face_maps
            .iter()
            .find(|fm| matches!(fm.model, FaceModel::Triangle { extremum, .. } if extremum == m))
            .unwrap();
        assert_eq!(map.model.level([0.0, 0.0]), 0.0);
        assert_eq!(map.model.level([0.3, 1.0]), 1.0);
        assert_eq!(f.face_maps.len(), 2);
    }

    #[test]
    fn g3_origin_is_centre_value() {
        let g = fixtures::g3();
        let f = realized(&g);
        let c = g.id("c").unwrap();
        assert_eq!(f.evaluate([0.0, 0.0]).unwrap(), f.heights.value(c));
    }

    #[test]
    fn g4_square_face_is_affine_in_y() {
        let g = fixtures::g4();
        let f = realized(&g);
        let sq: Vec<_> = f.face_maps.iter().filter(|m| matches!(m.model, FaceModel::Square { .. })).collect();
        assert_eq!(sq.len(), 1);
        let t1 = f.heights.value(g.id("a1").unwrap());
        let t2 = f.heights.value(g.id("a2").unwrap());
        let FaceModel::Square { ci, cj, .. } = sq[0].model else { unreachable!() };
        assert_eq!((ci.min(cj), ci.max(cj)), (t1.min(t2), t1.max(t2)));
        assert_eq!(sq[0].model.level([0.5, 0.5]), (t1 + t2) / 2.0);
    }

    #[test]
    fn parallel_pair_is_rejected() {
        let g = fixtures::parallel_pair();
        assert!(matches!(realize(&g, RealizeOptions::default()), Err(RealizationError::NotDeltaGraph(_))));
    }

    #[test]
    fn non_delta_is_rejected() {
        let g = fixtures::interleaved_chords();
        let err = realize(&g, RealizeOptions::default()).unwrap_err();
        assert!(err.to_string().contains("S2"), "{err}");
    }
}
