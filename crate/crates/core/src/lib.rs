//! Decide whether a partially ordered graph is the level-set diagram of a
//! pseudoharmonic function on the closed disk, and build a witness when it
//! is: a disk embedding plus an explicit continuous height function.
//!
//! ```
//! use diskdiag::{fixtures, is_delta_graph, Budget};
//!
//! let g = fixtures::g1();
//! assert!(is_delta_graph(&g, Budget::default()).unwrap().delta);
//! ```

pub mod corpus;
pub mod enumerate;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod order;
pub mod planarity;
pub mod realization;
pub mod structure;

pub use graph::{
    build_graph, decompose, simple_cycles, simple_cycles_where, tree_path, Budget, Cycle, Decomposition, EdgeId,
    GraphError, Multigraph, PoGraph, Tree, TreeEdge, TreePath, VertexId,
};
pub use io::{read_graph, render_svg, verdict_json, FileError, GraphFile, VerdictJson};
pub use order::{
    check_a4, comparability, A4Verdict, BinaryRelation, Comparability, CyclicOrder, OrderError, RhoComponent, RhoKind,
    StrictPartialOrder,
};
pub use planarity::{
    build_embedding, face_arcs, graph_is_disk_planar, separation_ok, tree_is_d_planar, DPlanarity, Dart, DiskEmbedding,
    DiskPlanarity, Face, FaceSegment, PlanarityError, SegmentKind, Separation, SeparationWitness,
};
pub use realization::{
    assign_coords, assign_heights, extend_to_faces, induced_order, level_set, realize, sign_census, DiskFunction,
    FaceMap, FaceModel, HeightAssignment, HeightOptions, PartitionKind, Point, Polyline, Realization, RealizationError,
    RealizeOptions, SignCensus,
};
pub use structure::{
    boundary_pairs, check_a2, check_a3, check_extremal, check_s3, find_cr_cycles, is_delta_graph, BoundaryPair,
    Condition, ConditionReport, DeltaVerdict,
};
