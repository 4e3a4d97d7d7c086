//! Vertex heights: a monotone map from the order to the reals that is
//! constant on the level trees.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::RealizationError;
use crate::graph::{Decomposition, EdgeId, PoGraph, VertexId};
use crate::order::{check_a4, StrictPartialOrder};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightOptions {
    /// Merge whole incomparability classes when the order allows it.
    pub strict: bool,
    /// Random linear extension and random gaps instead of the canonical one.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionKind {
    /// Each tree is a block, every other vertex a singleton.
    Trees,
    /// Blocks are the incomparability classes.
    Incomparability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightAssignment {
    pub values: Vec<f64>,
    pub blocks: Vec<Vec<VertexId>>,
    pub partition: PartitionKind,
    edges: Vec<(VertexId, VertexId)>,
}

impl HeightAssignment {
    pub fn value(&self, v: VertexId) -> f64 {
        self.values[v]
    }

    /// Affine parametrization of edge `e` from its first endpoint (`t = 0`)
    /// to its second (`t = 1`).
    pub fn edge_value(&self, e: EdgeId, t: f64) -> f64 {
        let (u, v) = self.edges[e];
        self.values[u] * (1.0 - t) + self.values[v] * t
    }
}

fn tree_partition(n: usize, dec: &Decomposition) -> Vec<Vec<VertexId>> {
    let mut blocks: Vec<Vec<VertexId>> = dec.trees.iter().map(|t| t.vertices().to_vec()).collect();
    blocks.extend((0..n).filter(|&v| dec.tree_of(v).is_none()).map(|v| vec![v]));
    blocks
}

/// Builds heights for `g`. Fails when the blocks do not carry a consistent
/// quotient order, which cannot happen for a Δ-graph.
pub fn assign_heights(
    g: &PoGraph,
    dec: &Decomposition,
    opts: HeightOptions,
) -> Result<HeightAssignment, RealizationError> {
    let n = g.vertex_count();
    let order = g.order();
    let strict = opts.strict && check_a4(order).holds;
    let (blocks, partition) = if strict {
        (order.incomparability_classes(), PartitionKind::Incomparability)
    } else {
        (tree_partition(n, dec), PartitionKind::Trees)
    };
    let mut block_of = vec![usize::MAX; n];
    for (b, members) in blocks.iter().enumerate() {
        for &v in members {
            block_of[v] = b;
        }
    }
    let mut pairs = Vec::new();
    for (u, v) in order.pairs() {
        let (a, b) = (block_of[u], block_of[v]);
        if a == b {
            return Err(RealizationError::NotDeltaGraph(format!(
                "{} < {} inside one level block",
                g.name(u),
                g.name(v)
            )));
        }
        pairs.push((a, b));
    }
    pairs.sort_unstable();
    pairs.dedup();
    let quotient = StrictPartialOrder::from_generators(blocks.len(), &pairs).map_err(|cycle| {
        let names: Vec<&str> = cycle.iter().map(|&b| g.name(blocks[b][0])).collect();
        RealizationError::NotDeltaGraph(format!("level blocks are cyclically ordered: {}", names.join(" < ")))
    })?;
    let block_values = match opts.seed {
        None => canonical_values(&quotient, &blocks),
        Some(seed) => random_values(&quotient, seed),
    };
    let mut values = vec![0.0; n];
    for v in 0..n {
        values[v] = block_values[block_of[v]];
    }
    Ok(HeightAssignment { values, blocks, partition, edges: g.graph().edges().to_vec() })
}

/// Kahn's algorithm preferring low longest-chain rank, then low vertex
/// index; blocks get consecutive integers.
fn canonical_values(q: &StrictPartialOrder, blocks: &[Vec<VertexId>]) -> Vec<f64> {
    let m = q.len();
    let rank = q.rank();
    let mut indeg: Vec<usize> = (0..m).map(|b| (0..m).filter(|&a| q.less(a, b)).count()).collect();
    let key = |b: usize| Reverse((rank[b], blocks[b].iter().min().copied().unwrap_or(usize::MAX), b));
    let mut heap: BinaryHeap<_> = (0..m).filter(|&b| indeg[b] == 0).map(key).collect();
    let mut values = vec![0.0; m];
    let mut next = 0.0;
    while let Some(Reverse((_, _, b))) = heap.pop() {
        values[b] = next;
        next += 1.0;
        for c in 0..m {
            if q.less(b, c) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    heap.push(key(c));
                }
            }
        }
    }
    values
}

fn random_values(q: &StrictPartialOrder, seed: u64) -> Vec<f64> {
    let m = q.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indeg: Vec<usize> = (0..m).map(|b| (0..m).filter(|&a| q.less(a, b)).count()).collect();
    let mut ready: Vec<usize> = (0..m).filter(|&b| indeg[b] == 0).collect();
    let mut values = vec![0.0; m];
    let mut next = 0.0;
    while !ready.is_empty() {
        let b = ready.swap_remove(rng.gen_range(0..ready.len()));
        values[b] = next;
        next += rng.gen_range(0.25..4.0);
        for c in 0..m {
            if q.less(b, c) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(c);
                }
            }
        }
    }
    values
}

/// Order on the vertices induced by comparing heights.
pub fn induced_order(h: &HeightAssignment) -> StrictPartialOrder {
    StrictPartialOrder::from_values(&h.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{decompose, Budget};
    use crate::structure::find_cr_cycles;

    fn heights(g: &PoGraph, opts: HeightOptions) -> HeightAssignment {
        let c = find_cr_cycles(g, Budget::default()).unwrap().remove(0);
        let dec = decompose(g.graph(), &c).unwrap();
        assign_heights(g, &dec, opts).unwrap()
    }

    fn named(g: &PoGraph, h: &HeightAssignment, names: &[&str]) -> Vec<f64> {
        names.iter().map(|s| h.value(g.id(s).unwrap())).collect()
    }

    #[test]
    fn g1_heights() {
        let g = fixtures::g1();
        let h = heights(&g, HeightOptions::default());
        assert_eq!(named(&g, &h, &["m", "a", "b", "M"]), vec![0.0, 1.0, 1.0, 2.0]);
        assert_eq!(induced_order(&h), *g.order());
    }

    #[test]
    fn g3_default_keeps_minima_apart() {
        let g = fixtures::g3();
        let h = heights(&g, HeightOptions::default());
        assert_eq!(h.partition, PartitionKind::Trees);
        assert_eq!(named(&g, &h, &["m1", "m2", "c", "w1", "M1", "M2"]), vec![0.0, 1.0, 2.0, 2.0, 3.0, 4.0]);
        let induced = induced_order(&h);
        assert!(g.order().is_subset_of(&induced));
        assert_ne!(induced, *g.order());
    }

    #[test]
    fn g3_strict_recovers_order() {
        let g = fixtures::g3();
        let h = heights(&g, HeightOptions { strict: true, seed: None });
        assert_eq!(h.partition, PartitionKind::Incomparability);
        assert_eq!(named(&g, &h, &["m1", "m2", "c", "M1", "M2"]), vec![0.0, 0.0, 1.0, 2.0, 2.0]);
        assert_eq!(induced_order(&h), *g.order());
    }

    #[test]
    fn parallel_pair_heights() {
        let g = fixtures::parallel_pair();
        let h = heights(&g, HeightOptions::default());
        assert_eq!(named(&g, &h, &["x", "y"]), vec![0.0, 1.0]);
    }

    #[test]
    fn seeded_heights_are_monotone() {
        let g = fixtures::g3();
        for seed in 0..20 {
            let h = heights(&g, HeightOptions { strict: false, seed: Some(seed) });
            assert!(g.order().is_subset_of(&induced_order(&h)));
            let again = heights(&g, HeightOptions { strict: false, seed: Some(seed) });
            assert_eq!(h, again);
        }
    }

    #[test]
    fn edge_parametrization_is_affine() {
        let g = fixtures::g1();
        let h = heights(&g, HeightOptions::default());
        // edge 0 is m-a
        assert_eq!(h.edge_value(0, 0.0), 0.0);
        assert_eq!(h.edge_value(0, 0.5), 0.5);
        assert_eq!(h.edge_value(0, 1.0), 1.0);
    }
}
