//! Exhaustive small-instance enumeration: a brute-force embedding oracle
//! for trees against a circle, and a census of small ordered multigraphs.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Budget, GraphError, PoGraph, Tree, TreeEdge, VertexId};
use crate::order::{CyclicOrder, StrictPartialOrder};
use crate::planarity::tree_is_d_planar;
use crate::structure::is_delta_graph;

/// Largest instance size accepted by the census commands.
pub const MAX_ENUMERATION_VERTICES: usize = 8;

/// Number of labelled strict partial orders on `n` elements, `n <= 8`.
const LABELLED_POSETS: [u64; 9] = [1, 1, 3, 19, 219, 4231, 130_023, 6_129_859, 431_723_379];

/// Next permutation in lexicographic order; false once wrapped around.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        p.reverse();
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Searches all rotation systems of the tree plus a cycle through `vstar`
/// (in the given order) for one of genus zero. The cycle darts sit side by
/// side at every boundary vertex, so the cycle always bounds a face.
pub fn oracle_d_planar(t: &Tree, vstar: &CyclicOrder<VertexId>) -> bool {
    let verts = t.vertices();
    let idx: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    let mut edges: Vec<(usize, usize)> = t.edges().iter().map(|e| (idx[&e.u], idx[&e.v])).collect();
    let tree_edges = edges.len();
    let seq: Vec<usize> = vstar.as_slice().iter().map(|v| idx[v]).collect();
    let r = seq.len();
    if r >= 2 {
        for k in 0..r {
            edges.push((seq[k], seq[(k + 1) % r]));
        }
    }
    let dart_from = |e: usize, x: usize| if edges[e].0 == x { 2 * e } else { 2 * e + 1 };

    // per vertex: fixed prefix, permutable middle, fixed suffix
    let mut slots: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = Vec::with_capacity(n);
    for x in 0..n {
        let tree_darts: Vec<usize> =
            (0..tree_edges).filter(|&e| edges[e].0 == x || edges[e].1 == x).map(|e| dart_from(e, x)).collect();
        match seq.iter().position(|&s| s == x) {
            Some(k) if r >= 2 => {
                let next = dart_from(tree_edges + k, x);
                let prev = dart_from(tree_edges + (k + r - 1) % r, x);
                slots.push((vec![next], tree_darts, vec![prev]));
            }
            _ => {
                let (first, rest) = tree_darts.split_first().map(|(f, r)| (vec![*f], r.to_vec())).unwrap_or_default();
                slots.push((first, rest, Vec::new()));
            }
        }
    }
    let mut perms: Vec<Vec<usize>> = slots.iter().map(|s| (0..s.1.len()).collect()).collect();
    let target_faces = 2 + edges.len() as i64 - n as i64;
    let darts = 2 * edges.len();
    loop {
        let mut next = vec![0usize; darts];
        for (x, (pre, mid, suf)) in slots.iter().enumerate() {
            let rot: Vec<usize> =
                pre.iter().copied().chain(perms[x].iter().map(|&i| mid[i])).chain(suf.iter().copied()).collect();
            let len = rot.len();
            for (i, &d) in rot.iter().enumerate() {
                // next(u->x) = predecessor of (x->u) at x
                next[d ^ 1] = rot[(i + len - 1) % len];
            }
        }
        let mut seen = vec![false; darts];
        let mut faces = 0i64;
        for d0 in 0..darts {
            if seen[d0] {
                continue;
            }
            faces += 1;
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                d = next[d];
            }
        }
        if faces == target_faces {
            return true;
        }
        // odometer over the per-vertex permutations
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            if next_permutation(&mut perms[k]) {
                break;
            }
            k += 1;
        }
    }
}

/// Canonical string of a rooted subtree (AHU).
fn ahu(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| ahu(adj, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // centres by repeated leaf stripping
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut nxt = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    nxt.push(w);
                }
            }
        }
        layer = nxt;
    }
    layer.iter().map(|&c| ahu(&adj, c, usize::MAX)).min().unwrap()
}

/// One representative of every unlabelled tree on `n >= 2` vertices.
pub fn unlabelled_trees(n: usize) -> Vec<Tree> {
    assert!(n >= 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut code = vec![0usize; n - 2];
    loop {
        let edges = prufer_edges(n, &code);
        if seen.insert(tree_canonical(n, &edges)) {
            let tedges = edges.iter().enumerate().map(|(id, &(u, v))| TreeEdge { id, u, v }).collect();
            out.push(Tree::new((0..n).collect(), tedges).expect("Prufer code gives a tree"));
        }
        let mut k = 0;
        while k < code.len() {
            code[k] += 1;
            if code[k] < n {
                break;
            }
            code[k] = 0;
            k += 1;
        }
        if k == code.len() {
            break;
        }
    }
    out
}

fn prufer_edges(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCensus {
    pub instances: u64,
    pub agreements: u64,
    pub planar: u64,
    /// Per tree size: (instances, planar instances).
    pub by_size: BTreeMap<usize, (u64, u64)>,
    /// Up to ten disagreeing instances, described.
    pub disagreements: Vec<String>,
}

impl TreeCensus {
    fn merge(mut self, other: TreeCensus) -> TreeCensus {
        self.instances += other.instances;
        self.agreements += other.agreements;
        self.planar += other.planar;
        for (k, (a, b)) in other.by_size {
            let e = self.by_size.entry(k).or_default();
            e.0 += a;
            e.1 += b;
        }
        self.disagreements.extend(other.disagreements);
        self
    }
}

fn tree_instances(t: &Tree) -> TreeCensus {
    let leaves: BTreeSet<VertexId> = t.terminals().into_iter().collect();
    let others: Vec<VertexId> = t.vertices().iter().copied().filter(|v| !leaves.contains(v)).collect();
    let mut c = TreeCensus::default();
    let n = t.vertices().len();
    for mask in 0u32..(1 << others.len()) {
        let mut vstar: Vec<VertexId> = leaves.iter().copied().collect();
        vstar.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
        vstar.sort_unstable();
        let (first, rest) = vstar.split_first().unwrap();
        let mut perm: Vec<usize> = (0..rest.len()).collect();
        loop {
            let mut seq = vec![*first];
            seq.extend(perm.iter().map(|&i| rest[i]));
            let co = CyclicOrder::new(seq.clone()).unwrap();
            let criterion = tree_is_d_planar(t, &co).expect("terminals included").planar;
            let oracle = oracle_d_planar(t, &co);
            c.instances += 1;
            let e = c.by_size.entry(n).or_default();
            e.0 += 1;
            if oracle {
                c.planar += 1;
                e.1 += 1;
            }
            if criterion == oracle {
                c.agreements += 1;
            } else if c.disagreements.len() < 10 {
                c.disagreements.push(format!(
                    "edges {:?}, order {:?}: criterion {criterion}, oracle {oracle}",
                    t.edges(),
                    seq
                ));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    c
}

/// Cross-checks the path-count criterion against the oracle on all trees
/// with `2..=max_vertices` vertices, all boundary sets containing the
/// leaves, and all cyclic orders of each boundary set.
pub fn tree_census(max_vertices: usize) -> Result<TreeCensus, GraphError> {
    if max_vertices > MAX_ENUMERATION_VERTICES {
        return Err(GraphError::BudgetExceeded(MAX_ENUMERATION_VERTICES as u64));
    }
    let trees: Vec<Tree> = (2..=max_vertices).flat_map(unlabelled_trees).collect();
    let mut census = trees.par_iter().map(tree_instances).reduce(TreeCensus::default, TreeCensus::merge);
    census.disagreements.sort();
    census.disagreements.truncate(10);
    Ok(census)
}

/// All strict partial orders on `0..n`, built one element at a time by
/// choosing its down-set and up-set.
pub fn labelled_posets(n: usize) -> Vec<StrictPartialOrder> {
    let mut current: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for pairs in &current {
            let o = StrictPartialOrder::from_generators(k, pairs).unwrap();
            let less = |a: usize, b: usize| o.less(a, b);
            for down in 0u32..(1 << k) {
                let in_down = |x: usize| down >> x & 1 == 1;
                if (0..k).any(|x| in_down(x) && (0..k).any(|y| less(y, x) && !in_down(y))) {
                    continue;
                }
                for up in 0u32..(1 << k) {
                    if down & up != 0 {
                        continue;
                    }
                    let in_up = |x: usize| up >> x & 1 == 1;
                    if (0..k).any(|x| in_up(x) && (0..k).any(|y| less(x, y) && !in_up(y))) {
                        continue;
                    }
                    if (0..k).any(|d| in_down(d) && (0..k).any(|u| in_up(u) && !less(d, u))) {
                        continue;
                    }
                    let mut p = pairs.clone();
                    p.extend((0..k).filter(|&x| in_down(x)).map(|x| (x, k)));
                    p.extend((0..k).filter(|&x| in_up(x)).map(|x| (k, x)));
                    next.push(p);
                }
            }
        }
        current = next;
    }
    current.into_iter().map(|p| StrictPartialOrder::from_generators(n, &p).unwrap()).collect()
}

/// Multigraphs on `0..n` with edge multiplicities in {0, 1, 2}, connected,
/// minimum degree two. Each is a list of edges.
pub fn small_multigraphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &p in &pairs {
            for _ in 0..c % 3 {
                edges.push(p);
            }
            c /= 3;
        }
        let g = crate::graph::Multigraph::new(n, edges.clone());
        if (0..n).all(|v| g.degree(v) >= 2) && g.is_connected() {
            out.push(edges);
        }
    }
    out
}

/// Isomorphism-invariant key of a small ordered multigraph: the
/// lexicographically least (multiplicity matrix, order matrix) encoding
/// over all vertex permutations.
pub fn canonical_form(g: &PoGraph) -> Vec<u8> {
    let n = g.vertex_count();
    let mut mult = vec![0u8; n * n];
    for &(a, b) in g.graph().edges() {
        mult[a * n + b] += 1;
        mult[b * n + a] += 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u8>> = None;
    loop {
        let mut key = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                key.push(mult[perm[i] * n + perm[j]]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                key.push(g.less(perm[i], perm[j]) as u8);
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut out = vec![n as u8];
    out.extend(best.unwrap());
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCensus {
    pub instances: u64,
    /// Instance counts keyed by the first failing condition, or "delta".
    pub by_outcome: BTreeMap<String, u64>,
    /// Canonical forms of the accepted isomorphism classes.
    pub delta_classes: BTreeSet<Vec<u8>>,
}

impl GraphCensus {
    fn merge(mut self, other: GraphCensus) -> GraphCensus {
        self.instances += other.instances;
        for (k, v) in other.by_outcome {
            *self.by_outcome.entry(k).or_default() += v;
        }
        self.delta_classes.extend(other.delta_classes);
        self
    }
}

/// Runs the full check on every labelled (multigraph, order) pair with
/// `2..=max_vertices` vertices. The number of instances is capped by the
/// budget, which also bounds each cycle enumeration.
pub fn graph_census(max_vertices: usize, budget: Budget) -> Result<GraphCensus, GraphError> {
    if max_vertices > MAX_ENUMERATION_VERTICES {
        return Err(GraphError::BudgetExceeded(MAX_ENUMERATION_VERTICES as u64));
    }
    let mut jobs = Vec::new();
    let mut count: u64 = 0;
    for n in 2..=max_vertices {
        // every multigraph pairs with every order, so the order count alone bounds the work
        if count.saturating_add(LABELLED_POSETS[n]) > budget.0 {
            return Err(GraphError::BudgetExceeded(budget.0));
        }
        let graphs = small_multigraphs(n);
        let posets = labelled_posets(n);
        count = count.saturating_add(graphs.len() as u64 * posets.len() as u64);
        if count > budget.0 {
            return Err(GraphError::BudgetExceeded(budget.0));
        }
        jobs.push((n, graphs, posets));
    }
    let mut total = GraphCensus::default();
    for (n, graphs, posets) in jobs {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let part = graphs
            .par_iter()
            .map(|edges| {
                let mut c = GraphCensus::default();
                let base = PoGraph::from_indices(names.clone(), edges.clone(), &[]).expect("filtered multigraph");
                for o in &posets {
                    let g = base.with_order(o.clone());
                    let v = is_delta_graph(&g, budget)?;
                    c.instances += 1;
                    let key = v.first_failure().map_or("delta".to_string(), |r| r.condition.to_string());
                    *c.by_outcome.entry(key).or_default() += 1;
                    if v.delta {
                        c.delta_classes.insert(canonical_form(&g));
                    }
                }
                Ok(c)
            })
            .try_reduce(GraphCensus::default, |a, b| Ok(a.merge(b)))?;
        total = total.merge(part);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (2..=8).map(|n| unlabelled_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| labelled_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 19, 219, 4231]);
    }

    #[test]
    fn oracle_on_star() {
        let t = &unlabelled_trees(5).into_iter().find(|t| t.vertices().iter().any(|&v| t.degree(v) == 4)).unwrap();
        let centre = *t.vertices().iter().find(|&&v| t.degree(v) == 4).unwrap();
        let leaves = t.terminals();
        assert!(oracle_d_planar(t, &CyclicOrder::new(leaves.clone()).unwrap()));
        // interleaved order: still a relabelled star
        let il = vec![leaves[0], leaves[2], leaves[1], leaves[3]];
        assert!(oracle_d_planar(t, &CyclicOrder::new(il).unwrap()));
        // centre on the circle between two leaves
        let mut with_c = leaves.clone();
        with_c.insert(2, centre);
        assert!(oracle_d_planar(t, &CyclicOrder::new(with_c).unwrap()));
    }

    #[test]
    fn oracle_rejects_crossing_cherries() {
        let edges = vec![
            TreeEdge { id: 0, u: 0, v: 1 },
            TreeEdge { id: 1, u: 0, v: 2 },
            TreeEdge { id: 2, u: 0, v: 3 },
            TreeEdge { id: 3, u: 3, v: 4 },
            TreeEdge { id: 4, u: 3, v: 5 },
        ];
        let t = Tree::new((0..6).collect(), edges).unwrap();
        assert!(oracle_d_planar(&t, &CyclicOrder::new(vec![1, 2, 4, 5]).unwrap()));
        assert!(!oracle_d_planar(&t, &CyclicOrder::new(vec![1, 4, 2, 5]).unwrap()));
    }

    #[test]
    fn small_tree_census_agrees() {
        let c = tree_census(5).unwrap();
        assert_eq!(c.agreements, c.instances, "{:?}", c.disagreements);
        let c3 = tree_census(3).unwrap();
        assert_eq!(c3.planar, c3.instances);
    }

    #[test]
    fn graph_census_contains_g1() {
        let c = graph_census(4, Budget::default()).unwrap();
        assert!(c.by_outcome["delta"] > 0);
        assert!(c.delta_classes.contains(&canonical_form(&fixtures::g1())));
        assert!(matches!(graph_census(5, Budget(1000)), Err(GraphError::BudgetExceeded(1000))));
    }
}
