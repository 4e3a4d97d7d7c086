//! Multigraphs with a vertex order, simple cycle enumeration, and the
//! splitting of a graph into a distinguished cycle plus a forest.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::StrictPartialOrder;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Default number of DFS steps allowed during cycle enumeration.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("vertex {0} has degree below two")]
    DegreeBelowTwo(String),
    #[error("edge {edge} is a self-loop at {vertex}")]
    SelfLoop { edge: EdgeId, vertex: String },
    #[error("order relation contains a cycle: {}", .0.join(" < "))]
    OrderCycle(Vec<String>),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("unknown vertex id {0}")]
    UnknownId(String),
    #[error("cycle enumeration exceeded the budget of {0} steps")]
    BudgetExceeded(u64),
    #[error("component {0} of the complement of the cycle is not a tree")]
    NotAForest(usize),
    #[error("vertex {0} is not in the tree")]
    NotInTree(VertexId),
    #[error("not a simple cycle of the graph: {0}")]
    NotACycle(String),
}

/// Step budget for exponential enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

/// Undirected multigraph on vertices `0..n`. Parallel edges are distinct
/// edges with their own ids; self-loops are not representable through
/// [`PoGraph`] but the raw type does not reject them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            assert!(u < n && v < n, "edge {id} out of range");
            adj[u].push((id, v));
            if u != v {
                adj[v].push((id, u));
            }
        }
        Multigraph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Incident `(edge, neighbour)` pairs of `v`.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].iter().map(|&(e, _)| if self.edges[e].0 == self.edges[e].1 { 2 } else { 1 }).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }
}

/// Finite connected multigraph with a strict partial order on its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    graph: Multigraph,
    order: StrictPartialOrder,
}

impl PoGraph {
    /// Validates and builds a graph from indexed data. `order_pairs` may be
    /// any generating set; its transitive closure is taken.
    pub fn from_indices(
        names: Vec<String>,
        edges: Vec<(VertexId, VertexId)>,
        order_pairs: &[(VertexId, VertexId)],
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let n = names.len();
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::SelfLoop { edge: id, vertex: names[u].clone() });
            }
        }
        let order = StrictPartialOrder::from_generators(n, order_pairs)
            .map_err(|cycle| GraphError::OrderCycle(cycle.into_iter().map(|v| names[v].clone()).collect()))?;
        let graph = Multigraph::new(n, edges);
        if !graph.is_connected() {
            return Err(GraphError::DisconnectedGraph);
        }
        if let Some(v) = (0..n).find(|&v| graph.degree(v) < 2) {
            return Err(GraphError::DegreeBelowTwo(names[v].clone()));
        }
        Ok(PoGraph { names, index, graph, order })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn order(&self) -> &StrictPartialOrder {
        &self.order
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.graph.degree(v)
    }

    pub fn less(&self, u: VertexId, v: VertexId) -> bool {
        self.order.less(u, v)
    }

    pub fn comparable(&self, u: VertexId, v: VertexId) -> bool {
        self.order.comparable(u, v)
    }

    /// Same graph with a different order on the vertices.
    pub fn with_order(&self, order: StrictPartialOrder) -> Self {
        assert_eq!(order.len(), self.vertex_count());
        PoGraph { order, ..self.clone() }
    }
}

/// Builds a [`PoGraph`] from named vertices, edges and order pairs
/// (`(a, b)` meaning `a < b`).
pub fn build_graph<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)], order: &[(S, S)]) -> Result<PoGraph, GraphError> {
    let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_owned()).collect();
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.as_str(), i).is_some() {
            return Err(GraphError::DuplicateVertex(n.clone()));
        }
    }
    let lookup = |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| GraphError::UnknownId(s.as_ref().to_owned()));
    let edges = edges.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>, GraphError>>()?;
    let pairs = order.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>, GraphError>>()?;
    PoGraph::from_indices(names, edges, &pairs)
}

/// A simple cycle: `edges[i]` joins `vertices[i]` and `vertices[i + 1]`
/// (indices taken cyclically). Length-two cycles are pairs of parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    /// Checks that the listed vertices and edges form a simple cycle of `g`.
    pub fn new(g: &Multigraph, vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Result<Self, GraphError> {
        let len = vertices.len();
        if len < 2 || edges.len() != len {
            return Err(GraphError::NotACycle("need at least two vertices and one edge per vertex".into()));
        }
        let distinct_v: BTreeSet<_> = vertices.iter().collect();
        let distinct_e: BTreeSet<_> = edges.iter().collect();
        if distinct_v.len() != len || distinct_e.len() != len {
            return Err(GraphError::NotACycle("repeated vertex or edge".into()));
        }
        for i in 0..len {
            let e = edges[i];
            if e >= g.edge_count() {
                return Err(GraphError::NotACycle(format!("edge {e} out of range")));
            }
            let (a, b) = g.endpoints(e);
            let (u, v) = (vertices[i], vertices[(i + 1) % len]);
            if !((a == u && b == v) || (a == v && b == u)) {
                return Err(GraphError::NotACycle(format!("edge {e} does not join {u} and {v}")));
            }
        }
        Ok(Cycle { vertices, edges })
    }

    /// Builds a cycle from a vertex sequence, picking the lowest-id unused
    /// edge between consecutive vertices.
    pub fn from_vertices(g: &Multigraph, vertices: &[VertexId]) -> Result<Self, GraphError> {
        let len = vertices.len();
        let mut used = BTreeSet::new();
        let mut edges = Vec::with_capacity(len);
        for i in 0..len {
            let (u, v) = (vertices[i], vertices[(i + 1) % len]);
            let e = g
                .incident(u)
                .iter()
                .filter(|&&(e, w)| w == v && !used.contains(&e))
                .map(|&(e, _)| e)
                .min()
                .ok_or_else(|| GraphError::NotACycle(format!("no free edge between {u} and {v}")))?;
            used.insert(e);
            edges.push(e);
        }
        Cycle::new(g, vertices.to_vec(), edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Cycle neighbours `(previous, next)` of the vertex at position `i`.
    pub fn neighbours(&self, i: usize) -> (VertexId, VertexId) {
        let len = self.len();
        (self.vertices[(i + len - 1) % len], self.vertices[(i + 1) % len])
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }
}

/// Every simple cycle with at most `max_len` edges, each reported once.
pub fn simple_cycles(g: &Multigraph, max_len: usize, budget: Budget) -> Result<Vec<Cycle>, GraphError> {
    simple_cycles_where(g, max_len, budget, |_| true)
}

/// Simple cycles of the subgraph made of the edges accepted by `keep`.
pub fn simple_cycles_where(
    g: &Multigraph,
    max_len: usize,
    budget: Budget,
    keep: impl Fn(EdgeId) -> bool,
) -> Result<Vec<Cycle>, GraphError> {
    struct Search<'a, F> {
        g: &'a Multigraph,
        keep: F,
        max_len: usize,
        steps: u64,
        budget: u64,
        on_path: Vec<bool>,
        verts: Vec<VertexId>,
        edges: Vec<EdgeId>,
        out: Vec<Cycle>,
    }

    impl<F: Fn(EdgeId) -> bool> Search<'_, F> {
        fn extend(&mut self, start: VertexId, v: VertexId) -> Result<(), GraphError> {
            for &(e, w) in self.g.incident(v) {
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(GraphError::BudgetExceeded(self.budget));
                }
                if !(self.keep)(e) || w < start || w == v {
                    continue;
                }
                if w == start {
                    let first = self.edges.first().copied();
                    // each cycle is seen once per direction; keep one
                    if let Some(first) = first {
                        if e != first && first < e && self.edges.len() < self.max_len {
                            let mut edges = self.edges.clone();
                            edges.push(e);
                            self.out.push(Cycle { vertices: self.verts.clone(), edges });
                        }
                    }
                    continue;
                }
                if self.on_path[w] || self.edges.len() + 1 >= self.max_len {
                    continue;
                }
                self.on_path[w] = true;
                self.verts.push(w);
                self.edges.push(e);
                self.extend(start, w)?;
                self.edges.pop();
                self.verts.pop();
                self.on_path[w] = false;
            }
            Ok(())
        }
    }

    let mut search = Search {
        g,
        keep,
        max_len,
        steps: 0,
        budget: budget.0,
        on_path: vec![false; g.vertex_count()],
        verts: Vec::new(),
        edges: Vec::new(),
        out: Vec::new(),
    };
    for s in 0..g.vertex_count() {
        search.on_path[s] = true;
        search.verts.push(s);
        search.extend(s, s)?;
        search.verts.pop();
        search.on_path[s] = false;
    }
    Ok(search.out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl TreeEdge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A finite tree given by its vertex set and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    vertices: Vec<VertexId>,
    edges: Vec<TreeEdge>,
    adj: HashMap<VertexId, Vec<TreeEdge>>,
}

impl Tree {
    /// Fails with [`GraphError::NotAForest`] when the edges do not form a
    /// spanning tree of `vertices`.
    pub fn new(mut vertices: Vec<VertexId>, edges: Vec<TreeEdge>) -> Result<Self, GraphError> {
        vertices.sort_unstable();
        vertices.dedup();
        let mut adj: HashMap<VertexId, Vec<TreeEdge>> = vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &edges {
            for x in [e.u, e.v] {
                adj.get_mut(&x).ok_or(GraphError::NotInTree(x))?.push(*e);
            }
        }
        let tree = Tree { vertices, edges, adj };
        if tree.edges.len() + 1 != tree.vertices.len() || !tree.is_connected() {
            return Err(GraphError::NotAForest(0));
        }
        Ok(tree)
    }

    fn is_connected(&self) -> bool {
        let Some(&root) = self.vertices.first() else {
            return false;
        };
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for e in &self.adj[&x] {
                let y = e.other(x);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn incident(&self, v: VertexId) -> &[TreeEdge] {
        self.adj.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    /// Leaves (degree-one vertices).
    pub fn terminals(&self) -> Vec<VertexId> {
        self.vertices.iter().copied().filter(|&v| self.degree(v) == 1).collect()
    }

    /// Vertices reachable from `start` without passing through `blocked`.
    pub fn reachable_avoiding(&self, start: VertexId, blocked: VertexId) -> Vec<VertexId> {
        let mut seen = BTreeSet::from([start, blocked]);
        let mut out = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for e in self.incident(x) {
                let y = e.other(x);
                if seen.insert(y) {
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out
    }
}

/// The unique path between two tree vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl TreePath {
    pub fn reversed(&self) -> TreePath {
        TreePath {
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }
}

pub fn tree_path(t: &Tree, u: VertexId, v: VertexId) -> Result<TreePath, GraphError> {
    for x in [u, v] {
        if !t.contains(x) {
            return Err(GraphError::NotInTree(x));
        }
    }
    let mut parent: HashMap<VertexId, (VertexId, EdgeId)> = HashMap::new();
    let mut queue = VecDeque::from([u]);
    let mut seen = BTreeSet::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            break;
        }
        for e in t.incident(x) {
            let y = e.other(x);
            if seen.insert(y) {
                parent.insert(y, (x, e.id));
                queue.push_back(y);
            }
        }
    }
    let mut vertices = vec![v];
    let mut edges = Vec::new();
    let mut x = v;
    while x != u {
        let (p, e) = parent[&x];
        edges.push(e);
        vertices.push(p);
        x = p;
    }
    vertices.reverse();
    edges.reverse();
    Ok(TreePath { vertices, edges })
}

/// A cycle together with the forest formed by the closure of its
/// complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub gamma: Cycle,
    pub trees: Vec<Tree>,
    /// `attach[i]`: vertices shared by tree `i` and the cycle, in cycle order.
    pub attach: Vec<Vec<VertexId>>,
    /// `terminal[i]`: leaves of tree `i`.
    pub terminal: Vec<Vec<VertexId>>,
    tree_of: Vec<Option<usize>>,
}

impl Decomposition {
    pub fn tree_of(&self, v: VertexId) -> Option<usize> {
        self.tree_of[v]
    }

    /// All attachment vertices of all trees.
    pub fn all_attach(&self) -> BTreeSet<VertexId> {
        self.attach.iter().flatten().copied().collect()
    }

    pub fn on_gamma(&self, v: VertexId) -> bool {
        self.gamma.vertices.contains(&v)
    }
}

/// Splits `g` into `gamma` and the components of the remaining edges.
pub fn decompose(g: &Multigraph, gamma: &Cycle) -> Result<Decomposition, GraphError> {
    let gamma = Cycle::new(g, gamma.vertices.clone(), gamma.edges.clone())?;
    let on_gamma: BTreeSet<EdgeId> = gamma.edge_set();
    let n = g.vertex_count();
    let mut dsu: Vec<usize> = (0..n).collect();
    fn find(dsu: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while dsu[r] != r {
            r = dsu[r];
        }
        let mut y = x;
        while dsu[y] != r {
            let next = dsu[y];
            dsu[y] = r;
            y = next;
        }
        r
    }
    let rest: Vec<EdgeId> = (0..g.edge_count()).filter(|e| !on_gamma.contains(e)).collect();
    for &e in &rest {
        let (a, b) = g.endpoints(e);
        let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
        if ra != rb {
            dsu[ra] = rb;
        }
    }
    // components keyed by root, ordered by smallest edge id (rest is sorted)
    let mut comp_index: HashMap<usize, usize> = HashMap::new();
    let mut comp_edges: Vec<Vec<TreeEdge>> = Vec::new();
    for &e in &rest {
        let (a, b) = g.endpoints(e);
        let root = find(&mut dsu, a);
        let idx = *comp_index.entry(root).or_insert_with(|| {
            comp_edges.push(Vec::new());
            comp_edges.len() - 1
        });
        comp_edges[idx].push(TreeEdge { id: e, u: a, v: b });
    }
    let position: HashMap<VertexId, usize> = gamma.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut trees = Vec::new();
    let mut attach = Vec::new();
    let mut terminal = Vec::new();
    let mut tree_of = vec![None; n];
    for (i, edges) in comp_edges.into_iter().enumerate() {
        let vertices: BTreeSet<VertexId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        let tree = Tree::new(vertices.into_iter().collect(), edges).map_err(|_| GraphError::NotAForest(i))?;
        let mut att: Vec<VertexId> = tree.vertices().iter().copied().filter(|v| position.contains_key(v)).collect();
        att.sort_by_key(|v| position[v]);
        for &v in tree.vertices() {
            tree_of[v] = Some(i);
        }
        terminal.push(tree.terminals());
        attach.push(att);
        trees.push(tree);
    }
    Ok(Decomposition { gamma, trees, attach, terminal, tree_of })
}
