//! The condition battery deciding whether a partially ordered graph is a
//! Δ-graph.

use serde::{Deserialize, Serialize};

use crate::graph::{decompose, simple_cycles_where, Budget, Cycle, Decomposition, GraphError, PoGraph, VertexId};
use crate::order::{check_a4, A4Verdict};
use crate::planarity::graph_is_disk_planar;

/// Maximum number of competing cycles listed when uniqueness fails.
const MAX_LISTED_CYCLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    A1,
    A2,
    S2,
    S3,
    A3,
    A4,
    /// Every order-minimal and order-maximal vertex is a degree-2 cycle vertex.
    Extremal,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Condition::A1 => "A1",
            Condition::A2 => "A2",
            Condition::S2 => "S2",
            Condition::S3 => "S3",
            Condition::A3 => "A3",
            Condition::A4 => "A4",
            Condition::Extremal => "extremal",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl ConditionReport {
    fn from_witnesses(condition: Condition, witnesses: Vec<String>) -> Self {
        ConditionReport { condition, passed: witnesses.is_empty(), witnesses }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPair {
    pub tree_index: usize,
    pub pair: (VertexId, VertexId),
    /// Cycle vertices strictly between `pair.0` and `pair.1`, walking forward.
    pub alpha: Vec<VertexId>,
    /// Cycle neighbours of `pair.0` and `pair.1` inside `alpha`.
    pub tilde: (VertexId, VertexId),
}

fn cycle_names(g: &PoGraph, c: &Cycle) -> String {
    let names: Vec<&str> = c.vertices.iter().map(|&v| g.name(v)).collect();
    format!("({})", names.join(","))
}

/// Simple cycles whose consecutive vertices are pairwise comparable.
pub fn find_cr_cycles(g: &PoGraph, budget: Budget) -> Result<Vec<Cycle>, GraphError> {
    let mg = g.graph();
    simple_cycles_where(mg, usize::MAX, budget, |e| {
        let (u, v) = mg.endpoints(e);
        g.comparable(u, v)
    })
}

/// Uniform relation of trees to outside vertices, even interior degrees,
/// pairwise incomparable tree vertices.
pub fn check_a2(g: &PoGraph, dec: &Decomposition) -> ConditionReport {
    let mut w = Vec::new();
    let n = g.vertex_count();
    for (i, tree) in dec.trees.iter().enumerate() {
        let verts = tree.vertices();
        for v in (0..n).filter(|&v| !tree.contains(v)) {
            let rel = |x: VertexId| (g.less(x, v), g.less(v, x));
            let first = rel(verts[0]);
            if let Some(&x) = verts.iter().find(|&&x| rel(x) != first) {
                w.push(format!(
                    "tree {i}: {} relates differently to {} and {}",
                    g.name(v),
                    g.name(verts[0]),
                    g.name(x)
                ));
            }
        }
        for &v in verts.iter().filter(|&&v| !dec.on_gamma(v)) {
            let d = g.degree(v);
            if d % 2 == 1 || d < 4 {
                let parity = if d % 2 == 1 { "odd" } else { "even" };
                w.push(format!("interior vertex {} has {parity} degree {d}", g.name(v)));
            }
        }
        for (a, &x) in verts.iter().enumerate() {
            for &y in &verts[a + 1..] {
                if g.comparable(x, y) {
                    w.push(format!("tree {i}: {} and {} are comparable", g.name(x), g.name(y)));
                }
            }
        }
    }
    ConditionReport::from_witnesses(Condition::A2, w)
}

/// Local behaviour of the order along the cycle at every cycle vertex.
pub fn check_a3(g: &PoGraph, dec: &Decomposition) -> ConditionReport {
    let mut w = Vec::new();
    let gamma = &dec.gamma;
    for (i, &v) in gamma.vertices.iter().enumerate() {
        let (v1, v2) = gamma.neighbours(i);
        let d = g.degree(v);
        let name = g.name(v);
        if d == 2 {
            if g.degree(v1) <= 2 || g.degree(v2) <= 2 {
                w.push(format!("{name} has degree 2 next to a degree-2 vertex"));
            } else if dec.tree_of(v1).is_none() || dec.tree_of(v1) != dec.tree_of(v2) {
                w.push(format!(
                    "{name} has degree 2 but neighbours {} and {} are not in one tree",
                    g.name(v1),
                    g.name(v2)
                ));
            }
        } else {
            let below = (g.less(v1, v), g.less(v2, v));
            let above = (g.less(v, v1), g.less(v, v2));
            let extremum = (below.0 && below.1) || (above.0 && above.1);
            let monotone = (below.0 && above.1) || (above.0 && below.1);
            if d.is_multiple_of(2) && !extremum {
                w.push(format!("{name} has even degree {d} but is not a local extremum along the cycle"));
            } else if d % 2 == 1 && !monotone {
                w.push(format!("{name} has odd degree {d} but is not passed monotonically"));
            }
        }
    }
    ConditionReport::from_witnesses(Condition::A3, w)
}

/// Pairs of tree `i` cutting off a cycle arc free of the tree's own
/// attachments that meets another tree. Each qualifying arc is reported
/// once, so a two-point attachment set may produce two entries.
pub fn boundary_pairs(dec: &Decomposition, i: usize) -> Vec<BoundaryPair> {
    let att = &dec.attach[i];
    let gamma = &dec.gamma;
    let len = gamma.len();
    let mut out = Vec::new();
    if att.len() < 2 {
        return out;
    }
    for k in 0..att.len() {
        let (v1, v2) = (att[k], att[(k + 1) % att.len()]);
        let p1 = gamma.position(v1).expect("attachment on cycle");
        let p2 = gamma.position(v2).expect("attachment on cycle");
        let alpha: Vec<VertexId> = (1..(p2 + len - p1) % len).map(|s| gamma.vertices[(p1 + s) % len]).collect();
        let meets_other = alpha.iter().any(|&v| matches!(dec.tree_of(v), Some(t) if t != i));
        if !meets_other {
            continue;
        }
        let tilde = (alpha[0], *alpha.last().unwrap());
        out.push(BoundaryPair { tree_index: i, pair: (v1, v2), alpha, tilde });
    }
    out
}

/// Both cycle neighbours inside the arc of every boundary pair attach to
/// one and the same other tree.
pub fn check_s3(g: &PoGraph, dec: &Decomposition) -> ConditionReport {
    let mut w = Vec::new();
    for i in 0..dec.trees.len() {
        for bp in boundary_pairs(dec, i) {
            let (t1, t2) = (dec.tree_of(bp.tilde.0), dec.tree_of(bp.tilde.1));
            let ok = matches!((t1, t2), (Some(a), Some(b)) if a == b && a != i);
            if !ok {
                let show = |t: Option<usize>| t.map_or("no tree".to_string(), |t| format!("tree {t}"));
                w.push(format!(
                    "boundary pair ({},{}) of tree {i}: neighbours {} ({}) and {} ({})",
                    g.name(bp.pair.0),
                    g.name(bp.pair.1),
                    g.name(bp.tilde.0),
                    show(t1),
                    g.name(bp.tilde.1),
                    show(t2)
                ));
            }
        }
    }
    ConditionReport::from_witnesses(Condition::S3, w)
}

/// Order-minimal and order-maximal vertices are degree-2 cycle vertices.
pub fn check_extremal(g: &PoGraph, dec: &Decomposition) -> ConditionReport {
    let order = g.order();
    let mut extremal = order.minimal();
    extremal.extend(order.maximal());
    extremal.sort_unstable();
    extremal.dedup();
    let w = extremal
        .into_iter()
        .filter(|&v| !(dec.on_gamma(v) && g.degree(v) == 2))
        .map(|v| {
            format!(
                "extremal vertex {} has degree {} and lies {} the cycle",
                g.name(v),
                g.degree(v),
                if dec.on_gamma(v) { "on" } else { "off" }
            )
        })
        .collect();
    ConditionReport::from_witnesses(Condition::Extremal, w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaVerdict {
    pub delta: bool,
    /// Reports in evaluation order, ending at the first failure.
    pub reports: Vec<ConditionReport>,
    pub gamma: Option<Cycle>,
    pub decomposition: Option<Decomposition>,
    /// Present when `delta` holds.
    pub extremal: Option<ConditionReport>,
    pub a4: A4Verdict,
}

impl DeltaVerdict {
    pub fn first_failure(&self) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| !r.passed)
    }
}

/// Runs A1, A2, S2, S3 and A3 in that order, stopping at the first failure.
pub fn is_delta_graph(g: &PoGraph, budget: Budget) -> Result<DeltaVerdict, GraphError> {
    let a4 = check_a4(g.order());
    let mut verdict =
        DeltaVerdict { delta: false, reports: Vec::new(), gamma: None, decomposition: None, extremal: None, a4 };

    let cycles = find_cr_cycles(g, budget)?;
    if cycles.len() != 1 {
        let w = if cycles.is_empty() {
            vec!["no cycle with pairwise comparable neighbours".to_string()]
        } else {
            let mut w = vec![format!("{} candidate cycles", cycles.len())];
            w.extend(cycles.iter().take(MAX_LISTED_CYCLES).map(|c| cycle_names(g, c)));
            w
        };
        verdict.reports.push(ConditionReport::from_witnesses(Condition::A1, w));
        return Ok(verdict);
    }
    let gamma = cycles.into_iter().next().unwrap();
    verdict.reports.push(ConditionReport::from_witnesses(Condition::A1, vec![]));
    verdict.gamma = Some(gamma.clone());

    let dec = match decompose(g.graph(), &gamma) {
        Ok(dec) => dec,
        Err(GraphError::NotAForest(i)) => {
            let w = vec![format!("component {i} of the graph minus the cycle contains a cycle")];
            verdict.reports.push(ConditionReport::from_witnesses(Condition::A2, w));
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    verdict.decomposition = Some(dec.clone());

    let a2 = check_a2(g, &dec);
    let stop = !a2.passed;
    verdict.reports.push(a2);
    if stop {
        return Ok(verdict);
    }

    let planar = graph_is_disk_planar(&dec);
    let mut w = Vec::new();
    for (i, t) in planar.trees.iter().enumerate() {
        if !t.planar {
            let bad: Vec<String> = t
                .edge_counts
                .iter()
                .filter(|&(_, &c)| c != 2)
                .map(|(e, c)| {
                    let (a, b) = g.graph().endpoints(*e);
                    format!("{}-{} carries {c}", g.name(a), g.name(b))
                })
                .collect();
            w.push(format!("tree {i} is not planar against the cycle: {}", bad.join(", ")));
        }
    }
    if let Some(sep) = &planar.separation.witness {
        w.push(format!(
            "attachments of tree {} split by tree {}: {} and {} lie in different components",
            sep.n,
            sep.m,
            g.name(sep.a),
            g.name(sep.b)
        ));
    }
    let s2 = ConditionReport::from_witnesses(Condition::S2, w);
    let stop = !s2.passed;
    verdict.reports.push(s2);
    if stop {
        return Ok(verdict);
    }

    let s3 = check_s3(g, &dec);
    let stop = !s3.passed;
    verdict.reports.push(s3);
    if stop {
        return Ok(verdict);
    }

    let a3 = check_a3(g, &dec);
    let stop = !a3.passed;
    verdict.reports.push(a3);
    if stop {
        return Ok(verdict);
    }

    verdict.delta = true;
    verdict.extremal = Some(check_extremal(g, &dec));
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(g: &PoGraph, s: &[&str]) -> Vec<VertexId> {
        s.iter().map(|x| g.id(x).unwrap()).collect()
    }

    #[test]
    fn cr_cycles_of_fixtures() {
        let g = fixtures::g1();
        let c = find_cr_cycles(&g, Budget::default()).unwrap();
        assert_eq!(c.len(), 1);
        let mut v = c[0].vertices.clone();
        v.sort_unstable();
        let mut want = ids(&g, &["m", "a", "M", "b"]);
        want.sort_unstable();
        assert_eq!(v, want);
        assert!(find_cr_cycles(&fixtures::g1_missing_pair(), Budget::default()).unwrap().is_empty());
        let g3 = fixtures::g3();
        let c = find_cr_cycles(&g3, Budget::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), 8);
    }

    fn dec_of(g: &PoGraph) -> Decomposition {
        let c = find_cr_cycles(g, Budget::default()).unwrap().remove(0);
        decompose(g.graph(), &c).unwrap()
    }

    #[test]
    fn a2_cases() {
        assert!(check_a2(&fixtures::g3(), &dec_of(&fixtures::g3())).passed);
        assert!(check_a2(&fixtures::g1(), &dec_of(&fixtures::g1())).passed);
        let g = fixtures::g3_odd_centre();
        let r = check_a2(&g, &dec_of(&g));
        assert!(!r.passed);
        assert!(r.witnesses.iter().any(|w| w == "interior vertex c has odd degree 3"), "{:?}", r.witnesses);
    }

    #[test]
    fn a3_cases() {
        assert!(check_a3(&fixtures::g1(), &dec_of(&fixtures::g1())).passed);
        assert!(check_a3(&fixtures::g3(), &dec_of(&fixtures::g3())).passed);
        let g = fixtures::g4_flipped();
        let r = check_a3(&g, &dec_of(&g));
        assert!(!r.passed);
        assert!(r.witnesses[0].contains("a1"), "{:?}", r.witnesses);
    }

    #[test]
    fn boundary_pairs_of_g4() {
        let g = fixtures::g4();
        let dec = dec_of(&g);
        let t1 = dec.tree_of(g.id("a1").unwrap()).unwrap();
        let t2 = dec.tree_of(g.id("a2").unwrap()).unwrap();
        let bp1 = boundary_pairs(&dec, t1);
        assert_eq!(bp1.len(), 1);
        let mut pair = [bp1[0].pair.0, bp1[0].pair.1];
        pair.sort_unstable();
        let mut want = ids(&g, &["a1", "b1"]);
        want.sort_unstable();
        assert_eq!(pair.to_vec(), want);
        let mut alpha = bp1[0].alpha.clone();
        alpha.sort_unstable();
        let mut want = ids(&g, &["a2", "M", "b2"]);
        want.sort_unstable();
        assert_eq!(alpha, want);
        let bp2 = boundary_pairs(&dec, t2);
        assert_eq!(bp2.len(), 1);
        let mut alpha = bp2[0].alpha.clone();
        alpha.sort_unstable();
        let mut want = ids(&g, &["a1", "m", "b1"]);
        want.sort_unstable();
        assert_eq!(alpha, want);
        assert!(check_s3(&g, &dec).passed);
        // G1 has a single tree
        assert!(boundary_pairs(&dec_of(&fixtures::g1()), 0).is_empty());
    }

    #[test]
    fn s3_failure_names_both_trees() {
        let g = fixtures::three_chords();
        let dec = dec_of(&g);
        let r = check_s3(&g, &dec);
        assert!(!r.passed);
        let t2 = dec.tree_of(g.id("a2").unwrap()).unwrap();
        let t3 = dec.tree_of(g.id("a3").unwrap()).unwrap();
        assert!(r.witnesses[0].contains(&format!("tree {t2}")) && r.witnesses[0].contains(&format!("tree {t3}")));
    }

    #[test]
    fn delta_verdicts() {
        for g in [fixtures::g1(), fixtures::g3(), fixtures::g4()] {
            let v = is_delta_graph(&g, Budget::default()).unwrap();
            assert!(v.delta, "{:?}", v.reports);
            assert_eq!(v.reports.len(), 5);
            assert!(v.extremal.unwrap().passed);
        }
        let v = is_delta_graph(&fixtures::g1_missing_pair(), Budget::default()).unwrap();
        assert_eq!(v.first_failure().unwrap().condition, Condition::A1);
        let v = is_delta_graph(&fixtures::interleaved_chords(), Budget::default()).unwrap();
        assert_eq!(v.first_failure().unwrap().condition, Condition::S2);
        assert!(v.first_failure().unwrap().witnesses[0].contains("different components"));
        let v = is_delta_graph(&fixtures::three_chords(), Budget::default()).unwrap();
        assert_eq!(v.first_failure().unwrap().condition, Condition::S3);
        let v = is_delta_graph(&fixtures::g4_flipped(), Budget::default()).unwrap();
        assert_eq!(v.first_failure().unwrap().condition, Condition::A3);
        let v = is_delta_graph(&fixtures::parallel_pair(), Budget::default()).unwrap();
        assert_eq!(v.first_failure().unwrap().condition, Condition::A3);
    }
}
