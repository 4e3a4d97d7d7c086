//! Small named graphs used throughout the tests and documentation.

use crate::graph::{build_graph, PoGraph};

fn make(vertices: &[&str], edges: &[(&str, &str)], order: &[(&str, &str)]) -> PoGraph {
    build_graph(vertices, edges, order).expect("fixture is valid")
}

/// Every element of `lo` below every element of `hi`.
fn all_below<'a>(lo: &[&'a str], hi: &[&'a str]) -> Vec<(&'a str, &'a str)> {
    lo.iter().flat_map(|&a| hi.iter().map(move |&b| (a, b))).collect()
}

/// Square `m a M b` with the chord `ab`: the simplest height function.
pub fn g1() -> PoGraph {
    make(
        &["m", "a", "b", "M"],
        &[("m", "a"), ("m", "b"), ("a", "M"), ("b", "M"), ("a", "b")],
        &[("m", "a"), ("m", "b"), ("a", "M"), ("b", "M")],
    )
}

/// `g1` without `m < a`; no cycle has comparable neighbours everywhere.
pub fn g1_missing_pair() -> PoGraph {
    make(
        &["m", "a", "b", "M"],
        &[("m", "a"), ("m", "b"), ("a", "M"), ("b", "M"), ("a", "b")],
        &[("m", "b"), ("a", "M"), ("b", "M")],
    )
}

const G3_CYCLE: [&str; 8] = ["w1", "M1", "w2", "m1", "w3", "M2", "w4", "m2"];

fn g3_edges(with_w4: bool) -> Vec<(&'static str, &'static str)> {
    let mut edges: Vec<_> = (0..8).map(|i| (G3_CYCLE[i], G3_CYCLE[(i + 1) % 8])).collect();
    for w in ["w1", "w2", "w3", "w4"] {
        if with_w4 || w != "w4" {
            edges.push(("c", w));
        }
    }
    edges
}

fn g3_order() -> Vec<(&'static str, &'static str)> {
    let lo = all_below(&["m1", "m2"], &["c", "w1", "w2", "w3", "w4"]);
    let hi = all_below(&["c", "w1", "w2", "w3", "w4"], &["M1", "M2"]);
    lo.into_iter().chain(hi).collect()
}

/// Saddle: an octagon with a four-armed star at the centre.
pub fn g3() -> PoGraph {
    let mut v = G3_CYCLE.to_vec();
    v.push("c");
    make(&v, &g3_edges(true), &g3_order())
}

/// `g3` with the arm `c-w4` removed, leaving the centre with degree 3.
pub fn g3_odd_centre() -> PoGraph {
    let mut v = G3_CYCLE.to_vec();
    v.push("c");
    make(&v, &g3_edges(false), &g3_order())
}

const G4_CYCLE: [&str; 6] = ["m", "a1", "a2", "M", "b2", "b1"];

fn g4_with(order: &[(&str, &str)]) -> PoGraph {
    let mut edges: Vec<_> = (0..6).map(|i| (G4_CYCLE[i], G4_CYCLE[(i + 1) % 6])).collect();
    edges.push(("a1", "b1"));
    edges.push(("a2", "b2"));
    make(&G4_CYCLE, &edges, order)
}

/// Hexagon with two parallel level chords `a1b1` below `a2b2`.
pub fn g4() -> PoGraph {
    let mut order = all_below(&["m"], &["a1", "b1"]);
    order.extend(all_below(&["a1", "b1"], &["a2", "b2"]));
    order.extend(all_below(&["a2", "b2"], &["M"]));
    g4_with(&order)
}

/// `g4` with the chords swapped in height, so `a1` sits above both neighbours.
pub fn g4_flipped() -> PoGraph {
    let mut order = all_below(&["m"], &["a2", "b2"]);
    order.extend(all_below(&["a2", "b2"], &["a1", "b1"]));
    order.extend(all_below(&["a1", "b1"], &["M"]));
    g4_with(&order)
}

/// Square `a1 a2 b1 b2` with crossing chords `a1b1` and `a2b2`.
pub fn interleaved_chords() -> PoGraph {
    let cycle = ["a1", "a2", "b1", "b2"];
    let mut edges: Vec<_> = (0..4).map(|i| (cycle[i], cycle[(i + 1) % 4])).collect();
    edges.push(("a1", "b1"));
    edges.push(("a2", "b2"));
    make(&cycle, &edges, &all_below(&["a1", "b1"], &["a2", "b2"]))
}

/// Three chords where the arc cut off by the first one meets two others.
pub fn three_chords() -> PoGraph {
    let cycle = ["a1", "a2", "p", "b2", "a3", "q", "b3", "b1", "r"];
    let mut edges: Vec<_> = (0..9).map(|i| (cycle[i], cycle[(i + 1) % 9])).collect();
    edges.push(("a1", "b1"));
    edges.push(("a2", "b2"));
    edges.push(("a3", "b3"));
    // r < T1 < T2 < T3, p above T2, q above T3
    let mut order = all_below(&["r"], &["a1", "b1"]);
    order.extend(all_below(&["a1", "b1"], &["a2", "b2"]));
    order.extend(all_below(&["a2", "b2"], &["a3", "b3", "p"]));
    order.extend(all_below(&["a3", "b3"], &["q"]));
    make(&cycle, &edges, &order)
}

/// Two vertices joined by two parallel edges.
pub fn parallel_pair() -> PoGraph {
    make(&["x", "y"], &[("x", "y"), ("x", "y")], &[("x", "y")])
}
