use std::path::PathBuf;

use diskdiag::{fixtures, is_delta_graph, read_graph, realize, Budget, Condition, PoGraph, RealizeOptions};

fn data(name: &str) -> PoGraph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    read_graph(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn data_files_match_fixtures() {
    for (file, g) in [
        ("g1.json", fixtures::g1()),
        ("g1_missing_pair.json", fixtures::g1_missing_pair()),
        ("g3.json", fixtures::g3()),
        ("g4.json", fixtures::g4()),
        ("interleaved_chords.json", fixtures::interleaved_chords()),
        ("three_chords.json", fixtures::three_chords()),
    ] {
        let d = data(file);
        assert_eq!(d.names(), g.names(), "{file}");
        assert_eq!(d.graph().edges(), g.graph().edges(), "{file}");
        assert_eq!(d.order(), g.order(), "{file}");
    }
}

#[test]
fn first_failures() {
    let expect = [
        ("g1.json", None),
        ("g3.json", None),
        ("g4.json", None),
        ("g1_missing_pair.json", Some(Condition::A1)),
        ("interleaved_chords.json", Some(Condition::S2)),
        ("three_chords.json", Some(Condition::S3)),
    ];
    for (file, fail) in expect {
        let v = is_delta_graph(&data(file), Budget::default()).unwrap();
        assert_eq!(v.first_failure().map(|r| r.condition), fail, "{file}");
        assert_eq!(v.delta, fail.is_none());
    }
}

#[test]
fn fixture_values() {
    let g = fixtures::g1();
    let f = realize(&g, RealizeOptions::default()).unwrap().function;
    for (name, value) in [("m", 0.0), ("a", 1.0), ("b", 1.0), ("M", 2.0)] {
        let (x, y) = f.embedding.coords[g.id(name).unwrap()];
        assert_eq!(f.evaluate([x, y]).unwrap(), value, "{name}");
    }
    let g = fixtures::g3();
    let f = realize(&g, RealizeOptions::default()).unwrap().function;
    let c = g.id("c").unwrap();
    assert_eq!(f.evaluate([0.0, 0.0]).unwrap(), f.heights.value(c));
}
