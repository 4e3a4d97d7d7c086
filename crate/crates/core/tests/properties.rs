use diskdiag::corpus::{generate, CorpusOptions, ORDER_KINDS};
use diskdiag::realization::validate::continuity_defect;
use diskdiag::{induced_order, is_delta_graph, realize, Budget, GraphFile, HeightOptions, PoGraph, RealizeOptions};
use proptest::prelude::*;

fn relabelled(g: &PoGraph, perm: &[usize]) -> PoGraph {
    let n = g.vertex_count();
    let mut names = vec![String::new(); n];
    for v in 0..n {
        names[perm[v]] = format!("x{}", perm[v]);
    }
    let edges = g.graph().edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    let pairs: Vec<_> = g.order().pairs().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    PoGraph::from_indices(names, edges, &pairs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdict_is_label_invariant(seed in 0u64..10_000, kind in 0usize..3, shuffle in any::<u64>()) {
        let g = generate(seed, ORDER_KINDS[kind], CorpusOptions::default()).graph;
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = shuffle;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = relabelled(&g, &perm);
        prop_assert!(is_delta_graph(&h, Budget::default()).unwrap().delta);
        prop_assert_eq!(realize(&g, RealizeOptions::default()).unwrap().function.face_maps.len(),
                        realize(&h, RealizeOptions::default()).unwrap().function.face_maps.len());
    }

    #[test]
    fn seeded_heights_extend_the_order(seed in 0u64..10_000, hseed in any::<u64>(), strict in any::<bool>()) {
        let g = generate(seed, ORDER_KINDS[(seed % 3) as usize], CorpusOptions::default()).graph;
        let opts = RealizeOptions { heights: HeightOptions { strict, seed: Some(hseed) }, ..Default::default() };
        let r = realize(&g, opts).unwrap();
        prop_assert!(g.order().is_subset_of(&induced_order(&r.function.heights)));
        prop_assert!(continuity_defect(&r.function, 50, hseed) <= 1e-9);
    }

    #[test]
    fn real_valued_levels_realize(seed in 0u64..10_000) {
        let opts = CorpusOptions { integer_levels: false, ..CorpusOptions::default() };
        let g = generate(seed, ORDER_KINDS[0], opts).graph;
        prop_assert!(realize(&g, RealizeOptions::default()).is_ok());
    }

    #[test]
    fn graph_file_round_trip(seed in 0u64..10_000) {
        let g = generate(seed, ORDER_KINDS[2], CorpusOptions::default()).graph;
        let file = GraphFile::from_graph(&g);
        let parsed = GraphFile::parse(&file.to_json()).unwrap();
        prop_assert_eq!(&parsed, &file);
        let back = parsed.to_graph().unwrap();
        prop_assert_eq!(back.order(), g.order());
    }
}
