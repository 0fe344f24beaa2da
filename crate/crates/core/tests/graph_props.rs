mod common;

use fraccol::graph::families;
use fraccol::{Graph, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (1usize..40, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, seed)| common::er(n, p, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_sets_are_maximal(g in graph_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in g.sample_uniform_mis(8, &mut rng) {
            prop_assert!(g.is_maximal_independent(&s));
        }
    }

    #[test]
    fn extension_keeps_seed_and_is_maximal(g in graph_strategy(), seed in any::<u64>(), first in any::<usize>()) {
        let v = first % g.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = g.extend_to_maximal(&VertexSet::new(vec![v]), &mut rng).unwrap();
        prop_assert!(s.contains(v));
        prop_assert!(g.is_maximal_independent(&s));
    }

    #[test]
    fn dimacs_round_trip(g in graph_strategy()) {
        let text = g.to_dimacs();
        let back = Graph::parse_dimacs(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_dimacs(), text);
    }

    #[test]
    fn sampling_is_deterministic(g in graph_strategy(), seed in any::<u64>()) {
        let a = g.sample_uniform_mis(5, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = g.sample_uniform_mis(5, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn enumeration_matches_subset_scan(n in 1usize..12, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = common::er(n, p, seed);
        let mut fast = g.maximal_independent_sets(usize::MAX).unwrap();
        fast.sort();
        let mut slow = common::all_maximal_sets(&g);
        slow.sort();
        prop_assert_eq!(fast, slow);
    }
}

#[test]
fn duplicate_edges_and_loops_are_dropped() {
    let text = "c test\np edge 3 4\ne 1 2\ne 2 1\ne 3 3\ne 2 3\n";
    let (g, report) = Graph::parse_dimacs_report(text).unwrap();
    assert_eq!(g.edge_count(), 2);
    assert!(report.duplicate_edges >= 1);
    assert!(report.self_loops >= 1);
}

#[test]
fn benchmark_sizes() {
    for (name, n, m) in [("myciel4", 23, 71), ("myciel5", 47, 236), ("queen8_8", 64, 728), ("2-Insertions_3", 37, 72), ("1-FullIns_4", 93, 593)] {
        let g = families::by_name(name).unwrap();
        assert_eq!((g.n(), g.edge_count()), (n, m), "{name}");
    }
}
