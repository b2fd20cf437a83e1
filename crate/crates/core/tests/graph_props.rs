use fraccolor::graph::{
    complete, cycle, generate_grid, generate_random_regular, gnp, petersen, random_tree, subdivide_edges, Graph,
    GridSpec, Metric, SubdivisionSpec,
};
use proptest::prelude::*;

fn edge_set(g: &Graph) -> std::collections::BTreeSet<(usize, usize)> {
    g.edges().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_composes(n in 4usize..30, p in 0.05f64..0.4, seed in any::<u64>(), a in 1usize..3, b in 1usize..3) {
        let g = gnp(n, p, seed);
        let nested = g.power(a, Metric::Hop).unwrap().power(b, Metric::Hop).unwrap();
        let direct = g.power(a * b, Metric::Hop).unwrap();
        prop_assert_eq!(edge_set(&nested), edge_set(&direct));
    }

    #[test]
    fn power_edges_match_bfs(n in 2usize..25, p in 0.05f64..0.5, seed in any::<u64>(), k in 1usize..4) {
        let g = gnp(n, p, seed);
        let h = g.power(k, Metric::Hop).unwrap();
        for v in 0..n {
            let dist = g.bfs(v);
            for u in 0..n {
                let near = u != v && dist[u].is_some_and(|d| d <= k);
                prop_assert_eq!(h.has_edge(u, v), near);
            }
        }
    }

    #[test]
    fn subdivision_multiplies_girth(k in 1usize..3, which in 0usize..3) {
        let base = match which {
            0 => complete(3),
            1 => cycle(5).unwrap(),
            _ => petersen(),
        };
        let h = subdivide_edges(&SubdivisionSpec { k, base: &base }).unwrap();
        prop_assert_eq!(h.n(), base.n() + 2 * k * base.m());
        prop_assert_eq!(h.girth(), base.girth().map(|g| g * (2 * k + 1)));
        prop_assert!(h.max_degree() <= base.max_degree().max(2));
    }

    #[test]
    fn torus_is_regular(a in 3usize..9, b in 3usize..9) {
        let g = generate_grid(&GridSpec::torus(vec![a, b]).unwrap()).unwrap();
        prop_assert_eq!(g.n(), a * b);
        prop_assert!((0..g.n()).all(|v| g.degree(v) == 4));
        prop_assert_eq!(g.m(), 2 * a * b);
    }

    #[test]
    fn infinity_power_on_torus(a in 5usize..12, k in 1usize..3) {
        let g = generate_grid(&GridSpec::torus(vec![a, a]).unwrap()).unwrap();
        let h = g.power(k, Metric::InfinityNorm).unwrap();
        let side = (2 * k + 1).min(a);
        prop_assert!((0..h.n()).all(|v| h.degree(v) == side * side - 1));
    }

    #[test]
    fn random_regular_degrees(half in 5usize..40, d in 2usize..5, seed in any::<u64>()) {
        let n = 2 * half;
        let g = generate_random_regular(n, d, seed).unwrap();
        prop_assert!((0..n).all(|v| g.degree(v) == d));
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..40, seed in any::<u64>()) {
        let g = random_tree(n, seed);
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(edge_set(&back), edge_set(&g));
    }

    #[test]
    fn random_ids_are_distinct(n in 1usize..200, seed in any::<u64>()) {
        let g = gnp(n, 0.05, seed).with_random_ids(seed, 2).unwrap();
        let mut ids = g.ids().to_vec();
        ids.sort_unstable();
        ids.dedup();
        prop_assert_eq!(ids.len(), n);
        prop_assert!(ids.iter().all(|&i| i >= 1 && i <= g.id_space()));
    }
}

#[test]
fn cycle_rejects_tiny_lengths() {
    assert!(cycle(2).is_err());
    assert_eq!(cycle(3).unwrap().m(), 3);
}
