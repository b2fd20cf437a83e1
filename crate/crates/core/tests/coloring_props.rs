use fraccolor::approx::{self, ApproxParams, Knowledge};
use fraccolor::clustering::{self, Clustering};
use fraccolor::coloring::{MultiColoring, ProperColoring};
use fraccolor::frac::{self, PipelineConfig};
use fraccolor::graph::{cycle, generate_grid, generate_random_regular, gnp, Graph, GridSpec};
use fraccolor::grid::{self, ConstantTimeConfig, Fill};
use fraccolor::oracle::{self, check_multicoloring, DiameterMode};
use fraccolor::primitives;
use proptest::prelude::*;

fn regular(half: usize, d: usize, seed: u64) -> Graph {
    generate_random_regular(2 * half, d, seed).unwrap().with_random_ids(seed, 2).unwrap()
}

fn is_proper(g: &Graph, c: &ProperColoring) -> bool {
    g.edges().into_iter().all(|(u, v)| c.colors[u] != c.colors[v]) && c.colors.iter().all(|&x| x >= 1 && x <= c.palette)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linial_is_proper(n in 2usize..80, p in 0.02f64..0.2, seed in any::<u64>()) {
        let g = gnp(n, p, seed).with_random_ids(seed, 2).unwrap();
        let out = primitives::linial_coloring(&g).unwrap().value;
        prop_assert!(is_proper(&g, &out));
    }

    #[test]
    fn reduction_reaches_delta_plus_one(n in 2usize..60, seed in any::<u64>()) {
        let g = gnp(n, 0.1, seed).with_random_ids(seed, 2).unwrap();
        let lin = primitives::linial_coloring(&g).unwrap().value;
        let target = g.delta() as u64 + 1;
        let out = primitives::color_reduction(&g, &lin, target).unwrap();
        prop_assert!(is_proper(&g, &out.value));
        prop_assert!(out.value.colors.iter().all(|&c| c <= target));
    }

    #[test]
    fn mis_is_maximal_independent(n in 1usize..60, seed in any::<u64>()) {
        let g = gnp(n, 0.1, seed).with_random_ids(seed, 2).unwrap();
        let lin = primitives::linial_coloring(&g).unwrap().value;
        let inside = primitives::mis(&g, &lin).unwrap().value;
        for (u, v) in g.edges() {
            prop_assert!(!(inside[u] && inside[v]));
        }
        for v in 0..n {
            prop_assert!(inside[v] || g.neighbors(v).iter().any(|&w| inside[w]));
        }
    }

    #[test]
    fn ruling_set_properties(half in 5usize..40, seed in any::<u64>(), alpha in 2usize..5, extra in 0usize..6) {
        let g = regular(half, 3, seed);
        let beta = (alpha - 1) * (1 + extra);
        let inside = primitives::ruling_set(&g, alpha, beta, None).unwrap().value;
        for v in 0..g.n() {
            let dist = g.bfs(v);
            if inside[v] {
                prop_assert!((0..g.n()).all(|u| u == v || !inside[u] || dist[u].is_none_or(|d| d >= alpha)));
            }
            prop_assert!((0..g.n()).any(|u| inside[u] && dist[u].is_some_and(|d| d <= beta)));
        }
    }

    #[test]
    fn sloppy_colors_are_proper(n in 2usize..60, seed in any::<u64>(), trials in 1usize..6) {
        let g = gnp(n, 0.1, seed).with_random_ids(seed, 2).unwrap();
        let lists: Vec<Vec<u64>> = (0..n).map(|v| (1..=g.degree(v) as u64 + 1).collect()).collect();
        let out = primitives::list_color_sloppy(&g, &lists, trials, seed).unwrap().value;
        prop_assert!(oracle::check_partial_coloring(&g, &out).is_none());
        for v in 0..n {
            prop_assert!(out.colors[v].is_none_or(|c| lists[v].contains(&c)));
        }
    }

    #[test]
    fn q_delta_coloring_is_valid(half in 15usize..60, q in 1usize..6, seed in any::<u64>()) {
        let g = regular(half, 3, seed);
        let out = frac::q_delta_coloring(&g, q, &PipelineConfig::default()).unwrap().value;
        let rep = check_multicoloring(&g, &out.coloring);
        prop_assert!(rep.valid && rep.complete);
        prop_assert!(out.uncolored_runs().iter().all(|&k| k <= 1));
    }

    #[test]
    fn small_support_is_valid(half in 15usize..60, q in 1usize..4, seed in any::<u64>()) {
        let g = regular(half, 3, seed);
        let out = frac::small_support_coloring(&g, q, &PipelineConfig::default()).unwrap().value;
        let rep = check_multicoloring(&g, &out.coloring);
        prop_assert!(rep.valid && rep.complete);
        prop_assert_eq!(out.coloring.p, 3 * q as u64 + 1);
    }

    #[test]
    fn path_completion_meets_list_bounds(len in 2usize..7, q in 1usize..4, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng, seq::SliceRandom};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<u64> = (1..=(4 * q as u64 + 4)).collect();
        let lists: Vec<Vec<u64>> = (0..len)
            .map(|i| {
                let need = if i == 0 || i + 1 == len { q + 1 } else { 2 * q + 1 };
                let size = need + rng.random_range(0..2);
                let mut p = pool.clone();
                p.shuffle(&mut rng);
                p.truncate(size);
                p
            })
            .collect();
        let sets = frac::path_complete(&lists, q).unwrap();
        for (i, s) in sets.iter().enumerate() {
            prop_assert_eq!(s.len(), q);
            prop_assert!(s.iter().all(|c| lists[i].contains(c)));
        }
        for w in sets.windows(2) {
            prop_assert!(w[0].iter().all(|c| !w[1].contains(c)));
        }
    }

    #[test]
    fn separated_clusters_never_touch(half in 10usize..60, eps in 0.05f64..0.5, seed in any::<u64>()) {
        let g = regular(half, 3, seed);
        let out = clustering::mpx_clustering_separated(&g, eps, seed, None).unwrap().value;
        let rep = oracle::check_clustering(&g, &out.clustering, DiameterMode::Weak, 2);
        prop_assert!(rep.separated && rep.consistent);
    }

    #[test]
    fn union_over_separated_clusters_is_proper(half in 5usize..30, eps in 0.1f64..0.5, seed in any::<u64>()) {
        let g = regular(half, 3, seed);
        let cl = clustering::mpx_clustering_separated(&g, eps, seed, None).unwrap().value;
        let params = ApproxParams::new(eps, Knowledge::Unknown).unwrap();
        if let Ok(mc) = approx::cluster_optimal_coloring(&g, &cl.clustering, &params) {
            prop_assert!(check_multicoloring(&g, &mc).valid);
        }
    }

    #[test]
    fn larger_palette_never_hurts(n in 2usize..9, p in 0.2f64..0.8, seed in any::<u64>(), small in 2usize..8) {
        let g = gnp(n, p, seed);
        let a = approx::best_multicoloring(&g, small, 10).unwrap().0;
        let b = approx::best_multicoloring(&g, small + 1, 10).unwrap().0;
        prop_assert!(a <= b);
    }

    #[test]
    fn chi_f_between_bounds(n in 1usize..14, p in 0.1f64..0.9, seed in any::<u64>()) {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let g = gnp(n, p, seed);
        let chi_f = oracle::chi_f_exact(&g).unwrap().value;
        let alpha = oracle::independence_number(&g).unwrap();
        let chi = oracle::chromatic_number(&g).unwrap();
        prop_assert!(BigRational::new(BigInt::from(n), BigInt::from(alpha)) <= chi_f);
        prop_assert!(chi_f <= BigRational::from_integer(BigInt::from(chi)));
    }

    #[test]
    fn grid_coloring_valid_on_rings(n in 30usize..90, q in 1usize..9) {
        let g = generate_grid(&GridSpec::torus(vec![n]).unwrap()).unwrap();
        match grid::grid_multicolor_logstar(&g, q, None) {
            Ok(out) => {
                let rep = check_multicoloring(&g, &out.value.coloring);
                prop_assert!(rep.valid && rep.complete);
                prop_assert!(rep.ratio.unwrap() <= 2.0 + 3.0 / q as f64 + 1e-9);
            }
            Err(e) => {
                let short = matches!(e, grid::GridError::SegmentTooShort { .. });
                prop_assert!(short, "{}", e);
            }
        }
    }

    #[test]
    fn happy_nodes_ignore_the_fill(n in 40usize..80, seed in any::<u64>()) {
        let g = generate_grid(&GridSpec::torus(vec![n]).unwrap()).unwrap();
        // A small palette forces clashes.
        let small = ConstantTimeConfig { palette: Some(1 << 14), fill: Fill::Smallest };
        let other = ConstantTimeConfig { fill: Fill::Largest, ..small };
        let a = grid::grid_constant_time(&g, 2, 0.2, seed, &small).unwrap().value;
        let b = grid::grid_constant_time(&g, 2, 0.2, seed, &other).unwrap().value;
        for v in 0..n {
            if a.happy[v] {
                prop_assert_eq!(&a.coloring.sets[v], &b.coloring.sets[v]);
            }
        }
        prop_assert!(check_multicoloring(&g, &a.coloring).valid);
    }
}

#[test]
fn multicoloring_json_round_trip() {
    let g = cycle(5).unwrap();
    let mc = MultiColoring { p: 5, q: 2, sets: vec![vec![1, 2], vec![3, 4], vec![1, 5], vec![2, 3], vec![4, 5]] };
    assert!(check_multicoloring(&g, &mc).valid);
    let back = MultiColoring::from_json(&mc.to_json(), 5).unwrap();
    assert_eq!(back, mc);
}

#[test]
fn clustering_json_lists_every_node() {
    let g = cycle(6).unwrap();
    let cl = Clustering::from_centers(&g, &[Some(0), Some(0), None, Some(3), Some(3), None]);
    let json = cl.to_json(&g);
    assert_eq!(json.as_object().map(|o| o.len()), Some(6));
}
