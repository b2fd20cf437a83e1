use fraccolor::graph::{gnp, random_tree, Graph};
use fraccolor::primitives;
use fraccolor::sim::{self, collect_balls, EchoId, FloodMax};
use proptest::prelude::*;

fn with_ids(g: Graph, seed: u64) -> Graph {
    g.with_random_ids(seed, 2).unwrap()
}

/// Graph equal to `g` inside the radius-`keep` ball of `v`, with some edges
/// outside it removed.
fn prune_far(g: &Graph, v: usize, keep: usize, mask: u64) -> Graph {
    let dist = g.bfs_limited(v, keep);
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .enumerate()
        .filter(|&(i, (a, b))| dist[a].is_some() || dist[b].is_some() || mask >> (i % 64) & 1 == 0)
        .map(|(_, e)| e)
        .collect();
    Graph::from_edges(g.n(), &edges).unwrap().with_ids(g.ids().to_vec()).unwrap().with_delta_bound(g.delta())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_deterministic(n in 2usize..60, seed in any::<u64>()) {
        let g = with_ids(gnp(n, 0.1, seed), seed);
        let a = primitives::random_distance_coloring(&g, 2, 30, seed).unwrap();
        let b = primitives::random_distance_coloring(&g, 2, 30, seed).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn flood_max_is_local(n in 5usize..60, seed in any::<u64>(), rounds in 1usize..4, mask in any::<u64>()) {
        let g = with_ids(random_tree(n, seed), seed);
        let v = (seed % n as u64) as usize;
        let prog = FloodMax { rounds };
        let full = sim::run(&g, &prog, &vec![(); n], seed, rounds + 1).unwrap();
        let h = prune_far(&g, v, rounds + 1, mask);
        let cut = sim::run(&h, &prog, &vec![(); n], seed, rounds + 1).unwrap();
        prop_assert_eq!(full.outputs[v], cut.outputs[v]);
    }

    #[test]
    fn sloppy_coloring_is_local(n in 5usize..60, seed in any::<u64>(), trials in 1usize..4, mask in any::<u64>()) {
        let g = with_ids(gnp(n, 0.08, seed), seed);
        let lists: Vec<Vec<u64>> = (0..n).map(|v| (1..=g.degree(v) as u64 + 1).collect()).collect();
        let v = (seed % n as u64) as usize;
        let full = primitives::list_color_sloppy(&g, &lists, trials, seed).unwrap();
        let h = prune_far(&g, v, trials + 1, mask);
        let cut = primitives::list_color_sloppy(&h, &lists, trials, seed).unwrap();
        prop_assert_eq!(full.value.colors[v], cut.value.colors[v]);
    }

    #[test]
    fn echo_takes_no_communication(n in 1usize..50, seed in any::<u64>()) {
        let g = with_ids(gnp(n, 0.2, seed), seed);
        let run = sim::run(&g, &EchoId, &vec![(); n], seed, 5).unwrap();
        prop_assert_eq!(run.complete_outputs().unwrap(), g.ids().to_vec());
        prop_assert!(run.node_rounds.iter().all(|r| *r == Some(0)));
    }

    #[test]
    fn balls_match_bfs(n in 1usize..40, seed in any::<u64>(), radius in 0usize..3) {
        let g = with_ids(gnp(n, 0.1, seed), seed);
        let labels: Vec<u64> = (0..n as u64).collect();
        let balls = collect_balls(&g, &labels, radius).unwrap();
        for v in 0..n {
            let dist = g.bfs_limited(v, radius);
            prop_assert_eq!(balls[v].size(), dist.iter().filter(|d| d.is_some()).count());
        }
    }
}

#[test]
fn round_cap_truncates() {
    let g = random_tree(30, 1).with_random_ids(1, 2).unwrap();
    let run = sim::run(&g, &FloodMax { rounds: 10 }, &vec![(); 30], 0, 3).unwrap();
    assert!(run.outputs.iter().all(Option::is_none));
    assert_eq!(run.rounds, 3);
}
