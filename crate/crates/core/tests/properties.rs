use plrg_core::bernoulli::build_bernoulli_graph;
use plrg_core::dist::{sample_iid, scaling_a_n};
use plrg_core::graphex::{interval_intensities, nested_subgraph, sample_graphex};
use plrg_core::hardgraph::{assemble_from_kvector, brute_force_graph, build_hard_graph, edge_count, k_vector};
use plrg_core::height::{decompose, height_series, sample_conditioned, theta_n};
use plrg_core::{KVector, TailModel, WeightedSample};
use proptest::prelude::*;

fn sample_strategy() -> impl Strategy<Value = (f64, usize, f64, u64)> {
    (0.5f64..3.0, 1usize..200, 1.0f64..500.0, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sorted_construction_matches_brute_force((alpha, n, a, seed) in sample_strategy()) {
        let s = sample_iid(&TailModel::pareto(alpha).unwrap(), n, seed).unwrap();
        prop_assert_eq!(build_hard_graph(&s, a).unwrap(), brute_force_graph(&s, a).unwrap());
    }

    #[test]
    fn neighbourhoods_are_nested((alpha, n, a, seed) in sample_strategy()) {
        let s = sample_iid(&TailModel::pareto(alpha).unwrap(), n, seed).unwrap();
        let adj = build_hard_graph(&s, a).unwrap().adjacency();
        let x = s.values();
        for u in 0..n {
            for v in 0..n {
                if u == v || x[u] < x[v] {
                    continue;
                }
                // N(v) \ {u} is contained in N(u) \ {v}
                for &w in &adj[v] {
                    if w != u {
                        prop_assert!(adj[u].binary_search(&w).is_ok() || w == v);
                    }
                }
            }
        }
    }

    #[test]
    fn kvector_counts_match_graph((alpha, n, a, seed) in sample_strategy()) {
        let s = sample_iid(&TailModel::pareto(alpha).unwrap(), n, seed).unwrap();
        let g = build_hard_graph(&s, a).unwrap();
        let kv = k_vector(&s, a).unwrap();
        prop_assert_eq!(edge_count(&kv), g.edge_count() as u64);
        prop_assert_eq!(kv.vertex_count(), g.vertex_count() as u64);
        let assembled = assemble_from_kvector(&kv);
        prop_assert_eq!(assembled.edge_count(), g.edge_count());
        prop_assert_eq!(assembled.degrees().iter().filter(|&&d| d > 0).count(), g.vertex_count());
    }

    #[test]
    fn assembled_graph_has_the_kvector_edge_count(k0 in 0u64..12, raw in proptest::collection::vec(0u64..6, 0..12)) {
        let mut followers = raw;
        followers.truncate(k0 as usize);
        followers.resize(k0 as usize, 0);
        let kv = KVector::new(k0, followers).unwrap();
        prop_assert_eq!(assemble_from_kvector(&kv).edge_count() as u64, edge_count(&kv));
    }

    #[test]
    fn product_tail_is_bounded_and_monotone(alpha in 0.3f64..4.0, a in 1.0f64..1e6, step in 1.0f64..10.0) {
        let m = TailModel::pareto(alpha).unwrap();
        let p = m.product_tail(a);
        prop_assert!(p >= m.tail(a) && p <= 1.0);
        prop_assert!(m.product_tail(a * step) <= p);
    }

    #[test]
    fn hard_edges_survive_in_the_bernoulli_graph(alpha in 0.8f64..2.5, n in 2usize..120, a in 1.0f64..200.0, seed: u64) {
        let s = sample_iid(&TailModel::pareto(alpha).unwrap(), n, seed).unwrap();
        let hard = build_hard_graph(&s, a).unwrap();
        let b = build_bernoulli_graph(&s, a, seed ^ 1).unwrap();
        prop_assert_eq!(b.hard_edges(), hard.edges);
    }

    #[test]
    fn graphex_intensities_telescope(t in 0.1f64..50.0, x0 in 1.5f64..20.0, alpha in 0.5f64..3.0, seed: u64) {
        let g = sample_graphex(t, x0, alpha, seed).unwrap();
        prop_assume!(g.k0() > 0);
        let total: f64 = interval_intensities(&g.clique_values, t, x0, alpha).unwrap().iter().sum();
        let largest = g.clique_values[0];
        let want = t * ((x0 / largest).max(1.0).powf(-alpha) - x0.powf(-alpha / 2.0));
        prop_assert!((total - want).abs() <= 1e-9 * want.abs().max(1e-12));
    }

    #[test]
    fn graphex_nesting_only_removes(t in 0.5f64..20.0, frac in 0.0f64..1.0, seed: u64) {
        let g = sample_graphex(t, 2.0, 1.5, seed).unwrap();
        let h = nested_subgraph(&g, frac * t).unwrap();
        prop_assert!(h.k0() <= g.k0());
        prop_assert!(h.edge_count() <= g.edge_count());
        prop_assert!(h.clique_times.iter().all(|&s| s <= frac * t));
    }

    #[test]
    fn height_function_properties(seed: u64, gamma in 0.6f64..1.4) {
        let m = TailModel::pareto(2.0).unwrap();
        let n = 2000;
        let a = scaling_a_n(2.0, gamma, n).unwrap();
        let cs = sample_conditioned(&m, n, a, seed).unwrap();
        let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
        let series = height_series(&cs, &m, &grid).unwrap();
        prop_assert!(series.h.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(series.h.iter().all(|&h| h <= n - cs.k_n));
        let d = decompose(&cs, &m, &series);
        prop_assert!(d.identity_error() <= 1e-9);
    }

    #[test]
    fn theta_is_non_increasing(x in 0.01f64..1.0, dx in 0.0f64..0.5) {
        let m = TailModel::pareto(2.0).unwrap();
        let a = scaling_a_n(2.0, 1.0, 10_000).unwrap();
        let y = (x + dx).min(1.0);
        prop_assert!(theta_n(y, &m, a).unwrap() <= theta_n(x, &m, a).unwrap());
    }
}

#[test]
fn kvector_of_a_single_clique_vertex_is_isolated() {
    let s = WeightedSample::new(vec![10.0, 1.0]).unwrap();
    let kv = k_vector(&s, 50.0).unwrap();
    assert_eq!(kv, KVector::new(1, vec![0]).unwrap());
    assert_eq!(kv.vertex_count(), 0);
    assert_eq!(build_hard_graph(&s, 50.0).unwrap().vertex_count(), 0);
}
