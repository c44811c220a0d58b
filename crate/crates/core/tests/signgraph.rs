use copos_core::signgraph::{extract_sign_graphs, is_threshold, threshold_elimination, Elimination, Graph};
use copos_core::{random, SymMatrix, Tolerances};
use proptest::prelude::*;

fn graph(n: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if bits[u * n + v] {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges)
    })
}

/// Threshold graph grown by adding isolated or dominating vertices.
fn threshold_graph(n: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(any::<bool>(), n).prop_map(move |dom| {
        let mut edges = Vec::new();
        for v in 1..n {
            if dom[v] {
                edges.extend((0..v).map(|u| (u, v)));
            }
        }
        Graph::from_edges(n, &edges)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn complement_preserves_threshold(g in (1usize..=9).prop_flat_map(graph)) {
        prop_assert_eq!(is_threshold(&g), is_threshold(&g.complement()));
    }

    #[test]
    fn dense_matrices_have_dual_sign_graphs(v in (2usize..=8).prop_flat_map(|n| prop::collection::vec(0.1f64..2.0, n * n).prop_map(move |v| (n, v))), signs in prop::collection::vec(any::<bool>(), 64)) {
        let (n, v) = v;
        let a = SymMatrix::from_fn(n, |i, j| {
            let k = i.min(j) * n + i.max(j);
            if signs[k % 64] { v[k] } else { -v[k] }
        });
        let g = extract_sign_graphs(&a, &Tolerances::default());
        prop_assert_eq!(g.positive.complement(), g.negative.clone());
        prop_assert_eq!(g.positive.n, n);
        prop_assert_eq!(g.positive.edge_count() + g.negative.edge_count(), n * (n - 1) / 2);
        prop_assert_eq!(is_threshold(&g.positive), is_threshold(&g.negative));
    }

    #[test]
    fn grown_graphs_are_threshold(g in (1usize..=10).prop_flat_map(threshold_graph)) {
        prop_assert!(is_threshold(&g));
    }

    #[test]
    fn elimination_removes_exactly_the_degree(g in (1usize..=9).prop_flat_map(graph)) {
        if let Some(order) = threshold_elimination(&g) {
            prop_assert_eq!(order.len(), g.n);
            let mut alive = vec![true; g.n];
            let mut edges = g.edge_count();
            for (step, e) in order.iter().enumerate() {
                let v = match *e {
                    Elimination::Isolated(v) | Elimination::Dominating(v) => v,
                };
                let degree = g.adjacency[v].iter().filter(|&&u| alive[u]).count();
                let remaining = g.n - step;
                match e {
                    Elimination::Isolated(_) => prop_assert_eq!(degree, 0),
                    Elimination::Dominating(_) => prop_assert_eq!(degree, remaining - 1),
                }
                alive[v] = false;
                edges -= degree;
            }
            prop_assert_eq!(edges, 0);
        }
    }

    #[test]
    fn ordered_matrices_have_threshold_sign_graphs(seed in any::<u64>(), n in 2usize..=9) {
        let mut rng = random::rng(seed);
        let t = Tolerances::default();
        let a = random::group_element(&mut rng, n).apply(&random::mn_matrix(&mut rng, n));
        let g = extract_sign_graphs(&a, &t);
        prop_assert!(is_threshold(&g.positive) && is_threshold(&g.negative));
    }
}

#[test]
fn graphs_serialize_as_adjacency_lists() {
    let g = Graph::from_edges(3, &[(0, 2)]);
    let v = serde_json::to_value(&g).unwrap();
    assert_eq!(v["adjacency"], serde_json::json!([[2], [], [0]]));
}
