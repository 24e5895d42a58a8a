//! Property tests for the invariants of each module.

use graphstats::embed::{ase, select_dimension};
use graphstats::graph::{
    export_edge_list_with_nodes, graph_from_json, graph_to_json, import_edge_list,
    largest_connected_component, symmetrize, SymmetrizeMethod,
};
use graphstats::inference::{latent_position_test, mmd_ustat};
use graphstats::models::{fit_dcsbm, fit_er, fit_ier, fit_sbm, goodness_of_fit, BlockFitOptions};
use graphstats::sims::{sample_er_nm, sample_er_np, sample_sbm, SbmParams, WeightDistribution};
use graphstats::viz::{heatmap_svg, sort_indices, HeatmapOptions, SortMode, SortSpec};
use graphstats::Graph;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn undirected(n: usize, bits: &[bool]) -> Graph {
    let mut a = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if bits[k] {
                a[(i, j)] = 1.0;
                a[(j, i)] = 1.0;
            }
            k += 1;
        }
    }
    Graph::new(a, false).unwrap()
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..14).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * (n - 1) / 2)
            .prop_map(move |bits| undirected(n, &bits))
    })
}

fn arb_directed() -> impl Strategy<Value = Graph> {
    (2usize..10).prop_flat_map(|n| {
        proptest::collection::vec(0.0f64..3.0, n * n).prop_map(move |v| {
            let a = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { v[i * n + j].floor() });
            Graph::new(a, true).unwrap()
        })
    })
}

fn arb_points(max_rows: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (2usize..max_rows, 1usize..4).prop_flat_map(|(m, d)| {
        proptest::collection::vec(-3.0f64..3.0, m * d).prop_map(move |v| DMatrix::from_vec(m, d, v))
    })
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n
        && order
            .iter()
            .all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lcc_is_idempotent(g in arb_graph()) {
        prop_assume!(g.edge_count() > 0);
        let (once, _) = largest_connected_component(&g).unwrap();
        let (twice, kept) = largest_connected_component(&once).unwrap();
        prop_assert_eq!(kept, (0..once.n()).collect::<Vec<_>>());
        prop_assert_eq!(once.adjacency(), twice.adjacency());
    }

    #[test]
    fn average_symmetrization_is_exactly_symmetric(g in arb_directed()) {
        let s = symmetrize(&g, SymmetrizeMethod::Average);
        let a = s.adjacency();
        prop_assert!(!s.is_directed());
        prop_assert_eq!(a, &a.transpose());
    }

    #[test]
    fn graph_json_round_trip(g in arb_directed()) {
        let back = graph_from_json(&graph_to_json(&g).unwrap()).unwrap();
        prop_assert_eq!(back.adjacency(), g.adjacency());
        prop_assert_eq!(back.is_directed(), g.is_directed());
    }

    #[test]
    fn edge_list_with_nodes_round_trip(g in arb_graph()) {
        let back = import_edge_list(&export_edge_list_with_nodes(&g).unwrap(), false).unwrap();
        prop_assert_eq!(back.adjacency(), g.adjacency());
    }

    #[test]
    fn sort_indices_is_a_permutation(g in arb_graph(), by_block in any::<bool>()) {
        let n = g.n();
        let spec = if by_block {
            let labels = (0..n).map(|i| format!("b{}", i % 3)).collect();
            SortSpec::new(SortMode::BlockThenDegree, Some(labels))
        } else {
            SortSpec::new(SortMode::Degree, None)
        };
        prop_assert!(is_permutation(&sort_indices(&g, &spec).unwrap(), n));
    }

    #[test]
    fn heatmap_is_well_formed_xml(g in arb_graph()) {
        let svg = heatmap_svg(g.adjacency(), &SortSpec::new(SortMode::Degree, None), &HeatmapOptions::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let cells = doc.descendants().filter(|n| n.has_tag_name("rect")).count();
        prop_assert!(cells >= g.n() * g.n());
    }

    #[test]
    fn mmd_is_invariant_to_row_order(z1 in arb_points(12), z2 in arb_points(12), rot in 0usize..12) {
        prop_assume!(z1.ncols() == z2.ncols());
        let m = z1.nrows();
        let perm: Vec<usize> = (0..m).map(|i| (i + rot) % m).collect();
        let shuffled = z1.select_rows(&perm);
        let a = mmd_ustat(&z1, &z2, None).unwrap();
        let b = mmd_ustat(&shuffled, &z2, None).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn samplers_are_deterministic(n in 2usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
        let a = sample_er_np(n, p, false, false, None, seed).unwrap();
        let b = sample_er_np(n, p, false, false, None, seed).unwrap();
        prop_assert_eq!(a.adjacency(), b.adjacency());
    }

    #[test]
    fn er_nm_has_exactly_m_edges(n in 2usize..30, frac in 0.0f64..1.0, seed in any::<u64>()) {
        let m = ((n * (n - 1) / 2) as f64 * frac) as usize;
        prop_assert_eq!(sample_er_nm(n, m, false, false, seed).unwrap().edge_count(), m);
    }

    #[test]
    fn weights_keep_the_edge_support(seed in any::<u64>(), rate in 0.1f64..5.0) {
        let params = SbmParams::new(vec![8, 8], vec![vec![0.6, 0.1], vec![0.1, 0.4]]);
        let plain = sample_sbm(&params, None, seed).unwrap();
        let weighted = sample_sbm(&params, Some(&WeightDistribution::Poisson { rate }), seed).unwrap();
        for (a, w) in plain.adjacency().iter().zip(weighted.adjacency().iter()) {
            prop_assert_eq!(*a != 0.0, *w != 0.0);
        }
    }

    #[test]
    fn separated_scree_returns_block_count(k in 1usize..6, j in 1usize..20, c in 5.0f64..100.0) {
        let mut values = vec![c; k];
        values.extend(std::iter::repeat_n(1e-3, j));
        prop_assert_eq!(select_dimension(&values, 1).unwrap().elbows[0], k);
    }

    #[test]
    fn ase_sign_convention(seed in any::<u64>()) {
        let params = SbmParams::new(vec![10, 10], vec![vec![0.7, 0.2], vec![0.2, 0.6]]);
        let g = sample_sbm(&params, None, seed).unwrap();
        let x = ase(&g, Some(2), 2).unwrap().x;
        for col in x.column_iter() {
            let top = col.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
            prop_assert!(top >= 0.0);
        }
    }

    #[test]
    fn block_models_nest(seed in any::<u64>()) {
        let params = SbmParams::new(vec![12, 12, 12], vec![vec![0.6, 0.2, 0.1], vec![0.2, 0.5, 0.1], vec![0.1, 0.1, 0.4]]);
        let g = sample_sbm(&params, None, seed).unwrap();
        let opts = BlockFitOptions { labels: g.labels().map(<[String]>::to_vec), ..Default::default() };
        let mse = |f| goodness_of_fit(&f, &g).unwrap().mse;
        let ier = mse(fit_ier(&g).unwrap());
        let dcsbm = mse(fit_dcsbm(&g, &opts).unwrap());
        let sbm = mse(fit_sbm(&g, &opts).unwrap());
        let er = mse(fit_er(&g).unwrap());
        prop_assert_eq!(ier, 0.0);
        prop_assert!(sbm <= er + 1e-9, "sbm {} er {}", sbm, er);
        prop_assert!(dcsbm <= sbm + 1e-9, "dcsbm {} sbm {}", dcsbm, sbm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn latent_position_statistic_ignores_relabeling(seed in any::<u64>(), shift in 1usize..30) {
        let params = SbmParams::new(vec![15, 15], vec![vec![0.7, 0.2], vec![0.2, 0.6]]);
        let strip = |g: Graph| Graph::new(g.into_adjacency(), false).unwrap();
        let g1 = strip(sample_sbm(&params, None, seed).unwrap());
        let g2 = strip(sample_sbm(&params, None, seed.wrapping_add(1)).unwrap());
        let perm: Vec<usize> = (0..30).map(|i| (i * 7 + shift) % 30).collect();
        let relabel = |g: &Graph| g.induced_subgraph(&perm);
        let t = latent_position_test(&g1, &g2, Some(2), 1, 0).unwrap();
        let u = latent_position_test(&relabel(&g1), &relabel(&g2), Some(2), 1, 0).unwrap();
        prop_assert!((t.statistic - u.statistic).abs() <= 1e-8, "{} vs {}", t.statistic, u.statistic);
        prop_assert!(t.p_value >= 0.5 && t.p_value <= 1.0);
    }
}
