use ekr_core::bounds::peel;
use ekr_core::families::{independent_rsets, star_size};
use ekr_core::hiprec::Fixed;
use ekr_core::search::{prufer_decode, tree_certificate};
use ekr_core::{binom, Graph, VertexSet};
use num_bigint::BigUint;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

fn tree_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| proptest::collection::vec(0..n, n - 2).prop_map(|seq| prufer_decode(&seq).unwrap()))
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::new(g.n(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

proptest! {
    #[test]
    fn graph6_round_trip(g in graph_strategy(90)) {
        let text = g.to_graph6();
        prop_assert_eq!(Graph::from_graph6(text.as_bytes()).unwrap().edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy(40)) {
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn pascal_rule(a in -5i64..60, b in -5i64..60) {
        // Holds under the zero convention except at a = b = 0.
        prop_assume!(!(a == 0 && b == 0));
        prop_assert_eq!(binom(a, b), binom(a - 1, b) + binom(a - 1, b - 1));
        if a >= 0 && (0..=a).contains(&b) {
            prop_assert_eq!(binom(a, b), binom(a, a - b));
        }
    }

    #[test]
    fn vertex_set_text_round_trip(bits in any::<u128>()) {
        let s = VertexSet::from_bits(bits);
        prop_assert_eq!(s.to_string().parse::<VertexSet>().unwrap(), s);
        prop_assert_eq!(s.len(), bits.count_ones() as usize);
    }

    #[test]
    fn star_sizes_sum_to_r_times_family(g in graph_strategy(11), r in 1usize..5) {
        let total = independent_rsets(&g, r).len();
        let sum: BigUint = (0..g.n()).map(|v| star_size(&g, v, r).unwrap().count).sum();
        prop_assert_eq!(sum, BigUint::from(r * total));
    }

    #[test]
    fn certificate_ignores_labels(t in tree_strategy(14), seed in any::<u64>()) {
        let n = t.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(tree_certificate(&t).unwrap(), tree_certificate(&relabel(&t, &perm)).unwrap());
    }

    #[test]
    fn peel_certificates_replay(g in graph_strategy(30), threshold in 1usize..6) {
        let rep = peel(&g, threshold).unwrap();
        prop_assert!(rep.certificates_valid(&g));
        prop_assert!(rep.residual_max_degree < threshold);
        prop_assert_eq!(rep.t + rep.residual_vertices.len(), g.n());
    }

    #[test]
    fn exp_inverts_ln(num in 1i64..100_000, den in 1i64..1000) {
        let x = Fixed::from_frac(num, den);
        let back = x.ln().exp();
        prop_assert!((&back - &x).abs() < Fixed::from_frac(1, 1_000_000_000_000));
    }
}
