use proptest::prelude::*;
use sclub_core::engine::merge_records;
use sclub_core::graph::{crossing_edges, is_s_club, Graph};
use sclub_core::oracle::{cluster_ground_truth, min_deletions_bruteforce};
use sclub_core::records::Dist;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_witness_verifies(g in arb_graph(7), s in 1usize..5) {
        let res = min_deletions_bruteforce(&g, s).unwrap();
        for block in res.witness.blocks() {
            prop_assert!(is_s_club(&g, block, s).unwrap());
        }
        prop_assert_eq!(crossing_edges(&g, &res.witness).unwrap().len(), res.min_deletions);
    }

    #[test]
    fn oracle_is_monotone_in_s(g in arb_graph(7)) {
        let values: Vec<usize> = (1..=g.n().max(2)).map(|s| min_deletions_bruteforce(&g, s).unwrap().min_deletions).collect();
        prop_assert!(values.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*values.last().unwrap(), 0);
    }

    #[test]
    fn oracle_adds_over_disjoint_unions(a in arb_graph(5), b in arb_graph(5), s in 2usize..4) {
        let sum = min_deletions_bruteforce(&a, s).unwrap().min_deletions
            + min_deletions_bruteforce(&b, s).unwrap().min_deletions;
        prop_assert_eq!(min_deletions_bruteforce(&a.disjoint_union(&b), s).unwrap().min_deletions, sum);
    }

    /// Splits a vertex set into two sides sharing a boundary and merges the
    /// sides' ground-truth records in both orders.
    #[test]
    fn join_merge_is_symmetric(g in arb_graph(8), sides in proptest::collection::vec(0u8..3, 8), s in 2u8..5) {
        let n = g.n();
        let boundary: Vec<usize> = (0..n).filter(|&v| sides[v] == 0).collect();
        prop_assume!(!boundary.is_empty());
        let left: Vec<usize> = (0..n).filter(|&v| sides[v] != 2).collect();
        let right: Vec<usize> = (0..n).filter(|&v| sides[v] != 1).collect();
        let l = cluster_ground_truth(&g, &left, &boundary, s as usize).unwrap();
        let r = cluster_ground_truth(&g, &right, &boundary, s as usize).unwrap();
        prop_assume!(l.unresolved.is_empty() && r.unresolved.is_empty());
        let lr = merge_records(&l.record, &r.record, s as Dist);
        let rl = merge_records(&r.record, &l.record, s as Dist);
        prop_assert_eq!(lr, rl);
    }
}
