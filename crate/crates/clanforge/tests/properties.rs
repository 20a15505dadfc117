//! Property-based invariants over randomly generated inputs.

use std::collections::BTreeSet;

use clanforge::cohorts::{classify_groups, LoopRule};
use clanforge::community::nmi;
use clanforge::metrics::connected_components;
use clanforge::{build_graph, CharId, Partition};

use proptest::prelude::*;

fn edge_lists() -> impl Strategy<Value = Vec<(CharId, CharId)>> {
    prop::collection::vec((0u64..40, 0u64..40), 0..120)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_graphs_are_simple_and_symmetric(edges in edge_lists()) {
        let g = build_graph(&edges);
        for v in 0..g.node_count() {
            let nbrs = g.neighbors(v);
            // sorted, no duplicates, no self loops
            prop_assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nbrs.contains(&(v as u32)));
            for &w in nbrs {
                prop_assert!(g.neighbors(w as usize).contains(&(v as u32)));
            }
        }
        let degree_sum: usize = g.degrees().iter().sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn graph_build_ignores_edge_order_and_duplication(edges in edge_lists()) {
        let g = build_graph(&edges);
        let mut shuffled: Vec<_> = edges.iter().rev().copied().collect();
        shuffled.extend_from_slice(&edges); // duplicate everything
        let h = build_graph(&shuffled);
        prop_assert_eq!(g, h);
    }

    #[test]
    fn components_partition_the_node_set(edges in edge_lists()) {
        let g = build_graph(&edges);
        let report = connected_components(&g);
        prop_assert!(report.partition.covers_contiguous(g.node_count()));
        prop_assert_eq!(report.partition.block_count(), report.component_count);
        let sizes = report.partition.block_sizes();
        prop_assert_eq!(sizes.iter().max().copied().unwrap_or(0), report.largest_size);
    }

    #[test]
    fn cohorts_are_a_three_way_cover(edges in edge_lists()) {
        let g = build_graph(&edges);
        let r = classify_groups(&g, LoopRule::NonStrict);
        let mut all: BTreeSet<usize> = BTreeSet::new();
        all.extend(&r.hardcore);
        all.extend(&r.casual);
        all.extend(&r.peripheral);
        prop_assert_eq!(all.len(), r.hardcore.len() + r.casual.len() + r.peripheral.len());
        prop_assert_eq!(all.len(), g.node_count());
    }

    #[test]
    fn nmi_is_symmetric_and_bounded(
        labels_a in prop::collection::vec(0u64..6, 1..40),
        labels_b in prop::collection::vec(0u64..6, 1..40),
    ) {
        let n = labels_a.len().min(labels_b.len());
        let a = Partition::from_dense(&labels_a[..n]);
        let b = Partition::from_dense(&labels_b[..n]);
        let ab = nmi(&a, &b).unwrap();
        let ba = nmi(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((nmi(&a, &a).unwrap() - 1.0).abs() <= 1e-12);
    }
}
