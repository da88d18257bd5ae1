//! Property tests for the structural invariants.

use proptest::prelude::*;

use epcomm::graph::{load_edge_list, Graph};
use epcomm::label::LabelVector;
use epcomm::metrics::{misclustered_fraction, nmi};
use epcomm::objectives::{block_counts, flip_update};
use epcomm::zonotope::sweep_generators;

fn arb_labels(n: usize) -> impl Strategy<Value = LabelVector> {
    proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n)
        .prop_map(|v| LabelVector::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The boundary walk closes, flips every swept node exactly twice, and
    /// never exceeds 2n steps, including degenerate and coincident columns.
    #[test]
    fn sweep_walk_invariants(
        cols in proptest::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y)| [x, y]),
            1..24,
        ),
        dup in 0usize..4,
    ) {
        // Duplicate a few columns to exercise the grouped-flip path.
        let mut cols = cols;
        for k in 0..dup.min(cols.len()) {
            let c = cols[k];
            cols.push(c);
        }
        let n = cols.len();
        let sweep = sweep_generators(&cols);
        prop_assert!(sweep.num_steps() <= 2 * n);
        let mut flips = vec![0usize; n];
        let mut cur = sweep.start_labels.clone();
        for step in sweep.steps() {
            for &i in step {
                cur.flip(i);
                flips[i] += 1;
            }
        }
        prop_assert_eq!(&cur, &sweep.start_labels);
        for (i, &count) in flips.iter().enumerate() {
            let expected = if sweep.degenerate_nodes.contains(&i) { 0 } else { 2 };
            prop_assert_eq!(count, expected);
        }
    }

    /// Any flip sequence keeps the counts equal to a fresh recomputation and
    /// conserves the total degree.
    #[test]
    fn flip_sequences_stay_exact(
        edges in proptest::collection::vec((0usize..12, 0usize..12), 0..40),
        flips in proptest::collection::vec(0usize..12, 0..30),
        labels in arb_labels(12),
    ) {
        let (g, _, _) = Graph::from_edges(12, &edges).unwrap();
        let mut labels = labels;
        let mut counts = block_counts(&g, &labels).unwrap();
        let m = counts.total_degree();
        for &i in &flips {
            flip_update(&mut counts, &g, &mut labels, i);
            prop_assert_eq!(counts, block_counts(&g, &labels).unwrap());
            prop_assert_eq!(counts.total_degree(), m);
            prop_assert!(counts.o11 >= 0 && counts.o22 >= 0 && counts.o12 >= 0);
            prop_assert_eq!(counts.n1 + counts.n2, 12);
        }
    }

    /// NMI stays in [0, 1], is symmetric, and agrees with the misclustered
    /// fraction about perfect recovery (on non-degenerate labelings).
    #[test]
    fn agreement_measures_are_consistent(
        a in arb_labels(16),
        b in arb_labels(16),
    ) {
        let v = nmi(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!((v - nmi(&b, &a).unwrap()).abs() < 1e-12);
        let nondegenerate = |l: &LabelVector| {
            let p = l.count_plus();
            p != 0 && p != l.len()
        };
        if nondegenerate(&a) && nondegenerate(&b) {
            let mis = misclustered_fraction(&a, &b).unwrap();
            prop_assert_eq!(v == 1.0, mis == 0.0);
        }
    }

    /// Edge lists round-trip through the text format.
    #[test]
    fn edge_list_round_trip(
        edges in proptest::collection::vec((0usize..20, 0usize..20), 1..60),
    ) {
        let (g, _, _) = Graph::from_edges(20, &edges).unwrap();
        if g.total_degree() == 0 {
            // The format has no way to express edgeless graphs.
            return Ok(());
        }
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = load_edge_list(buf.as_slice()).unwrap().graph;
        // Node count can shrink when trailing nodes are isolated; compare
        // adjacency over the loaded prefix.
        prop_assert!(back.n() <= g.n());
        for i in 0..back.n() {
            prop_assert_eq!(back.neighbors(i), g.neighbors(i));
        }
        for i in back.n()..g.n() {
            prop_assert!(g.neighbors(i).is_empty());
        }
    }
}
