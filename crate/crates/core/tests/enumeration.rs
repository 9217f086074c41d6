mod common;

use std::collections::HashSet;

use quartets::enumerate::{binary_tree_count, count_trees_capped, partition_count};
use quartets::{count_trees, enumerate_trees, Error, TreeMode};

use common::leaves;

/// Counts all phylogenetic trees by interior-edge count. A tree on `n`
/// leaves with `m` interior edges has `n + m` edges and `m + 1` interior
/// vertices; the next leaf goes on an edge (one more interior edge) or on
/// an interior vertex (same count). Deleting the newest leaf undoes either
/// move uniquely, so nothing is counted twice.
fn all_tree_counts(max_n: usize) -> Vec<u64> {
    let mut by_edges = vec![1u64];
    let mut totals = vec![0, 0, 0, 1];
    for n in 3..max_n {
        let mut next = vec![0u64; by_edges.len() + 1];
        for (m, &count) in by_edges.iter().enumerate() {
            next[m + 1] += (n + m) as u64 * count;
            next[m] += (m + 1) as u64 * count;
        }
        totals.push(next.iter().sum());
        by_edges = next;
    }
    totals
}

fn double_factorial(mut k: u64) -> u64 {
    let mut p = 1;
    while k > 1 {
        p *= k;
        k -= 2;
    }
    p
}

#[test]
fn recurrence_matches_known_values() {
    let counts = all_tree_counts(8);
    assert_eq!(&counts[4..=8], [4, 26, 236, 2752, 39208]);
}

#[test]
fn all_mode_counts_match_recurrence() {
    for (n, &want) in all_tree_counts(8).iter().enumerate().skip(4) {
        assert_eq!(count_trees(n, TreeMode::All).unwrap(), want, "n={n}");
    }
}

#[test]
fn binary_counts_are_double_factorials() {
    let pinned = [3, 15, 105, 945, 10395, 135135, 2027025];
    for (n, want) in (4..=10).zip(pinned) {
        assert_eq!(double_factorial(2 * n as u64 - 5), want);
        assert_eq!(binary_tree_count(n), want);
        assert_eq!(count_trees(n, TreeMode::Binary).unwrap(), want, "n={n}");
    }
}

#[test]
fn streams_are_duplicate_free_and_well_formed() {
    for n in 3..=7 {
        for mode in [TreeMode::Binary, TreeMode::All] {
            let mut seen = HashSet::new();
            for t in enumerate_trees(leaves(n), mode).unwrap() {
                assert_eq!(t.n(), n);
                if mode == TreeMode::Binary {
                    assert!(t.is_binary());
                }
                for (i, a) in t.splits().iter().enumerate() {
                    assert!(a.is_nontrivial(n));
                    assert!(t.splits()[i + 1..].iter().all(|b| a.compatible(*b)));
                }
                assert!(seen.insert(t), "duplicate at n={n} {mode:?}");
            }
            assert_eq!(seen.len() as u64, count_trees(n, mode).unwrap());
        }
    }
}

#[test]
fn binary_stream_is_the_binary_part_of_the_full_stream() {
    for n in 4..=7 {
        let binary: HashSet<_> = enumerate_trees(leaves(n), TreeMode::Binary)
            .unwrap()
            .collect();
        let from_all: HashSet<_> = enumerate_trees(leaves(n), TreeMode::All)
            .unwrap()
            .filter(|t| t.is_binary())
            .collect();
        assert_eq!(binary, from_all, "n={n}");
    }
}

#[test]
fn partitions_split_the_stream() {
    for mode in [TreeMode::Binary, TreeMode::All] {
        let stream = enumerate_trees(leaves(6), mode).unwrap();
        let parts = stream.partitions();
        assert_eq!(parts.len(), partition_count(6, mode));
        let mut joined: Vec<_> = parts.into_iter().flatten().collect();
        let mut whole: Vec<_> = stream.collect();
        joined.sort();
        whole.sort();
        assert!(joined == whole, "partitions differ from the stream");
    }
}

#[test]
fn caps_are_enforced_and_overridable() {
    assert!(matches!(
        enumerate_trees(leaves(10), TreeMode::All),
        Err(Error::TooManyLeaves { n: 10, cap: 9 })
    ));
    assert!(matches!(
        count_trees(13, TreeMode::Binary),
        Err(Error::TooManyLeaves { n: 13, cap: 12 })
    ));
    assert!(count_trees_capped(6, TreeMode::All, 5).is_err());
    assert_eq!(count_trees_capped(6, TreeMode::All, 6).unwrap(), 236);
}

#[test]
fn restart_replays_the_stream() {
    let mut s = enumerate_trees(leaves(5), TreeMode::All).unwrap();
    let first: Vec<_> = s.by_ref().take(10).collect();
    s.restart();
    assert_eq!(s.take(10).collect::<Vec<_>>(), first);
}
