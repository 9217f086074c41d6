#![allow(dead_code)]

use std::sync::Arc;

use quartets::enumerate::random_binary_tree;
use quartets::{LeafSet, PhyloTree, Quartet, QuartetSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn leaves(n: usize) -> Arc<LeafSet> {
    Arc::new(LeafSet::numbered(n).unwrap())
}

/// A quartet drawn uniformly from the `3 * C(n, 4)` normalized quartets:
/// a uniform 4-subset, then one of its three pairings.
pub fn random_quartet<R: Rng>(n: usize, rng: &mut R) -> Quartet {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let [a, b, c, d] = [idx[0], idx[1], idx[2], idx[3]];
    match rng.gen_range(0..3) {
        0 => Quartet::new(a, b, c, d),
        1 => Quartet::new(a, c, b, d),
        _ => Quartet::new(a, d, b, c),
    }
    .unwrap()
}

/// `size` distinct uniform quartets over leaves `1..n`.
pub fn random_set<R: Rng>(n: usize, size: usize, rng: &mut R) -> QuartetSet {
    let mut q = QuartetSet::new(leaves(n));
    while q.len() < size {
        q.insert(random_quartet(n, rng)).unwrap();
    }
    q
}

/// Every quartet a tree displays.
pub fn displayed(t: &PhyloTree) -> Vec<Quartet> {
    let n = t.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for q in [(a, b, c, d), (a, c, b, d), (a, d, b, c)] {
                        let q = Quartet::new(q.0, q.1, q.2, q.3).unwrap();
                        if t.displays(&q) {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Up to `size` quartets displayed by a random binary tree on `1..n`.
pub fn sampled_from_tree<R: Rng>(n: usize, size: usize, rng: &mut R) -> (PhyloTree, QuartetSet) {
    let t = random_binary_tree(leaves(n), rng).unwrap();
    let mut pool = displayed(&t);
    pool.shuffle(rng);
    pool.truncate(size);
    let q = QuartetSet::from_quartets(leaves(n), pool).unwrap();
    (t, q)
}

pub fn set(n: usize, quartets: &[&str]) -> QuartetSet {
    QuartetSet::parse_all(leaves(n), quartets.iter().copied()).unwrap()
}
