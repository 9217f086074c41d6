//! Exhaustive enumeration of phylogenetic trees by leaf insertion.
//!
//! Every tree on leaves `0..k+1` arises exactly once from a tree on `0..k` by
//! attaching leaf `k` either to a new vertex subdividing an edge or, in
//! [`TreeMode::All`], directly to an existing interior vertex. Deleting the
//! highest leaf (and suppressing a degree-2 vertex) inverts the insertion, so
//! the recursion is duplicate-free.
//!
//! Positions are scanned in a fixed order: edges by their canonical side,
//! then interior vertices by the cluster below them when rooted at leaf 0.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{full_mask, LeafMask, LeafSet, PhyloTree, Split};

/// Which trees to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeMode {
    /// Only binary trees.
    Binary,
    /// Every phylogenetic tree (no degree-2 vertices).
    All,
}

/// Default leaf cap for binary enumeration (654,729,075 trees at the cap).
pub const BINARY_CAP: usize = 12;
/// Default leaf cap for enumerating all trees.
pub const ALL_CAP: usize = 9;

impl TreeMode {
    pub fn default_cap(self) -> usize {
        match self {
            TreeMode::Binary => BINARY_CAP,
            TreeMode::All => ALL_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Position {
    /// Subdivide the edge whose canonical side is given.
    Edge(LeafMask),
    /// Attach to the interior vertex whose cluster (rooted at leaf 0) is given.
    Vertex(LeafMask),
}

/// Insertion positions on a tree with `k` leaves.
fn positions(splits: &[Split], k: usize, mode: TreeMode) -> Vec<Position> {
    let root_cluster = full_mask(k) & !1;
    let mut edges: Vec<LeafMask> = (1..k).map(|j| 1 << j).collect();
    edges.push(root_cluster);
    edges.extend(splits.iter().map(|s| s.side()));
    edges.sort_unstable();
    let mut out: Vec<Position> = edges.into_iter().map(Position::Edge).collect();
    if mode == TreeMode::All {
        let mut vertices: Vec<LeafMask> = splits.iter().map(|s| s.side()).collect();
        vertices.push(root_cluster);
        vertices.sort_unstable();
        out.extend(vertices.into_iter().map(Position::Vertex));
    }
    out
}

/// Inserts leaf `k` (the tree currently has leaves `0..k`) at `pos`.
fn insert(splits: &[Split], pos: Position, k: usize) -> Vec<Split> {
    let n = k + 1;
    let x: LeafMask = 1 << k;
    let nontrivial = |m: LeafMask| m.count_ones() >= 2 && (n as u32 - m.count_ones()) >= 2;
    let mut out: Vec<Split> = Vec::with_capacity(splits.len() + 1);
    match pos {
        Position::Edge(s) => {
            for t in splits.iter().map(|t| t.side()) {
                let strictly_above = t & s == s && t != s;
                out.push(Split::canonical(if strictly_above { t | x } else { t }, n));
            }
            for m in [s, s | x] {
                if nontrivial(m) && !splits.iter().any(|t| t.side() == m) {
                    out.push(Split::canonical(m, n));
                }
            }
        }
        Position::Vertex(c) => {
            for t in splits.iter().map(|t| t.side()) {
                out.push(Split::canonical(if t & c == c { t | x } else { t }, n));
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_size(n: usize, cap: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewLeaves { n, min: 3 });
    }
    if n > cap {
        return Err(Error::TooManyLeaves { n, cap });
    }
    Ok(())
}

/// Number of insertion positions at the final step, the size of the
/// partition used for parallel scans.
pub fn partition_count(n: usize, mode: TreeMode) -> usize {
    if n <= 3 {
        return 1;
    }
    let k = n - 1;
    match mode {
        TreeMode::Binary => 2 * k - 3,
        TreeMode::All => (2 * k - 3) + (k - 2),
    }
}

/// Lazy, restartable stream of every tree on a leaf set.
#[derive(Clone, Debug)]
pub struct TreeStream {
    leaves: Arc<LeafSet>,
    mode: TreeMode,
    last_position: Option<usize>,
    stack: Vec<Frame>,
    base_pending: bool,
}

#[derive(Clone, Debug)]
struct Frame {
    splits: Vec<Split>,
    positions: Vec<Position>,
    next: usize,
}

/// Streams every tree on `leaves` under the default caps.
pub fn enumerate_trees(leaves: Arc<LeafSet>, mode: TreeMode) -> Result<TreeStream> {
    enumerate_trees_capped(leaves, mode, mode.default_cap())
}

/// Streams every tree on `leaves`, with an explicit leaf cap.
pub fn enumerate_trees_capped(
    leaves: Arc<LeafSet>,
    mode: TreeMode,
    cap: usize,
) -> Result<TreeStream> {
    check_size(leaves.len(), cap)?;
    let mut stream = TreeStream {
        leaves,
        mode,
        last_position: None,
        stack: Vec::new(),
        base_pending: false,
    };
    stream.restart();
    Ok(stream)
}

impl TreeStream {
    pub fn leaves(&self) -> &Arc<LeafSet> {
        &self.leaves
    }

    pub fn mode(&self) -> TreeMode {
        self.mode
    }

    /// Rewinds to the first tree.
    pub fn restart(&mut self) {
        let n = self.leaves.len();
        self.stack.clear();
        self.base_pending = n == 3;
        if n > 3 {
            self.push_frame(Vec::new(), 3);
        }
    }

    /// Disjoint sub-streams, one per insertion position of the last leaf,
    /// whose union is this stream.
    pub fn partitions(&self) -> Vec<TreeStream> {
        (0..partition_count(self.leaves.len(), self.mode))
            .map(|p| {
                let mut s = self.clone();
                s.last_position = Some(p);
                s.restart();
                s
            })
            .collect()
    }

    fn push_frame(&mut self, splits: Vec<Split>, k: usize) {
        let mut positions = positions(&splits, k, self.mode);
        if k + 1 == self.leaves.len() {
            if let Some(p) = self.last_position {
                positions = positions.get(p).copied().into_iter().collect();
            }
        }
        self.stack.push(Frame {
            splits,
            positions,
            next: 0,
        });
    }
}

impl Iterator for TreeStream {
    type Item = PhyloTree;

    fn next(&mut self) -> Option<PhyloTree> {
        let n = self.leaves.len();
        if self.base_pending {
            self.base_pending = false;
            if self.last_position.is_none_or(|p| p == 0) {
                return Some(PhyloTree::star(self.leaves.clone()));
            }
            return None;
        }
        loop {
            let depth = self.stack.len();
            let top = self.stack.last_mut()?;
            let Some(&pos) = top.positions.get(top.next) else {
                self.stack.pop();
                continue;
            };
            top.next += 1;
            // the frame at depth d holds a tree on d + 2 leaves
            let k = depth + 2;
            let child = insert(&top.splits, pos, k);
            if k + 1 == n {
                return Some(PhyloTree::from_sorted_unchecked(self.leaves.clone(), child));
            }
            self.push_frame(child, k + 1);
        }
    }
}

/// Depth-first walk over raw split vectors with subtree pruning.
///
/// `keep(k, splits)` is consulted after every insertion, with `k` the number
/// of leaves present; returning `false` skips that tree and everything grown
/// from it. Visit order matches [`TreeStream`].
pub(crate) fn walk<K, V>(
    n: usize,
    mode: TreeMode,
    last_position: Option<usize>,
    keep: &mut K,
    visit: &mut V,
) -> ControlFlow<()>
where
    K: FnMut(usize, &[Split]) -> bool,
    V: FnMut(&[Split]) -> ControlFlow<()>,
{
    if n == 3 {
        if last_position.is_none_or(|p| p == 0) && keep(3, &[]) {
            return visit(&[]);
        }
        return ControlFlow::Continue(());
    }
    if !keep(3, &[]) {
        return ControlFlow::Continue(());
    }
    walk_from(&[], 3, n, mode, last_position, keep, visit)
}

fn walk_from<K, V>(
    splits: &[Split],
    k: usize,
    n: usize,
    mode: TreeMode,
    last_position: Option<usize>,
    keep: &mut K,
    visit: &mut V,
) -> ControlFlow<()>
where
    K: FnMut(usize, &[Split]) -> bool,
    V: FnMut(&[Split]) -> ControlFlow<()>,
{
    let all = positions(splits, k, mode);
    let chosen: &[Position] = match last_position {
        Some(p) if k + 1 == n => all.get(p..=p).unwrap_or(&[]),
        _ => &all,
    };
    for &pos in chosen {
        let child = insert(splits, pos, k);
        if !keep(k + 1, &child) {
            continue;
        }
        if k + 1 == n {
            visit(&child)?;
        } else {
            walk_from(&child, k + 1, n, mode, last_position, keep, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// Folds every tree on `n` leaves in parallel over the last-leaf partition.
/// `reduce` must be associative and order-insensitive for the result to be
/// independent of thread count.
pub(crate) fn par_fold<T, F, R>(n: usize, mode: TreeMode, identity: T, fold: F, reduce: R) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, &[Split]) + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    (0..partition_count(n, mode))
        .into_par_iter()
        .map(|p| {
            let mut acc = identity.clone();
            let _ = walk(n, mode, Some(p), &mut |_, _| true, &mut |s| {
                fold(&mut acc, s);
                ControlFlow::Continue(())
            });
            acc
        })
        .reduce(|| identity.clone(), reduce)
}

/// Number of trees on `n` leaves, counted by walking the enumeration.
pub fn count_trees(n: usize, mode: TreeMode) -> Result<u64> {
    count_trees_capped(n, mode, mode.default_cap())
}

pub fn count_trees_capped(n: usize, mode: TreeMode, cap: usize) -> Result<u64> {
    check_size(n, cap.min(crate::model::MAX_LEAVES))?;
    Ok(par_fold(n, mode, 0u64, |c, _| *c += 1, |a, b| a + b))
}

/// `(2n − 5)!!`, the number of binary trees on `n ≥ 3` leaves.
pub fn binary_tree_count(n: usize) -> u64 {
    (3..n).map(|k| (2 * k - 3) as u64).product()
}

/// A binary tree drawn by inserting each leaf on a uniformly chosen edge,
/// which is uniform over binary topologies.
pub fn random_binary_tree<R: Rng + ?Sized>(leaves: Arc<LeafSet>, rng: &mut R) -> Result<PhyloTree> {
    let n = leaves.len();
    check_size(n, crate::model::MAX_LEAVES)?;
    let mut splits = Vec::new();
    for k in 3..n {
        let pos = positions(&splits, k, TreeMode::Binary);
        splits = insert(&splits, pos[rng.gen_range(0..pos.len())], k);
    }
    Ok(PhyloTree::from_sorted_unchecked(leaves, splits))
}
