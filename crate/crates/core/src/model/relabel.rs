use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::leaves::LeafSet;
use crate::model::quartet::{Quartet, QuartetSet};
use crate::model::split::Split;
use crate::model::tree::{remap_mask, PhyloTree};

/// A bijection between two leaf sets, resolved to index form.
#[derive(Clone, Debug)]
pub struct Relabeling {
    from: Arc<LeafSet>,
    to: Arc<LeafSet>,
    index_map: Vec<usize>,
}

impl Relabeling {
    /// Builds the relabeling sending each leaf `l` of `from` to `map(l)`.
    pub fn new(from: Arc<LeafSet>, map: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let mut images = Vec::with_capacity(from.len());
        let mut seen = HashSet::new();
        for label in from.labels() {
            let image =
                map(label).ok_or_else(|| Error::NonBijective(format!("`{label}` has no image")))?;
            if !seen.insert(image.clone()) {
                return Err(Error::NonBijective(format!("`{image}` is hit twice")));
            }
            images.push(image);
        }
        let to = Arc::new(LeafSet::new(images.iter().cloned())?);
        let index_map = images
            .iter()
            .map(|l| to.index_of(l))
            .collect::<Result<_>>()?;
        Ok(Self {
            from,
            to,
            index_map,
        })
    }

    pub fn from_map(from: Arc<LeafSet>, map: &HashMap<String, String>) -> Result<Self> {
        Self::new(from, |l| map.get(l).cloned())
    }

    pub fn identity(leaves: Arc<LeafSet>) -> Self {
        Self {
            index_map: (0..leaves.len()).collect(),
            to: leaves.clone(),
            from: leaves,
        }
    }

    /// `j ↦ n + 1 − j` on leaves labelled `1..n`.
    pub fn reversal(leaves: Arc<LeafSet>) -> Result<Self> {
        let n = leaves.len();
        let expected: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        if leaves.labels() != expected.as_slice() {
            return Err(Error::NonBijective(
                "reversal needs leaves labelled 1..n".into(),
            ));
        }
        Ok(Self {
            index_map: (0..n).rev().collect(),
            to: leaves.clone(),
            from: leaves,
        })
    }

    pub fn source(&self) -> &Arc<LeafSet> {
        &self.from
    }

    pub fn target(&self) -> &Arc<LeafSet> {
        &self.to
    }

    pub fn quartet(&self, q: &Quartet) -> Result<Quartet> {
        if q.max_leaf() >= self.index_map.len() {
            return Err(Error::UnknownLeaf(format!("index {}", q.max_leaf())));
        }
        let m = &self.index_map;
        let ((a, b), (c, d)) = (q.pair1(), q.pair2());
        Quartet::new(m[a], m[b], m[c], m[d])
    }

    pub fn split(&self, s: Split) -> Split {
        Split::canonical(remap_mask(s.side(), &self.index_map), self.to.len())
    }

    pub fn tree(&self, t: &PhyloTree) -> Result<PhyloTree> {
        t.check_leaves(&self.from)?;
        let mut splits: Vec<Split> = t.splits().iter().map(|&s| self.split(s)).collect();
        splits.sort_unstable();
        Ok(PhyloTree::from_sorted_unchecked(self.to.clone(), splits))
    }

    pub fn quartet_set(&self, q: &QuartetSet) -> Result<QuartetSet> {
        if !q.same_leaves(&self.from) {
            return Err(Error::LeafSetMismatch);
        }
        let mapped = q
            .iter()
            .map(|x| self.quartet(x))
            .collect::<Result<Vec<_>>>()?;
        QuartetSet::from_quartets(self.to.clone(), mapped)
    }
}

impl PhyloTree {
    /// The tree with leaves `1..n` renumbered `j ↦ n + 1 − j`.
    pub fn reversed(&self) -> Result<PhyloTree> {
        Relabeling::reversal(self.leaves().clone())?.tree(self)
    }
}
