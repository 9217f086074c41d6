use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::leaves::{bits, same_leaves, LeafMask, LeafSet};
use crate::model::quartet::{Quartet, QuartetSet};
use crate::model::split::Split;

/// An unrooted phylogenetic tree, held as its set of nontrivial splits.
///
/// By the splits-equivalence theorem a pairwise compatible set of nontrivial
/// splits determines a unique tree without degree-2 vertices, so equality,
/// display and distinguishing all reduce to bit operations on the splits.
/// Splits are kept sorted; two trees are equal iff their leaf sets and split
/// sets are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhyloTree {
    leaves: Arc<LeafSet>,
    splits: Vec<Split>,
}

impl PhyloTree {
    /// Builds a tree from nontrivial splits, rejecting any incompatible pair.
    pub fn from_splits(
        leaves: Arc<LeafSet>,
        splits: impl IntoIterator<Item = Split>,
    ) -> Result<Self> {
        let n = leaves.len();
        let mut splits: Vec<Split> = splits.into_iter().collect();
        for s in &splits {
            if s.side() & !leaves.full_mask() != 0 {
                return Err(Error::UnknownLeaf(format!(
                    "index {}",
                    (s.side() & !leaves.full_mask()).trailing_zeros()
                )));
            }
            if !s.is_nontrivial(n) {
                return Err(Error::TrivialSplit(s.render(&leaves)));
            }
        }
        splits.sort_unstable();
        splits.dedup();
        for (i, a) in splits.iter().enumerate() {
            if let Some(b) = splits[i + 1..].iter().find(|b| !a.compatible(**b)) {
                return Err(Error::IncompatibleSplits(
                    a.render(&leaves),
                    b.render(&leaves),
                ));
            }
        }
        Ok(Self { leaves, splits })
    }

    /// Builds a tree from raw sides (either side of each split), dropping
    /// trivial ones.
    pub fn from_sides(
        leaves: Arc<LeafSet>,
        sides: impl IntoIterator<Item = LeafMask>,
    ) -> Result<Self> {
        let n = leaves.len();
        let mut splits = Vec::new();
        for side in sides {
            if side == 0 || side == leaves.full_mask() {
                continue;
            }
            let s = Split::from_side(side, n)?;
            if s.is_nontrivial(n) {
                splits.push(s);
            }
        }
        Self::from_splits(leaves, splits)
    }

    /// Trusted constructor for splits already canonical, nontrivial and
    /// compatible.
    pub(crate) fn from_sorted_unchecked(leaves: Arc<LeafSet>, splits: Vec<Split>) -> Self {
        debug_assert!(splits.windows(2).all(|w| w[0] < w[1]));
        Self { leaves, splits }
    }

    /// The tree with a single interior vertex.
    pub fn star(leaves: Arc<LeafSet>) -> Self {
        Self {
            leaves,
            splits: Vec::new(),
        }
    }

    pub fn leaves(&self) -> &Arc<LeafSet> {
        &self.leaves
    }

    pub fn n(&self) -> usize {
        self.leaves.len()
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn has_split(&self, s: Split) -> bool {
        self.splits.binary_search(&s).is_ok()
    }

    /// A tree on `n ≥ 3` leaves has at most `n − 3` interior edges and is
    /// binary exactly when it has that many.
    pub fn is_binary(&self) -> bool {
        self.splits.len() + 3 == self.n() || (self.n() < 3 && self.splits.is_empty())
    }

    /// Splits separating `q`'s first pair from its second.
    pub fn separating_splits(&self, q: &Quartet) -> impl Iterator<Item = Split> + '_ {
        let (p1, p2) = (q.pair1_mask(), q.pair2_mask());
        self.splits
            .iter()
            .copied()
            .filter(move |s| s.separates(p1, p2))
    }

    /// Whether some cut-edge separates `ab` from `cd`. Only nontrivial
    /// splits can separate two leaves from two others.
    pub fn displays(&self, q: &Quartet) -> bool {
        self.separating_splits(q).next().is_some()
    }

    pub fn displays_all<'a>(&self, quartets: impl IntoIterator<Item = &'a Quartet>) -> bool {
        quartets.into_iter().all(|q| self.displays(q))
    }

    /// Label-level display check.
    pub fn displays_labels(&self, a: &str, b: &str, c: &str, d: &str) -> Result<bool> {
        Ok(self.displays(&self.leaves.quartet(a, b, c, d)?))
    }

    /// The unique split separating `q`, or `None` if zero or several do.
    pub fn distinguished_edge(&self, q: &Quartet) -> Option<Split> {
        let mut it = self.separating_splits(q);
        match (it.next(), it.next()) {
            (Some(s), None) => Some(s),
            _ => None,
        }
    }

    pub fn displays_set(&self, q: &QuartetSet) -> Result<bool> {
        self.check_leaves(q.leaves())?;
        Ok(self.displays_all(q))
    }

    /// Removes the interior edge `e`, merging its endpoints.
    pub fn contract(&self, e: Split) -> Result<Self> {
        let pos = self
            .splits
            .binary_search(&e)
            .map_err(|_| Error::NoSuchSplit(e.render(&self.leaves)))?;
        let mut splits = self.splits.clone();
        splits.remove(pos);
        Ok(Self::from_sorted_unchecked(self.leaves.clone(), splits))
    }

    /// Replaces leaf `x` by the cherry `{x, y}`, with `y` a fresh label.
    pub fn cherry_replace(&self, x: &str, y: &str) -> Result<Self> {
        let xi = self.leaves.index_of(x)?;
        if self.leaves.contains(y) {
            return Err(Error::LabelCollision(y.to_string()));
        }
        let grown = Arc::new(LeafSet::new(
            self.leaves.labels().iter().cloned().chain([y.to_string()]),
        )?);
        let old_to_new: Vec<usize> = self
            .leaves
            .labels()
            .iter()
            .map(|l| grown.index_of(l))
            .collect::<Result<_>>()?;
        let (x_new, y_new) = (old_to_new[xi], grown.index_of(y)?);
        let sides = self
            .splits
            .iter()
            .map(|s| {
                let side = remap_mask(s.side(), &old_to_new);
                if side >> x_new & 1 == 1 {
                    side | 1 << y_new
                } else {
                    side
                }
            })
            .chain([1 << x_new | 1 << y_new]);
        Self::from_sides(grown, sides)
    }

    /// Deletes a leaf, suppressing the resulting degree-2 vertex.
    pub fn remove_leaf(&self, label: &str) -> Result<Self> {
        let gone = self.leaves.index_of(label)?;
        let shrunk = Arc::new(LeafSet::new(
            self.leaves
                .labels()
                .iter()
                .filter(|l| l.as_str() != label)
                .cloned(),
        )?);
        let old_to_new: Vec<usize> = (0..self.n())
            .map(|i| if i < gone { i } else { i.saturating_sub(1) })
            .collect();
        let sides = self
            .splits
            .iter()
            .map(|s| remap_mask(s.side() & !(1 << gone), &old_to_new));
        Self::from_sides(shrunk, sides)
    }

    pub(crate) fn check_leaves(&self, other: &Arc<LeafSet>) -> Result<()> {
        if same_leaves(&self.leaves, other) {
            Ok(())
        } else {
            Err(Error::LeafSetMismatch)
        }
    }
}

impl fmt::Debug for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let splits: Vec<String> = self.splits.iter().map(|s| s.render(&self.leaves)).collect();
        f.debug_struct("PhyloTree")
            .field("leaves", &self.leaves)
            .field("splits", &splits)
            .finish()
    }
}

/// Moves each set bit `i` of `mask` to `map[i]`.
pub(crate) fn remap_mask(mask: LeafMask, map: &[usize]) -> LeafMask {
    bits(mask).fold(0, |m, i| m | 1 << map[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves(n: usize) -> Arc<LeafSet> {
        Arc::new(LeafSet::numbered(n).unwrap())
    }

    fn tree(n: usize, splits: &[&str]) -> PhyloTree {
        let l = leaves(n);
        let s: Vec<Split> = splits
            .iter()
            .map(|s| Split::parse(s, &l).unwrap())
            .collect();
        PhyloTree::from_splits(l, s).unwrap()
    }

    fn t6() -> PhyloTree {
        tree(6, &["1,2|3,4,5,6", "1,2,3|4,5,6", "1,2,3,4|5,6"])
    }

    fn q(t: &PhyloTree, text: &str) -> Quartet {
        t.leaves().parse_quartet(text).unwrap()
    }

    #[test]
    fn star_and_incompatible() {
        let star = PhyloTree::star(leaves(4));
        assert!(!star.is_binary());
        assert!(!star.displays(&q(&star, "1,2|3,4")));
        let l = leaves(5);
        let err = PhyloTree::from_splits(
            l.clone(),
            [
                Split::parse("1,2|3,4,5", &l).unwrap(),
                Split::parse("1,3|2,4,5", &l).unwrap(),
            ],
        );
        assert!(matches!(err, Err(Error::IncompatibleSplits(_, _))));
        let trivial = PhyloTree::from_splits(l.clone(), [Split::parse("1|2,3,4,5", &l).unwrap()]);
        assert!(matches!(trivial, Err(Error::TrivialSplit(_))));
    }

    #[test]
    fn split_order_does_not_matter() {
        let a = t6();
        let b = tree(6, &["5,6|1,2,3,4", "1,2|3,4,5,6", "4,5,6|1,2,3"]);
        assert_eq!(a, b);
        assert!(a.is_binary());
    }

    #[test]
    fn display_and_distinguish_on_t6() {
        let t = t6();
        let l = t.leaves().clone();
        assert!(t.displays(&q(&t, "1,2|3,5")));
        assert_eq!(
            t.distinguished_edge(&q(&t, "1,2|3,5"))
                .map(|s| s.render(&l)),
            Some("1,2|3,4,5,6".into())
        );
        assert_eq!(t.distinguished_edge(&q(&t, "1,2|5,6")), None);
        assert!(t.displays(&q(&t, "1,2|5,6")));
        assert_eq!(
            t.distinguished_edge(&q(&t, "1,3|4,6"))
                .map(|s| s.render(&l)),
            Some("1,2,3|4,5,6".into())
        );
        assert!(!t.displays(&q(&t, "1,3|2,4")));
    }

    #[test]
    fn contraction() {
        let t = t6();
        let e = Split::parse("1,2|3,4,5,6", t.leaves()).unwrap();
        let c = t.contract(e).unwrap();
        assert_eq!(c.splits().len(), 2);
        assert!(c.displays(&q(&t, "1,3|4,6")));
        assert!(c.displays(&q(&t, "2,4|5,6")));
        assert!(!c.displays(&q(&t, "1,2|3,5")));
        assert!(matches!(c.contract(e), Err(Error::NoSuchSplit(_))));

        let quartet_tree = tree(4, &["1,2|3,4"]);
        let star = quartet_tree.contract(quartet_tree.splits()[0]).unwrap();
        assert_eq!(star, PhyloTree::star(leaves(4)));
        assert!(PhyloTree::star(leaves(4))
            .contract(quartet_tree.splits()[0])
            .is_err());
    }

    #[test]
    fn cherry_replacement() {
        let t = tree(4, &["1,2|3,4"]);
        let grown = t.cherry_replace("4", "5").unwrap();
        assert_eq!(grown, tree(5, &["1,2|3,4,5", "4,5|1,2,3"]));
        assert!(matches!(
            t.cherry_replace("9", "5"),
            Err(Error::UnknownLeaf(_))
        ));
        assert!(matches!(
            t.cherry_replace("4", "3"),
            Err(Error::LabelCollision(_))
        ));
        assert_eq!(grown.remove_leaf("5").unwrap(), t);
    }

    #[test]
    fn cherry_with_label_sorting_first() {
        let l = Arc::new(LeafSet::new(["b", "c", "d", "e"]).unwrap());
        let t = PhyloTree::from_splits(l.clone(), [Split::parse("b,c|d,e", &l).unwrap()]).unwrap();
        let grown = t.cherry_replace("d", "a").unwrap();
        let gl = grown.leaves().clone();
        assert_eq!(grown.splits().len(), 2);
        assert!(grown.has_split(Split::parse("a,d|b,c,e", &gl).unwrap()));
        assert!(grown.has_split(Split::parse("b,c|a,d,e", &gl).unwrap()));
    }

    #[test]
    fn removing_a_leaf_suppresses_degree_two() {
        let t = t6();
        let r = t.remove_leaf("1").unwrap();
        assert_eq!(r.n(), 5);
        assert_eq!(r.splits().len(), 2);
        assert!(r.displays_labels("2", "3", "5", "6").unwrap());
    }
}
