use crate::error::{Error, Result};
use crate::model::leaves::{full_mask, LeafMask, LeafSet};

/// A bipartition of the leaf indices `0..n`.
///
/// Stored as the side that does *not* contain leaf 0, which makes the
/// representation unique. The leaf count is carried by the owning tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split(LeafMask);

impl Split {
    /// Canonicalizes either side of a bipartition of `0..n`.
    pub fn from_side(side: LeafMask, n: usize) -> Result<Self> {
        let full = full_mask(n);
        if side & !full != 0 {
            return Err(Error::UnknownLeaf(format!(
                "index {}",
                (side & !full).trailing_zeros()
            )));
        }
        let s = Self::canonical(side, n);
        if s.0 == 0 {
            return Err(Error::TrivialSplit(format!("{side:#b} (one side empty)")));
        }
        Ok(s)
    }

    /// Canonicalizes without validation; `side` must lie within `0..n`.
    pub(crate) fn canonical(side: LeafMask, n: usize) -> Self {
        if side & 1 == 1 {
            Self(!side & full_mask(n))
        } else {
            Self(side)
        }
    }

    /// The side not containing leaf 0.
    pub fn side(self) -> LeafMask {
        self.0
    }

    /// The side containing leaf 0.
    pub fn other_side(self, n: usize) -> LeafMask {
        !self.0 & full_mask(n)
    }

    pub fn is_nontrivial(self, n: usize) -> bool {
        self.0.count_ones() >= 2 && self.other_side(n).count_ones() >= 2
    }

    /// Two splits are compatible iff some pair of sides is disjoint. With
    /// both stored sides avoiding leaf 0 this reduces to nesting or disjointness.
    pub fn compatible(self, other: Split) -> bool {
        let (a, b) = (self.0, other.0);
        a & b == 0 || a & b == a || a & b == b
    }

    /// True iff `pair1` lies wholly on one side and `pair2` wholly on the other.
    pub fn separates(self, pair1: LeafMask, pair2: LeafMask) -> bool {
        let s = self.0;
        (s & pair1 == pair1 && s & pair2 == 0) || (s & pair2 == pair2 && s & pair1 == 0)
    }

    /// Renders as `"a,b|c,d,e"`, the side holding leaf 0 first.
    pub fn render(self, leaves: &LeafSet) -> String {
        let n = leaves.len();
        let join = |mask| leaves.labels_of(mask).collect::<Vec<_>>().join(",");
        format!("{}|{}", join(self.other_side(n)), join(self.0))
    }

    /// Parses `"a,b|c,d,e"` against `leaves`; the two sides must partition it.
    pub fn parse(text: &str, leaves: &LeafSet) -> Result<Self> {
        let bad = |message: &str| Error::Syntax {
            position: 0,
            message: format!("{message} in split `{text}`"),
        };
        let (left, right) = text.split_once('|').ok_or_else(|| bad("missing `|`"))?;
        let mut masks = [0u64; 2];
        for (mask, part) in masks.iter_mut().zip([left, right]) {
            for label in part.split(',').map(str::trim) {
                let bit = 1u64 << leaves.index_of(label)?;
                if *mask & bit != 0 {
                    return Err(Error::DuplicateLeaf(label.to_string()));
                }
                *mask |= bit;
            }
        }
        if masks[0] & masks[1] != 0 || masks[0] | masks[1] != leaves.full_mask() {
            return Err(bad("sides do not partition the leaf set"));
        }
        Self::from_side(masks[1], leaves.len())
    }
}
