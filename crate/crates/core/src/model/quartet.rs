use std::sync::Arc;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::model::leaves::{same_leaves, LeafMask, LeafSet};

/// The quartet `ab|cd`, normalized so that `a < b`, `c < d` and `a < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quartet {
    pair1: (u8, u8),
    pair2: (u8, u8),
}

impl Quartet {
    /// Builds `ab|cd` from leaf indices. Any ordering within or between the
    /// pairs yields the same value.
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Result<Self> {
        let ids = [a, b, c, d];
        for (i, x) in ids.iter().enumerate() {
            if ids[i + 1..].contains(x) {
                return Err(Error::DuplicateLeaf(format!("index {x}")));
            }
            if *x >= crate::model::MAX_LEAVES {
                return Err(Error::UnknownLeaf(format!("index {x}")));
            }
        }
        let p = |x: usize, y: usize| (x.min(y) as u8, x.max(y) as u8);
        let (p1, p2) = (p(a, b), p(c, d));
        let (pair1, pair2) = if p1.0 < p2.0 { (p1, p2) } else { (p2, p1) };
        Ok(Self { pair1, pair2 })
    }

    pub fn pair1(self) -> (usize, usize) {
        (self.pair1.0 as usize, self.pair1.1 as usize)
    }

    pub fn pair2(self) -> (usize, usize) {
        (self.pair2.0 as usize, self.pair2.1 as usize)
    }

    pub fn pair1_mask(self) -> LeafMask {
        (1 << self.pair1.0) | (1 << self.pair1.1)
    }

    pub fn pair2_mask(self) -> LeafMask {
        (1 << self.pair2.0) | (1 << self.pair2.1)
    }

    pub fn mask(self) -> LeafMask {
        self.pair1_mask() | self.pair2_mask()
    }

    /// Largest leaf index used.
    pub fn max_leaf(self) -> usize {
        self.pair1.1.max(self.pair2.1) as usize
    }

    pub fn contains(self, leaf: usize) -> bool {
        self.mask() >> leaf & 1 == 1
    }

    /// Renders as `"a,b|c,d"`.
    pub fn render(self, leaves: &LeafSet) -> String {
        let (a, b) = self.pair1();
        let (c, d) = self.pair2();
        format!(
            "{},{}|{},{}",
            leaves.label(a),
            leaves.label(b),
            leaves.label(c),
            leaves.label(d)
        )
    }
}

impl LeafSet {
    /// The quartet `ab|cd` over labels of this set.
    pub fn quartet(&self, a: &str, b: &str, c: &str, d: &str) -> Result<Quartet> {
        let labels = [a, b, c, d];
        for (i, l) in labels.iter().enumerate() {
            if labels[i + 1..].contains(l) {
                return Err(Error::DuplicateLeaf(l.to_string()));
            }
        }
        Quartet::new(
            self.index_of(a)?,
            self.index_of(b)?,
            self.index_of(c)?,
            self.index_of(d)?,
        )
    }

    /// Parses `"a,b|c,d"` (surrounding whitespace ignored) against this set.
    pub fn parse_quartet(&self, text: &str) -> Result<Quartet> {
        let [a, b, c, d] = split_quartet_text(text).ok_or_else(|| Error::Syntax {
            position: 0,
            message: format!("expected `a,b|c,d`, found `{}`", text.trim()),
        })?;
        self.quartet(a, b, c, d)
    }
}

/// Splits `"a,b|c,d"` into its four labels, or `None` on a malformed line.
pub(crate) fn split_quartet_text(text: &str) -> Option<[&str; 4]> {
    let (left, right) = text.trim().split_once('|')?;
    fn pair(s: &str) -> Option<(&str, &str)> {
        let (x, y) = s.split_once(',')?;
        let ok = |l: &str| {
            !l.is_empty() && !l.contains([',', '|']) && !l.chars().any(char::is_whitespace)
        };
        (ok(x) && ok(y)).then_some((x, y))
    }
    let (a, b) = pair(left)?;
    let (c, d) = pair(right)?;
    Some([a, b, c, d])
}

/// A deduplicated set of quartets over a shared ambient leaf set.
///
/// Insertion order is kept for output; equality ignores it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartetSet {
    leaves: Arc<LeafSet>,
    quartets: IndexSet<Quartet>,
}

impl QuartetSet {
    pub fn new(leaves: Arc<LeafSet>) -> Self {
        Self {
            leaves,
            quartets: IndexSet::new(),
        }
    }

    pub fn from_quartets(
        leaves: Arc<LeafSet>,
        quartets: impl IntoIterator<Item = Quartet>,
    ) -> Result<Self> {
        let mut set = Self::new(leaves);
        for q in quartets {
            set.insert(q)?;
        }
        Ok(set)
    }

    /// Builds a set from `"a,b|c,d"` strings over `leaves`.
    pub fn parse_all<'a>(
        leaves: Arc<LeafSet>,
        quartets: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self> {
        let parsed = quartets
            .into_iter()
            .map(|q| leaves.parse_quartet(q))
            .collect::<Result<Vec<_>>>()?;
        Self::from_quartets(leaves, parsed)
    }

    /// Returns `false` if `q` was already present.
    pub fn insert(&mut self, q: Quartet) -> Result<bool> {
        if q.max_leaf() >= self.leaves.len() {
            return Err(Error::UnknownLeaf(format!("index {}", q.max_leaf())));
        }
        Ok(self.quartets.insert(q))
    }

    pub fn contains(&self, q: &Quartet) -> bool {
        self.quartets.contains(q)
    }

    /// `Q − q`, order preserved.
    pub fn without(&self, q: &Quartet) -> Self {
        let mut out = self.clone();
        out.quartets.shift_remove(q);
        out
    }

    pub fn leaves(&self) -> &Arc<LeafSet> {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.quartets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quartets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quartet> + '_ {
        self.quartets.iter()
    }

    pub fn get(&self, index: usize) -> Option<Quartet> {
        self.quartets.get_index(index).copied()
    }

    /// `L(Q)` as a mask over the ambient leaf set.
    pub fn support(&self) -> LeafMask {
        self.quartets.iter().fold(0, |m, q| m | q.mask())
    }

    /// True when every ambient leaf occurs in some quartet.
    pub fn covers_leaves(&self) -> bool {
        self.support() == self.leaves.full_mask()
    }

    /// Leaves occurring in every quartet.
    pub fn common_leaves(&self) -> LeafMask {
        if self.is_empty() {
            return 0;
        }
        self.quartets.iter().fold(!0, |m, q| m & q.mask())
    }

    pub fn sorted(&self) -> Vec<Quartet> {
        let mut v: Vec<_> = self.quartets.iter().copied().collect();
        v.sort();
        v
    }

    pub fn render(&self) -> Vec<String> {
        self.iter().map(|q| q.render(&self.leaves)).collect()
    }

    pub(crate) fn same_leaves(&self, other: &Arc<LeafSet>) -> bool {
        same_leaves(&self.leaves, other)
    }
}

impl<'a> IntoIterator for &'a QuartetSet {
    type Item = &'a Quartet;
    type IntoIter = indexmap::set::Iter<'a, Quartet>;

    fn into_iter(self) -> Self::IntoIter {
        self.quartets.iter()
    }
}
