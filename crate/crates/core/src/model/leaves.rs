use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on leaves: split sides are single `u64` bit sets.
pub const MAX_LEAVES: usize = 64;

/// Bit mask over leaf indices.
pub type LeafMask = u64;

/// Mask with the low `n` bits set.
pub fn full_mask(n: usize) -> LeafMask {
    if n >= 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

/// An ordered set of distinct leaf labels.
///
/// Labels are sorted with a numeric-aware comparison so that `"2" < "10"`,
/// and each label's position in that order is its dense index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafSet {
    labels: Vec<String>,
}

impl LeafSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::EmptyLabel);
        }
        labels.sort_by(|a, b| natural_cmp(a, b));
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLeaf(w[0].clone()));
        }
        if labels.len() > MAX_LEAVES {
            return Err(Error::TooManyLeaves {
                n: labels.len(),
                cap: MAX_LEAVES,
            });
        }
        Ok(Self { labels })
    }

    /// Leaves labelled `"1"`..`"n"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|probe| natural_cmp(probe, label))
            .map_err(|_| Error::UnknownLeaf(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index_of(label).is_ok()
    }

    pub fn full_mask(&self) -> LeafMask {
        full_mask(self.len())
    }

    /// Labels of the set bits of `mask`, in index order.
    pub fn labels_of(&self, mask: LeafMask) -> impl Iterator<Item = &str> + '_ {
        bits(mask).map(move |i| self.label(i))
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

/// Same leaf set, by pointer first and by value otherwise.
pub(crate) fn same_leaves(a: &Arc<LeafSet>, b: &Arc<LeafSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Indices of the set bits of `mask`, ascending.
pub fn bits(mut mask: LeafMask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Numeric-aware label order: runs of digits compare by value.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (ra, rb) = (trim_zeros(&a[..da]), trim_zeros(&b[..db]));
                let ord = ra
                    .len()
                    .cmp(&rb.len())
                    .then_with(|| ra.cmp(rb))
                    // "01" after "1" so distinct labels never tie
                    .then_with(|| da.cmp(&db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let z = digits.iter().take_while(|&&c| c == b'0').count();
    &digits[z..]
}
