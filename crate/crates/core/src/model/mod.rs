//! Leaves, splits, quartets and trees.

pub mod leaves;
pub mod quartet;
pub mod relabel;
pub mod split;
pub mod tree;

pub use leaves::{bits, full_mask, natural_cmp, LeafMask, LeafSet, MAX_LEAVES};
pub use quartet::{Quartet, QuartetSet};
pub use relabel::Relabeling;
pub use split::Split;
pub use tree::PhyloTree;
