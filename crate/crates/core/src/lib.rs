//! Definitive and minimal definitive quartet sets on phylogenetic trees.
//!
//! A set of quartets `Q` *defines* a tree `T` when `T` is the only
//! phylogenetic tree on the leaves of `Q` that displays every quartet, and is
//! *minimally* definitive when no single quartet can be dropped. This crate
//! provides the tree and quartet model, exhaustive tree enumeration, two
//! independent deciders, the `2n − 8` caterpillar family with its witness
//! trees, text formats, and a randomized search tool.

pub mod construct;
pub mod decide;
pub mod enumerate;
pub mod error;
pub mod io;
pub mod model;
pub mod search;

pub use construct::{caterpillar, construct_qn, verify_theorem, witness_chain, WitnessChain};
pub use decide::{
    closure_lemma3, common_leaf_certificate, defines, minimality_report, semantic_infers,
    undistinguished_edges, DecideMode, MinimalityReport, Status, Verdict, Witness,
};
pub use enumerate::{count_trees, enumerate_trees, TreeMode, TreeStream};
pub use error::{Error, Result};
pub use model::{LeafSet, PhyloTree, Quartet, QuartetSet, Relabeling, Split};
