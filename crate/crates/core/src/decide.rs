//! Definitiveness, minimality and inference for quartet sets.
//!
//! Two independent deciders are provided. [`DecideMode::Oracle`] scans every
//! phylogenetic tree on the leaf set and counts displayers. [`DecideMode::Fast`]
//! uses the characterization
//!
//! > `Q` defines `T` iff `T` is the only *binary* tree displaying `Q` and every
//! > interior edge of `T` is distinguished by some quartet of `Q`,
//!
//! which holds because every displayer refines to a binary displayer, and
//! contracting a set of edges of `T` keeps `Q` displayed exactly when none of
//! them is some quartet's unique separating edge. The binary scan prunes any
//! partial tree that already fails a quartet on its leaves.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::enumerate::{self, par_fold, TreeMode, ALL_CAP};
use crate::error::{Error, Result};
use crate::model::{bits, PhyloTree, Quartet, QuartetSet, Split};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecideMode {
    /// Exhaustive scan of all phylogenetic trees.
    Oracle,
    /// Pruned binary scan plus the edge-distinguishing test.
    Fast,
}

impl DecideMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DecideMode::Oracle => "oracle",
            DecideMode::Fast => "fast",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// `Q` is displayed by exactly this (binary) tree.
    Defines(PhyloTree),
    /// At least two trees display `Q`. `displayer_count` is exact in oracle
    /// mode; `displayers` holds two distinct examples.
    NotDefinitive {
        displayer_count: Option<u64>,
        displayers: Vec<PhyloTree>,
    },
    /// No tree displays `Q`.
    Incompatible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub mode: DecideMode,
}

impl Verdict {
    pub fn defined_tree(&self) -> Option<&PhyloTree> {
        match &self.status {
            Status::Defines(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_definitive(&self) -> bool {
        self.defined_tree().is_some()
    }

    /// Same status kind, and the same tree when defining.
    pub fn agrees_with(&self, other: &Verdict) -> bool {
        match (&self.status, &other.status) {
            (Status::Defines(a), Status::Defines(b)) => a == b,
            (Status::NotDefinitive { .. }, Status::NotDefinitive { .. }) => true,
            (Status::Incompatible, Status::Incompatible) => true,
            _ => false,
        }
    }
}

/// Why `Q − q` fails to define `T`, or that it still does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A tree other than `T` displaying `Q − q`.
    AlternativeTree(PhyloTree),
    /// An edge of `T` that no quartet of `Q − q` distinguishes.
    UndistinguishedEdge(Split),
    /// `Q − q` still defines `T`.
    Redundant,
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::AlternativeTree(_) => "alternative_tree",
            Witness::UndistinguishedEdge(_) => "undistinguished_edge",
            Witness::Redundant => "redundant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub quartet: Quartet,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub n: usize,
    pub size: usize,
    pub verdict: Verdict,
    /// One entry per quartet, in the set's order; empty unless `Q` defines a tree.
    pub entries: Vec<ReportEntry>,
    pub minimal: bool,
    /// `size ≥ n − 3` whenever `Q` is definitive.
    pub lower_bound_ok: bool,
}

impl MinimalityReport {
    pub fn lower_bound(&self) -> i64 {
        self.n as i64 - 3
    }
}

/// Trees on `Q`'s leaf set displaying every quartet, in stream order.
pub fn displayers(q: &QuartetSet, mode: TreeMode, limit: Option<usize>) -> Result<Vec<PhyloTree>> {
    let stream = enumerate::enumerate_trees(q.leaves().clone(), mode)?;
    let matching = stream.filter(|t| t.displays_all(q));
    Ok(match limit {
        Some(k) => matching.take(k).collect(),
        None => matching.collect(),
    })
}

/// Decides whether `Q` defines a tree on `L(Q)`.
///
/// The ambient leaf set of `Q` must equal `L(Q)`; use
/// [`defines_over_ambient`] to decide relative to a larger set.
pub fn defines(q: &QuartetSet, mode: DecideMode) -> Result<Verdict> {
    if !q.covers_leaves() {
        return Err(Error::AmbientMismatch {
            covered: q.support().count_ones() as usize,
            ambient: q.leaves().len(),
        });
    }
    defines_over_ambient(q, mode)
}

/// Decides uniqueness of the displayer among trees on `Q`'s ambient leaf set.
pub fn defines_over_ambient(q: &QuartetSet, mode: DecideMode) -> Result<Verdict> {
    let status = match mode {
        DecideMode::Oracle => oracle_status(q)?,
        DecideMode::Fast => fast_status(q)?,
    };
    Ok(Verdict { status, mode })
}

fn oracle_status(q: &QuartetSet) -> Result<Status> {
    let n = q.leaves().len();
    if n < 3 {
        return Err(Error::TooFewLeaves { n, min: 3 });
    }
    if n > ALL_CAP {
        return Err(Error::TooManyLeaves { n, cap: ALL_CAP });
    }
    let quartets: Vec<Quartet> = q.iter().copied().collect();
    // count plus the two smallest displayers, so the result is independent of
    // how the partitions are scheduled
    let (count, mut smallest) = par_fold(
        n,
        TreeMode::All,
        (0u64, Vec::<Vec<Split>>::new()),
        |(count, best), splits| {
            if quartets.iter().all(|x| displays_raw(splits, x)) {
                *count += 1;
                best.push(splits.to_vec());
                best.sort();
                best.truncate(2);
            }
        },
        |(ca, mut a), (cb, b)| {
            a.extend(b);
            a.sort();
            a.truncate(2);
            (ca + cb, a)
        },
    );
    let trees: Vec<PhyloTree> = smallest
        .drain(..)
        .map(|s| PhyloTree::from_sorted_unchecked(q.leaves().clone(), s))
        .collect();
    Ok(match count {
        0 => Status::Incompatible,
        1 => Status::Defines(trees.into_iter().next().expect("one displayer")),
        c => Status::NotDefinitive {
            displayer_count: Some(c),
            displayers: trees,
        },
    })
}

fn fast_status(q: &QuartetSet) -> Result<Status> {
    let found = binary_displayers_pruned(q, 2, None)?;
    Ok(match found.len() {
        0 => Status::Incompatible,
        1 => {
            let t = found.into_iter().next().expect("one displayer");
            match undistinguished(q, &t).first() {
                None => Status::Defines(t),
                Some(&e) => {
                    let coarser = t.contract(e)?;
                    Status::NotDefinitive {
                        displayer_count: None,
                        displayers: vec![t, coarser],
                    }
                }
            }
        }
        _ => Status::NotDefinitive {
            displayer_count: None,
            displayers: found,
        },
    })
}

fn displays_raw(splits: &[Split], q: &Quartet) -> bool {
    let (p1, p2) = (q.pair1_mask(), q.pair2_mask());
    splits.iter().any(|s| s.separates(p1, p2))
}

/// Up to `limit` binary displayers of `Q` other than `exclude`, in stream
/// order. Partial trees failing a quartet whose leaves are all present are
/// pruned, which is sound because a tree's restriction displays whatever
/// the full tree displays on those leaves.
pub fn binary_displayers_pruned(
    q: &QuartetSet,
    limit: usize,
    exclude: Option<&PhyloTree>,
) -> Result<Vec<PhyloTree>> {
    let leaves = q.leaves().clone();
    let n = leaves.len();
    if n < 3 {
        return Err(Error::TooFewLeaves { n, min: 3 });
    }
    if let Some(t) = exclude {
        t.check_leaves(&leaves)?;
    }
    let mut by_last_leaf: Vec<Vec<Quartet>> = vec![Vec::new(); n + 1];
    for x in q {
        by_last_leaf[x.max_leaf() + 1].push(*x);
    }
    let mut found = Vec::new();
    if limit == 0 {
        return Ok(found);
    }
    let _ = enumerate::walk(
        n,
        TreeMode::Binary,
        None,
        &mut |k, splits| by_last_leaf[k].iter().all(|x| displays_raw(splits, x)),
        &mut |splits| {
            if exclude.is_some_and(|t| t.splits() == splits) {
                return ControlFlow::Continue(());
            }
            found.push(PhyloTree::from_sorted_unchecked(
                leaves.clone(),
                splits.to_vec(),
            ));
            if found.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    );
    Ok(found)
}

fn undistinguished(q: &QuartetSet, t: &PhyloTree) -> Vec<Split> {
    let hit: Vec<Split> = q.iter().filter_map(|x| t.distinguished_edge(x)).collect();
    t.splits()
        .iter()
        .copied()
        .filter(|s| !hit.contains(s))
        .collect()
}

/// Splits of `T` that no quartet of `Q` distinguishes, ascending.
pub fn undistinguished_edges(q: &QuartetSet, t: &PhyloTree) -> Result<Vec<Split>> {
    t.check_leaves(q.leaves())?;
    Ok(undistinguished(q, t))
}

/// The common-leaf sufficient condition: some leaf lies in every quartet,
/// `T` displays `Q`, `L(Q)` is `T`'s leaf set, and every edge of `T` is
/// distinguished. When it holds, `Q` defines `T`.
pub fn common_leaf_certificate(q: &QuartetSet, t: &PhyloTree) -> Result<bool> {
    t.check_leaves(q.leaves())?;
    Ok(q.common_leaves() != 0
        && q.covers_leaves()
        && t.displays_all(q)
        && undistinguished(q, t).is_empty())
}

/// Whether every phylogenetic tree on `Q`'s leaf set that displays `Q` also
/// displays `query`.
pub fn semantic_infers(q: &QuartetSet, query: &Quartet) -> Result<bool> {
    let n = q.leaves().len();
    if query.max_leaf() >= n {
        return Err(Error::UnknownLeaf(format!("index {}", query.max_leaf())));
    }
    if n > ALL_CAP {
        return Err(Error::TooManyLeaves { n, cap: ALL_CAP });
    }
    if n < 4 {
        return Err(Error::TooFewLeaves { n, min: 4 });
    }
    let quartets: Vec<Quartet> = q.iter().copied().collect();
    Ok(par_fold(
        n,
        TreeMode::All,
        true,
        |ok, splits| {
            if *ok && quartets.iter().all(|x| displays_raw(splits, x)) {
                *ok = displays_raw(splits, query);
            }
        },
        |a, b| a && b,
    ))
}

/// Least superset of `Q` closed under `{ab|de, bc|de} ⊢ ac|de`.
///
/// Quartets are unordered pairs of pairs, so either pair of a quartet may
/// play the role of `de`.
pub fn closure_lemma3(q: &QuartetSet) -> QuartetSet {
    let mut out = q.clone();
    loop {
        let mut groups: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for x in &out {
            groups
                .entry(x.pair1_mask())
                .or_default()
                .push(x.pair2_mask());
            groups
                .entry(x.pair2_mask())
                .or_default()
                .push(x.pair1_mask());
        }
        let mut fresh = Vec::new();
        for (de, others) in &groups {
            for (i, &ab) in others.iter().enumerate() {
                for &bc in &others[i + 1..] {
                    if (ab & bc).count_ones() != 1 {
                        continue;
                    }
                    let ac: Vec<usize> = bits(ab ^ bc).collect();
                    let de: Vec<usize> = bits(*de).collect();
                    let inferred =
                        Quartet::new(ac[0], ac[1], de[0], de[1]).expect("four distinct leaves");
                    if !out.contains(&inferred) && !fresh.contains(&inferred) {
                        fresh.push(inferred);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return out;
        }
        for x in fresh {
            out.insert(x).expect("leaves come from the set");
        }
    }
}

/// Decides definitiveness, then for each `q` whether `Q − q` still defines
/// the tree.
///
/// `Q − q` is judged over the same ambient leaf set as `Q`: if removing `q`
/// drops a leaf from `L(Q − q)` the smaller set cannot define `T` anyway, and
/// the ambient scan exhibits a witness for that.
pub fn minimality_report(q: &QuartetSet, mode: DecideMode) -> Result<MinimalityReport> {
    let verdict = defines(q, mode)?;
    let n = q.leaves().len();
    let size = q.len();
    let Some(t) = verdict.defined_tree().cloned() else {
        return Ok(MinimalityReport {
            n,
            size,
            verdict,
            entries: Vec::new(),
            minimal: false,
            lower_bound_ok: true,
        });
    };
    let mut entries = Vec::with_capacity(size);
    for x in q {
        let rest = q.without(x);
        let witness = witness_for(&rest, &t, mode)?;
        entries.push(ReportEntry {
            quartet: *x,
            witness,
        });
    }
    let minimal = entries.iter().all(|e| e.witness != Witness::Redundant);
    Ok(MinimalityReport {
        n,
        size,
        verdict,
        entries,
        minimal,
        lower_bound_ok: size as i64 >= n as i64 - 3,
    })
}

fn witness_for(rest: &QuartetSet, t: &PhyloTree, mode: DecideMode) -> Result<Witness> {
    match mode {
        DecideMode::Fast => {
            if let Some(&e) = undistinguished(rest, t).first() {
                return Ok(Witness::UndistinguishedEdge(e));
            }
            Ok(binary_displayers_pruned(rest, 1, Some(t))?
                .pop()
                .map_or(Witness::Redundant, Witness::AlternativeTree))
        }
        DecideMode::Oracle => {
            let verdict = defines_over_ambient(rest, DecideMode::Oracle)?;
            if verdict.defined_tree() == Some(t) {
                return Ok(Witness::Redundant);
            }
            if let Some(&e) = undistinguished(rest, t).first() {
                return Ok(Witness::UndistinguishedEdge(e));
            }
            let other = enumerate::enumerate_trees(rest.leaves().clone(), TreeMode::All)?
                .find(|u| u != t && u.displays_all(rest))
                .expect("oracle found a second displayer");
            Ok(Witness::AlternativeTree(other))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::LeafSet;

    fn set(n: usize, quartets: &[&str]) -> QuartetSet {
        let leaves = Arc::new(LeafSet::numbered(n).unwrap());
        QuartetSet::parse_all(leaves, quartets.iter().copied()).unwrap()
    }

    fn caterpillar_order(order: &[usize]) -> PhyloTree {
        let n = order.len();
        let leaves = Arc::new(LeafSet::numbered(n).unwrap());
        let sides = (2..n - 1).map(|k| order[..k].iter().fold(0u64, |m, &l| m | 1 << (l - 1)));
        PhyloTree::from_sides(leaves, sides).unwrap()
    }

    #[test]
    fn shared_pair_has_four_displayers() {
        let q = set(5, &["1,2|3,4", "1,2|3,5"]);
        assert_eq!(displayers(&q, TreeMode::All, None).unwrap().len(), 4);
        assert_eq!(displayers(&q, TreeMode::All, Some(2)).unwrap().len(), 2);
        let v = defines(&q, DecideMode::Oracle).unwrap();
        match &v.status {
            Status::NotDefinitive {
                displayer_count,
                displayers,
            } => {
                assert_eq!(*displayer_count, Some(4));
                assert_eq!(displayers.len(), 2);
                assert_ne!(displayers[0], displayers[1]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(v.agrees_with(&defines(&q, DecideMode::Fast).unwrap()));
    }

    #[test]
    fn incompatible_pair() {
        let q = set(5, &["1,2|3,4", "1,3|2,4"]);
        assert!(displayers(&q, TreeMode::All, None).unwrap().is_empty());
        let empty = QuartetSet::new(Arc::new(LeafSet::numbered(4).unwrap()));
        assert_eq!(displayers(&empty, TreeMode::All, None).unwrap().len(), 4);
        let q4 = set(4, &["1,2|3,4", "1,3|2,4"]);
        for mode in [DecideMode::Oracle, DecideMode::Fast] {
            assert_eq!(defines(&q4, mode).unwrap().status, Status::Incompatible);
        }
    }

    #[test]
    fn two_quartets_define_a_caterpillar() {
        let q = set(5, &["1,2|3,4", "1,4|3,5"]);
        let expected = caterpillar_order(&[1, 2, 4, 3, 5]);
        for mode in [DecideMode::Oracle, DecideMode::Fast] {
            assert_eq!(defines(&q, mode).unwrap().defined_tree(), Some(&expected));
        }
    }

    #[test]
    fn ambient_mismatch() {
        let q = set(6, &["1,2|3,4", "1,4|3,5"]);
        assert!(matches!(
            defines(&q, DecideMode::Fast),
            Err(Error::AmbientMismatch {
                covered: 5,
                ambient: 6
            })
        ));
        let v = defines_over_ambient(&q, DecideMode::Fast).unwrap();
        assert!(!v.is_definitive());
    }

    #[test]
    fn minimality_of_the_six_leaf_set() {
        let q = set(6, &["1,2|3,5", "1,3|4,6", "1,2|5,6", "2,4|5,6"]);
        let t6 = caterpillar_order(&[1, 2, 3, 4, 5, 6]);
        for mode in [DecideMode::Fast, DecideMode::Oracle] {
            let r = minimality_report(&q, mode).unwrap();
            assert_eq!(r.verdict.defined_tree(), Some(&t6));
            assert!(r.minimal);
            assert!(r.lower_bound_ok);
            let kinds: Vec<_> = r.entries.iter().map(|e| e.witness.kind()).collect();
            assert_eq!(
                kinds,
                [
                    "undistinguished_edge",
                    "undistinguished_edge",
                    "alternative_tree",
                    "undistinguished_edge"
                ]
            );
        }
    }

    #[test]
    fn redundant_quartet_is_reported() {
        let q = set(5, &["1,2|3,4", "1,4|3,5", "1,2|3,5"]);
        let r = minimality_report(&q, DecideMode::Fast).unwrap();
        assert!(!r.minimal);
        assert_eq!(r.entries[2].witness, Witness::Redundant);
        assert_ne!(r.entries[0].witness, Witness::Redundant);
        assert_ne!(r.entries[1].witness, Witness::Redundant);
    }

    #[test]
    fn non_definitive_report_has_no_entries() {
        let q = set(5, &["1,2|3,4", "1,2|3,5"]);
        let r = minimality_report(&q, DecideMode::Fast).unwrap();
        assert!(!r.verdict.is_definitive());
        assert!(r.entries.is_empty());
        assert!(!r.minimal);
    }

    #[test]
    fn closure_examples() {
        let q6 = set(6, &["1,2|3,5", "1,3|4,6", "1,2|5,6", "2,4|5,6"]);
        let c = closure_lemma3(&q6);
        let leaves = q6.leaves();
        assert!(c.contains(&leaves.parse_quartet("1,4|5,6").unwrap()));
        // {35|12, 56|12} ⊢ 36|12 is the same rule with de = 12
        assert!(c.contains(&leaves.parse_quartet("1,2|3,6").unwrap()));
        assert_eq!(c.len(), 6);

        let single = set(4, &["1,2|3,4"]);
        assert_eq!(closure_lemma3(&single), single);
    }

    #[test]
    fn certificates_and_undistinguished_edges() {
        let t6 = caterpillar_order(&[1, 2, 3, 4, 5, 6]);
        let ladder = set(6, &["1,2|3,5", "1,3|4,6", "1,4|5,6"]);
        assert!(common_leaf_certificate(&ladder, &t6).unwrap());
        let q6 = set(6, &["1,2|3,5", "1,3|4,6", "1,2|5,6", "2,4|5,6"]);
        assert!(!common_leaf_certificate(&q6, &t6).unwrap());
        assert!(undistinguished_edges(&q6, &t6).unwrap().is_empty());

        let without = q6.without(&q6.get(0).unwrap());
        let und = undistinguished_edges(&without, &t6).unwrap();
        assert_eq!(
            und.iter()
                .map(|s| s.render(t6.leaves()))
                .collect::<Vec<_>>(),
            ["1,2|3,4,5,6"]
        );
        let empty = QuartetSet::new(t6.leaves().clone());
        assert_eq!(undistinguished_edges(&empty, &t6).unwrap().len(), 3);

        let quartet_tree = caterpillar_order(&[1, 2, 3, 4]);
        assert!(common_leaf_certificate(&set(4, &["1,2|3,4"]), &quartet_tree).unwrap());
    }

    #[test]
    fn semantic_inference() {
        let leaves = Arc::new(LeafSet::new(["1", "2", "4", "5", "6"]).unwrap());
        let q = QuartetSet::parse_all(leaves.clone(), ["1,2|5,6", "2,4|5,6"]).unwrap();
        assert!(semantic_infers(&q, &leaves.parse_quartet("1,4|5,6").unwrap()).unwrap());
        assert!(!semantic_infers(&q, &leaves.parse_quartet("1,5|4,6").unwrap()).unwrap());
        for x in &q {
            assert!(semantic_infers(&q, x).unwrap());
        }
    }
}
