//! Caterpillars, the `2n − 8` quartet family, and the witness trees showing
//! each member of the family is minimally definitive.

use std::sync::Arc;

use rayon::prelude::*;

use crate::decide::{self, DecideMode, Witness};
use crate::enumerate::{self, TreeMode, ALL_CAP};
use crate::error::{Error, Result};
use crate::model::{LeafSet, PhyloTree, Quartet, QuartetSet, Relabeling, MAX_LEAVES};

type Labels = (usize, usize, usize, usize);

/// The caterpillar on leaves `1..n`: cherry `{1,2}` at one end, cherry
/// `{n−1,n}` at the other, leaves `3..n−2` pendant along the spine.
pub fn caterpillar(n: usize) -> Result<PhyloTree> {
    if n < 4 {
        return Err(Error::TooFewLeaves { n, min: 4 });
    }
    let order: Vec<usize> = (1..=n).collect();
    caterpillar_with_order(&order)
}

/// Caterpillar reading the leaves `order[0], order[1], …` along the spine.
pub fn caterpillar_with_order(order: &[usize]) -> Result<PhyloTree> {
    let n = order.len();
    if n < 4 {
        return Err(Error::TooFewLeaves { n, min: 4 });
    }
    let leaves = Arc::new(LeafSet::numbered(n)?);
    let mut side = 0u64;
    let mut sides = Vec::with_capacity(n - 3);
    for (k, &leaf) in order.iter().enumerate().take(n - 2) {
        if leaf == 0 || leaf > n {
            return Err(Error::UnknownLeaf(leaf.to_string()));
        }
        side |= 1 << (leaf - 1);
        if k >= 1 {
            sides.push(side);
        }
    }
    PhyloTree::from_sides(leaves, sides)
}

/// The quartets `q_{n,1}, …, q_{n,2n−8}` as label tuples, in order.
fn family_labels(n: usize) -> Result<Vec<Labels>> {
    match n {
        0..=4 => Err(Error::TooFewLeaves { n, min: 5 }),
        5 => Ok(vec![(1, 2, 3, 4), (1, 3, 4, 5)]),
        6 => Ok(vec![(1, 2, 3, 5), (1, 3, 4, 6), (1, 2, 5, 6), (2, 4, 5, 6)]),
        k => {
            let mut q = family_labels(k - 1)?;
            let bump = |l: usize| if l == k - 1 { k } else { l };
            // indices 2k−11 and 2k−10 (1-based) are the last two of the previous set
            let len = q.len();
            for t in &mut q[len - 2..] {
                *t = (bump(t.0), bump(t.1), bump(t.2), bump(t.3));
            }
            q.push((1, k - 4, k - 1, k));
            q.push((k - 4, k - 2, k - 1, k));
            Ok(q)
        }
    }
}

/// `Q_n` in its construction order, so `quartets[i − 1]` is `q_{n,i}`.
pub fn construct_indexed(n: usize) -> Result<Vec<Quartet>> {
    if n > MAX_LEAVES {
        return Err(Error::TooManyLeaves { n, cap: MAX_LEAVES });
    }
    family_labels(n)?
        .into_iter()
        .map(|(a, b, c, d)| Quartet::new(a - 1, b - 1, c - 1, d - 1))
        .collect()
}

/// The minimal definitive set of size `2n − 8` for `caterpillar(n)`.
pub fn construct_qn(n: usize) -> Result<QuartetSet> {
    let quartets = construct_indexed(n)?;
    QuartetSet::from_quartets(Arc::new(LeafSet::numbered(n)?), quartets)
}

/// Trees `T_{k,i} ≠ T_k` displaying `Q_k − q_{k,i}` for every `i`.
#[derive(Clone, Debug)]
pub struct WitnessChain {
    pub k: usize,
    pub quartets: QuartetSet,
    /// `witnesses[i − 1]` is the witness for `q_{k,i}`.
    pub witnesses: Vec<PhyloTree>,
}

impl WitnessChain {
    pub fn witness(&self, i: usize) -> Option<&PhyloTree> {
        i.checked_sub(1).and_then(|j| self.witnesses.get(j))
    }
}

/// Builds the witness chain recursively from `k = 6`.
///
/// At the base, `q_{6,3} = 12|56` gets the caterpillar `2,4,6,1,5,3` and the
/// other three get the contraction of their undistinguished edge. Each step
/// to `k` grows witnesses `1..=2k−10` by the cherry `{k−1, k}`, reverses
/// witness 3 for index `2k−9`, and contracts an undistinguished edge for
/// index `2k−8`. Every witness is re-checked.
pub fn witness_chain(k: usize) -> Result<WitnessChain> {
    if k < 6 {
        return Err(Error::TooFewLeaves { n: k, min: 6 });
    }
    if k > MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n: k,
            cap: MAX_LEAVES,
        });
    }
    let mut chain = base_chain()?;
    for level in 7..=k {
        chain = grow_chain(&chain, level)?;
    }
    Ok(chain)
}

fn base_chain() -> Result<WitnessChain> {
    let quartets = construct_qn(6)?;
    let target = caterpillar(6)?;
    let mut witnesses = Vec::with_capacity(4);
    for i in 1..=4 {
        witnesses.push(if i == 3 {
            caterpillar_with_order(&[2, 4, 6, 1, 5, 3])?
        } else {
            contraction_witness(&quartets, &target, 6, i)?
        });
    }
    validate(6, &quartets, &target, &witnesses)?;
    Ok(WitnessChain {
        k: 6,
        quartets,
        witnesses,
    })
}

fn grow_chain(prev: &WitnessChain, k: usize) -> Result<WitnessChain> {
    let quartets = construct_qn(k)?;
    let target = caterpillar(k)?;
    let (old, new) = ((k - 1).to_string(), k.to_string());
    let mut witnesses = prev
        .witnesses
        .iter()
        .map(|w| w.cherry_replace(&old, &new))
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(witnesses.len(), 2 * k - 10);
    witnesses.push(witnesses[2].reversed()?);
    witnesses.push(contraction_witness(&quartets, &target, k, 2 * k - 8)?);
    validate(k, &quartets, &target, &witnesses)?;
    Ok(WitnessChain {
        k,
        quartets,
        witnesses,
    })
}

fn contraction_witness(
    quartets: &QuartetSet,
    target: &PhyloTree,
    k: usize,
    i: usize,
) -> Result<PhyloTree> {
    let q = quartets.get(i - 1).expect("index within family");
    let rest = quartets.without(&q);
    let edge = decide::undistinguished_edges(&rest, target)?
        .first()
        .copied()
        .ok_or_else(|| Error::WitnessCheckFailed {
            k,
            i,
            reason: "no undistinguished edge to contract".into(),
        })?;
    target.contract(edge)
}

fn validate(
    k: usize,
    quartets: &QuartetSet,
    target: &PhyloTree,
    witnesses: &[PhyloTree],
) -> Result<()> {
    if witnesses.len() != quartets.len() {
        return Err(Error::WitnessCheckFailed {
            k,
            i: witnesses.len(),
            reason: format!(
                "{} witnesses for {} quartets",
                witnesses.len(),
                quartets.len()
            ),
        });
    }
    for (j, w) in witnesses.iter().enumerate() {
        let fail = |reason: String| Error::WitnessCheckFailed {
            k,
            i: j + 1,
            reason,
        };
        let q = quartets.get(j).expect("same length");
        if w == target {
            return Err(fail("witness equals the caterpillar".into()));
        }
        let rest = quartets.without(&q);
        if !w.displays_set(&rest)? {
            return Err(fail(format!(
                "witness does not display Q minus {}",
                q.render(quartets.leaves())
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCheck {
    /// `T_n` is the only phylogenetic tree displaying `Q_n`.
    pub unique_displayer: bool,
    pub minimal: bool,
    pub trees_scanned: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremRow {
    pub n: usize,
    pub size: usize,
    pub expected_size: usize,
    pub caterpillar_displays: bool,
    pub fast_defines_caterpillar: bool,
    pub fast_minimal: bool,
    pub oracle: Option<OracleCheck>,
    /// `None` below six leaves, where no chain is built.
    pub witness_chain: Option<bool>,
    pub failures: Vec<String>,
}

impl TheoremRow {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the `2n − 8` family for every `n` in `5..=k_max`; the oracle runs
/// for `n ≤ oracle_max_n` (clamped to the all-trees cap).
pub fn verify_theorem(k_max: usize, oracle_max_n: usize) -> Result<Vec<TheoremRow>> {
    if k_max < 5 {
        return Err(Error::TooFewLeaves { n: k_max, min: 5 });
    }
    if k_max > MAX_LEAVES {
        return Err(Error::TooManyLeaves {
            n: k_max,
            cap: MAX_LEAVES,
        });
    }
    let oracle_max = oracle_max_n.min(ALL_CAP);
    Ok((5..=k_max)
        .into_par_iter()
        .map(|n| verify_one(n, n <= oracle_max))
        .collect())
}

fn verify_one(n: usize, with_oracle: bool) -> TheoremRow {
    let mut row = TheoremRow {
        n,
        size: 0,
        expected_size: 2 * n - 8,
        caterpillar_displays: false,
        fast_defines_caterpillar: false,
        fast_minimal: false,
        oracle: None,
        witness_chain: None,
        failures: Vec::new(),
    };
    if let Err(e) = verify_into(&mut row, with_oracle) {
        row.failures.push(e.to_string());
    }
    row
}

fn verify_into(row: &mut TheoremRow, with_oracle: bool) -> Result<()> {
    let n = row.n;
    let q = construct_qn(n)?;
    let target = caterpillar(n)?;
    row.size = q.len();
    if row.size != row.expected_size {
        row.failures
            .push(format!("size {} != 2n-8 = {}", row.size, row.expected_size));
    }
    row.caterpillar_displays = target.displays_set(&q)?;
    if !row.caterpillar_displays {
        row.failures.push("caterpillar does not display Q_n".into());
    }

    let fast = decide::minimality_report(&q, DecideMode::Fast)?;
    row.fast_defines_caterpillar = fast.verdict.defined_tree() == Some(&target);
    row.fast_minimal = fast.minimal;
    if !row.fast_defines_caterpillar {
        row.failures
            .push("fast decider: Q_n does not define T_n".into());
    }
    if !row.fast_minimal {
        row.failures.push("fast decider: Q_n is not minimal".into());
    }
    check_witnesses(&q, &target, &fast.entries, &mut row.failures);

    if with_oracle {
        let report = decide::minimality_report(&q, DecideMode::Oracle)?;
        let check = OracleCheck {
            unique_displayer: report.verdict.defined_tree() == Some(&target),
            minimal: report.minimal,
            trees_scanned: enumerate::count_trees(n, TreeMode::All)?,
        };
        if !check.unique_displayer {
            row.failures
                .push("oracle: T_n is not the unique displayer".into());
        }
        if !check.minimal {
            row.failures.push("oracle: Q_n is not minimal".into());
        }
        check_witnesses(&q, &target, &report.entries, &mut row.failures);
        row.oracle = Some(check);
    }

    if n >= 6 {
        match witness_chain(n) {
            Ok(_) => row.witness_chain = Some(true),
            Err(e) => {
                row.witness_chain = Some(false);
                row.failures.push(e.to_string());
            }
        }
    }
    Ok(())
}

fn check_witnesses(
    q: &QuartetSet,
    target: &PhyloTree,
    entries: &[decide::ReportEntry],
    failures: &mut Vec<String>,
) {
    for e in entries {
        let rest = q.without(&e.quartet);
        let ok = match &e.witness {
            Witness::AlternativeTree(t) => t != target && t.displays_all(&rest),
            Witness::UndistinguishedEdge(s) => {
                target.has_split(*s)
                    && rest
                        .iter()
                        .all(|x| target.distinguished_edge(x) != Some(*s))
            }
            Witness::Redundant => true,
        };
        if !ok {
            failures.push(format!(
                "invalid witness for {}",
                e.quartet.render(q.leaves())
            ));
        }
    }
}

/// The reversal `j ↦ k + 1 − j` on `Q_k`'s leaves.
pub fn reversal(k: usize) -> Result<Relabeling> {
    Relabeling::reversal(Arc::new(LeafSet::numbered(k)?))
}
