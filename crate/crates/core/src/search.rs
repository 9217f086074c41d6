//! Randomized exploration for large minimal definitive quartet sets.
//!
//! This is a best-effort tool, not a decision procedure. Each trial:
//!
//! 1. draws a uniform random binary tree `T` on leaves `1..n`;
//! 2. samples `target_size` of the quartets `T` displays;
//! 3. repairs the sample until it defines `T`, each time adding a displayed
//!    quartet that either distinguishes an undistinguished edge or rules out
//!    a competing binary displayer;
//! 4. drops quartets in random order while the rest still defines `T`, which
//!    leaves a minimal definitive set.
//!
//! Sets of at least `target_size` are re-validated with a full minimality
//! report before being kept. Output depends only on the configuration.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decide::{self, DecideMode};
use crate::enumerate::random_binary_tree;
use crate::error::{Error, Result};
use crate::model::{LeafSet, PhyloTree, Quartet, QuartetSet};

pub const SEARCH_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub target_size: usize,
    pub budget: u64,
    pub seed: u64,
    pub max_findings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchFinding {
    pub n: usize,
    pub quartets: QuartetSet,
    pub size: usize,
    pub tree: PhyloTree,
    pub minimal_definitive: bool,
    pub seed: u64,
    /// 1-based trial that produced the set.
    pub trial: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub findings: Vec<SearchFinding>,
    pub trials_run: u64,
}

pub fn search(config: &SearchConfig) -> Result<SearchOutcome> {
    let n = config.n;
    if n < 4 {
        return Err(Error::TooFewLeaves { n, min: 4 });
    }
    if n > SEARCH_CAP {
        return Err(Error::TooManyLeaves { n, cap: SEARCH_CAP });
    }
    let leaves = Arc::new(LeafSet::numbered(n)?);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seen: HashSet<Vec<Quartet>> = HashSet::new();
    let mut findings = Vec::new();
    let mut trials_run = 0;
    while trials_run < config.budget && findings.len() < config.max_findings {
        trials_run += 1;
        let (tree, set) = trial(&leaves, config.target_size, &mut rng)?;
        if set.len() < config.target_size {
            continue;
        }
        let key = set.sorted();
        if seen.contains(&key) {
            continue;
        }
        let report = decide::minimality_report(&set, DecideMode::Fast)?;
        let minimal_definitive = report.minimal && report.verdict.defined_tree() == Some(&tree);
        if !minimal_definitive {
            continue;
        }
        seen.insert(key.clone());
        findings.push(SearchFinding {
            n,
            size: set.len(),
            quartets: QuartetSet::from_quartets(leaves.clone(), key)?,
            tree,
            minimal_definitive,
            seed: config.seed,
            trial: trials_run,
        });
    }
    Ok(SearchOutcome {
        config: config.clone(),
        findings,
        trials_run,
    })
}

/// Quartets displayed by a binary tree, one per four-leaf subset.
fn displayed_quartets(t: &PhyloTree) -> Vec<Quartet> {
    let n = t.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for q in [
                        Quartet::new(a, b, c, d),
                        Quartet::new(a, c, b, d),
                        Quartet::new(a, d, b, c),
                    ] {
                        let q = q.expect("distinct");
                        if t.displays(&q) {
                            out.push(q);
                        }
                    }
                }
            }
        }
    }
    out
}

fn defines_tree(q: &QuartetSet, t: &PhyloTree) -> Result<bool> {
    Ok(decide::defines_over_ambient(q, DecideMode::Fast)?.defined_tree() == Some(t))
}

fn trial(
    leaves: &Arc<LeafSet>,
    target: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(PhyloTree, QuartetSet)> {
    let tree = random_binary_tree(leaves.clone(), rng)?;
    let mut pool = displayed_quartets(&tree);
    pool.shuffle(rng);
    let mut set = QuartetSet::from_quartets(leaves.clone(), pool.iter().copied().take(target))?;

    loop {
        let open = decide::undistinguished_edges(&set, &tree)?;
        let candidates: Vec<Quartet> = if !open.is_empty() {
            pool.iter()
                .copied()
                .filter(|q| {
                    tree.distinguished_edge(q)
                        .is_some_and(|e| open.contains(&e))
                })
                .collect()
        } else {
            match decide::binary_displayers_pruned(&set, 1, Some(&tree))?.pop() {
                None => break,
                Some(rival) => pool
                    .iter()
                    .copied()
                    .filter(|q| !rival.displays(q))
                    .collect(),
            }
        };
        let pick = *candidates
            .choose(rng)
            .expect("a binary tree's displayed quartets define it");
        set.insert(pick)?;
    }

    let mut order: Vec<Quartet> = set.iter().copied().collect();
    order.shuffle(rng);
    for q in order {
        let rest = set.without(&q);
        if defines_tree(&rest, &tree)? {
            set = rest;
        }
    }
    Ok((tree, set))
}
