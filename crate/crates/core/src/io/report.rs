//! JSON shapes for reports. Field names are part of the CLI contract.

use serde::{Deserialize, Serialize};

use crate::construct::TheoremRow;
use crate::decide::{MinimalityReport, Status, Witness};
use crate::error::Result;
use crate::io::newick::serialize_newick;
use crate::search::SearchOutcome;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: usize,
    pub size: usize,
    pub lower_bound: i64,
    pub defines: bool,
    /// `"defines"`, `"not_definitive"` or `"incompatible"`.
    pub status: String,
    pub tree: Option<String>,
    pub minimal: Option<bool>,
    pub entries: Vec<EntryJson>,
    pub mode: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub quartet: String,
    pub witness_kind: String,
    /// Newick for alternative trees, `"a,b|c,d,e"` for edges, null if redundant.
    pub witness: Option<String>,
}

impl ReportJson {
    pub fn from_report(r: &MinimalityReport) -> Result<Self> {
        let leaves = match &r.verdict.status {
            Status::Defines(t) => Some(t.leaves().clone()),
            _ => None,
        };
        let tree = r.verdict.defined_tree().map(serialize_newick).transpose()?;
        let mut entries = Vec::with_capacity(r.entries.len());
        if let Some(leaves) = leaves {
            for e in &r.entries {
                let witness = match &e.witness {
                    Witness::AlternativeTree(t) => Some(serialize_newick(t)?),
                    Witness::UndistinguishedEdge(s) => Some(s.render(&leaves)),
                    Witness::Redundant => None,
                };
                entries.push(EntryJson {
                    quartet: e.quartet.render(&leaves),
                    witness_kind: e.witness.kind().to_string(),
                    witness,
                });
            }
        }
        let status = match r.verdict.status {
            Status::Defines(_) => "defines",
            Status::NotDefinitive { .. } => "not_definitive",
            Status::Incompatible => "incompatible",
        };
        Ok(Self {
            n: r.n,
            size: r.size,
            lower_bound: r.lower_bound(),
            defines: tree.is_some(),
            status: status.to_string(),
            minimal: tree.is_some().then_some(r.minimal),
            tree,
            entries,
            mode: r.verdict.mode.as_str().to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRowJson {
    pub n: usize,
    pub size: usize,
    pub expected_size: usize,
    pub caterpillar_displays: bool,
    pub fast_minimal: bool,
    pub oracle_unique: Option<bool>,
    pub oracle_minimal: Option<bool>,
    pub oracle_trees_scanned: Option<u64>,
    pub witness_chain: Option<bool>,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl From<&TheoremRow> for TheoremRowJson {
    fn from(r: &TheoremRow) -> Self {
        Self {
            n: r.n,
            size: r.size,
            expected_size: r.expected_size,
            caterpillar_displays: r.caterpillar_displays,
            fast_minimal: r.fast_minimal && r.fast_defines_caterpillar,
            oracle_unique: r.oracle.as_ref().map(|o| o.unique_displayer),
            oracle_minimal: r.oracle.as_ref().map(|o| o.minimal),
            oracle_trees_scanned: r.oracle.as_ref().map(|o| o.trees_scanned),
            witness_chain: r.witness_chain,
            passed: r.passed(),
            failures: r.failures.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingJson {
    pub n: usize,
    pub size: usize,
    pub quartets: Vec<String>,
    pub minimal_definitive: bool,
    pub tree: String,
    pub seed: u64,
    pub trial: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchJson {
    pub n: usize,
    pub target_size: usize,
    pub seed: u64,
    pub budget: u64,
    pub trials_run: u64,
    pub findings: Vec<FindingJson>,
}

impl SearchJson {
    pub fn from_outcome(o: &SearchOutcome) -> Result<Self> {
        let findings = o
            .findings
            .iter()
            .map(|f| {
                Ok(FindingJson {
                    n: f.n,
                    size: f.size,
                    quartets: f.quartets.render(),
                    minimal_definitive: f.minimal_definitive,
                    tree: serialize_newick(&f.tree)?,
                    seed: f.seed,
                    trial: f.trial,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            n: o.config.n,
            target_size: o.config.target_size,
            seed: o.config.seed,
            budget: o.config.budget,
            trials_run: o.trials_run,
            findings,
        })
    }
}
