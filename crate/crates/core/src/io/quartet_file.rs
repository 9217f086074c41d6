//! Line-oriented quartet files.
//!
//! ```text
//! # comment
//! 1,2|3,5
//! 3,5|1,2   # same quartet, dropped with a warning
//! ```
//!
//! Each non-blank line holds `a,b|c,d`. Labels are non-empty and contain no
//! `,`, `|` or whitespace. `#` starts a comment.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::quartet::split_quartet_text;
use crate::model::{LeafSet, QuartetSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartetFile {
    pub quartets: QuartetSet,
    /// 1-based lines whose quartet repeated an earlier one.
    pub duplicate_lines: Vec<usize>,
}

/// Parses a quartet file; the leaf set is the union of the labels used.
pub fn parse_quartet_file(text: &str) -> Result<QuartetFile> {
    let mut rows: Vec<(usize, [&str; 4])> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let labels = split_quartet_text(body).ok_or_else(|| Error::LineSyntax {
            line,
            message: format!("expected `a,b|c,d`, found `{body}`"),
        })?;
        for (j, l) in labels.iter().enumerate() {
            if labels[j + 1..].contains(l) {
                return Err(Error::DuplicateLeafInQuartet(line));
            }
        }
        rows.push((line, labels));
    }
    let mut names: Vec<&str> = rows.iter().flat_map(|(_, l)| l.iter().copied()).collect();
    names.sort_unstable();
    names.dedup();
    let leaves = Arc::new(LeafSet::new(names)?);
    let mut quartets = QuartetSet::new(leaves.clone());
    let mut duplicate_lines = Vec::new();
    for (line, [a, b, c, d]) in rows {
        if !quartets.insert(leaves.quartet(a, b, c, d)?)? {
            duplicate_lines.push(line);
        }
    }
    Ok(QuartetFile {
        quartets,
        duplicate_lines,
    })
}

/// One normalized quartet per line, in the set's order.
pub fn serialize_quartet_file(q: &QuartetSet) -> String {
    q.render().into_iter().map(|l| l + "\n").collect()
}
