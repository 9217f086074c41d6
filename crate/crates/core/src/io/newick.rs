//! Topology-only Newick.
//!
//! Parsing reads the rooted nesting, ignores edge lengths, rejects interior
//! labels and suppresses degree-2 vertices (a bifurcating root included).
//! Serialization roots the tree at the interior vertex next to the smallest
//! leaf and orders children by their smallest descendant, so each unrooted
//! tree has exactly one rendering.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{bits, LeafMask, LeafSet, PhyloTree};

enum Node {
    Leaf(String),
    Inner(Vec<Node>),
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn label(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "(),:;[]'".contains(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    /// Skips an optional `:length`.
    fn length(&mut self) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(':') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let value = self.label();
            if value.parse::<f64>().is_err() {
                self.pos = start;
                return Err(self.error(format!("bad edge length `{value}`")));
            }
        }
        Ok(())
    }

    fn node(&mut self) -> Result<Node> {
        self.skip_ws();
        let node = if self.peek() == Some('(') {
            self.pos += 1;
            let mut children = vec![self.node()?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(',') => {
                        self.pos += 1;
                        children.push(self.node()?);
                    }
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return Err(self.error(format!("expected `,` or `)`, found `{c}`"))),
                    None => return Err(self.error("unexpected end of input")),
                }
            }
            self.skip_ws();
            let at = self.pos;
            if !self.label().is_empty() {
                return Err(Error::InteriorLabel(at));
            }
            Node::Inner(children)
        } else {
            let label = self.label();
            if label.is_empty() {
                return Err(match self.peek() {
                    Some(c) => self.error(format!("expected a leaf label, found `{c}`")),
                    None => self.error("unexpected end of input"),
                });
            }
            Node::Leaf(label.to_string())
        };
        self.length()?;
        Ok(node)
    }
}

fn collect_labels<'n>(node: &'n Node, out: &mut Vec<&'n str>) {
    match node {
        Node::Leaf(l) => out.push(l),
        Node::Inner(children) => children.iter().for_each(|c| collect_labels(c, out)),
    }
}

fn clusters(node: &Node, leaves: &LeafSet, out: &mut Vec<LeafMask>) -> Result<LeafMask> {
    match node {
        Node::Leaf(l) => Ok(1 << leaves.index_of(l)?),
        Node::Inner(children) => {
            let mut mask = 0;
            for c in children {
                mask |= clusters(c, leaves, out)?;
            }
            out.push(mask);
            Ok(mask)
        }
    }
}

/// Parses a Newick string into an unrooted tree over its own leaf labels.
pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut p = Parser { text, pos: 0 };
    let root = p.node()?;
    p.skip_ws();
    if p.peek() != Some(';') {
        return Err(p.error("expected `;`"));
    }
    p.pos += 1;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input after `;`"));
    }
    let mut labels = Vec::new();
    collect_labels(&root, &mut labels);
    let leaves = Arc::new(LeafSet::new(labels)?);
    let mut sides = Vec::new();
    clusters(&root, &leaves, &mut sides)?;
    // a rooted cluster is a split side unless it is (nearly) everything or
    // (nearly) nothing; duplicates from suppressed vertices are merged
    PhyloTree::from_sides(leaves, sides)
}

/// Canonical Newick for `t` (at least three leaves).
pub fn serialize_newick(t: &PhyloTree) -> Result<String> {
    let n = t.n();
    if n < 3 {
        return Err(Error::TooFewLeaves { n, min: 3 });
    }
    let leaves = t.leaves();
    // clusters below the root vertex: every split side avoiding leaf 0, plus
    // singletons for the other leaves
    let mut nodes: Vec<LeafMask> = t.splits().iter().map(|s| s.side()).collect();
    nodes.extend((1..n).map(|i| 1u64 << i));
    let root = leaves.full_mask() & !1;
    let mut out = String::from("(");
    out.push_str(leaves.label(0));
    for child in children_of(root, &nodes) {
        out.push(',');
        render(child, &nodes, leaves, &mut out);
    }
    out.push_str(");");
    Ok(out)
}

/// Maximal clusters strictly inside `parent`, by smallest member.
fn children_of(parent: LeafMask, nodes: &[LeafMask]) -> Vec<LeafMask> {
    let inside: Vec<LeafMask> = nodes
        .iter()
        .copied()
        .filter(|&c| c & parent == c && c != parent)
        .collect();
    let mut maximal: Vec<LeafMask> = inside
        .iter()
        .copied()
        .filter(|&c| !inside.iter().any(|&d| d != c && d & c == c))
        .collect();
    maximal.sort_by_key(|c| c.trailing_zeros());
    maximal
}

fn render(node: LeafMask, nodes: &[LeafMask], leaves: &LeafSet, out: &mut String) {
    if node.count_ones() == 1 {
        out.push_str(leaves.label(bits(node).next().expect("one bit")));
        return;
    }
    out.push('(');
    for (i, child) in children_of(node, nodes).into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        render(child, nodes, leaves, out);
    }
    out.push(')');
}
