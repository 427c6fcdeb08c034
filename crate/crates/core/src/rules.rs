//! Compression labels on parse trees and the fixed/free decisions they
//! induce on the word choice variables.

use crate::error::{Error, Result};
use crate::parser::ParseTree;
use crate::tokens::TokenSeq;

/// Per-node compression label: 0 delete, 1 keep, 2 solver decides.
pub type CompLabel = u8;

/// Parse tree with one label per node. The root is always 1; every other
/// node carries the rule-vector entry of its parent's production at its
/// child position.
#[derive(Debug, Clone)]
pub struct LabeledTree {
    pub root: LabeledNode,
}

#[derive(Debug, Clone)]
pub struct LabeledNode {
    pub label: String,
    pub comp_label: CompLabel,
    pub leaf_index: Option<usize>,
    pub children: Vec<LabeledNode>,
}

/// Fixing decision per word, 1-based like the choice variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixing {
    FixedOne,
    FixedZero,
    Free,
}

#[derive(Debug, Clone)]
pub struct DeltaFixing {
    entries: Vec<Fixing>,
}

impl DeltaFixing {
    pub fn all_free(n: usize) -> DeltaFixing {
        DeltaFixing {
            entries: vec![Fixing::Free; n],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Decision for word i in 1..=n.
    pub fn get(&self, i: usize) -> Fixing {
        self.entries[i - 1]
    }

    pub fn set(&mut self, i: usize, f: Fixing) {
        self.entries[i - 1] = f;
    }

    pub fn count(&self, f: Fixing) -> usize {
        self.entries.iter().filter(|e| **e == f).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Fixing)> + '_ {
        self.entries.iter().enumerate().map(|(i, f)| (i + 1, *f))
    }
}

/// Propagates rule vectors top-down; the root gets label 1.
pub fn label_tree(tree: &ParseTree) -> Result<LabeledTree> {
    Ok(LabeledTree {
        root: label_node(tree, 1)?,
    })
}

fn label_node(node: &ParseTree, label: CompLabel) -> Result<LabeledNode> {
    if !node.is_leaf() && node.applied_rule.len() != node.children.len() {
        return Err(Error::Grammar(format!(
            "node {} has {} rule labels for {} children",
            node.label,
            node.applied_rule.len(),
            node.children.len()
        )));
    }
    let mut children = Vec::with_capacity(node.children.len());
    for (child, &r) in node.children.iter().zip(&node.applied_rule) {
        children.push(label_node(child, r)?);
    }
    Ok(LabeledNode {
        label: node.label.clone(),
        comp_label: label,
        leaf_index: node.leaf_index,
        children,
    })
}

/// Walks every root-to-leaf path. A 0 anywhere on the path fixes the word to
/// zero; an all-1 path fixes it to one; any 2 (without a 0) leaves it free.
pub fn fix_deltas(lt: &LabeledTree, n: usize) -> DeltaFixing {
    let mut df = DeltaFixing::all_free(n);
    walk(&lt.root, false, false, &mut df);
    df
}

fn walk(node: &LabeledNode, saw_zero: bool, saw_two: bool, df: &mut DeltaFixing) {
    let saw_zero = saw_zero || node.comp_label == 0;
    let saw_two = saw_two || node.comp_label == 2;
    if let Some(pos) = node.leaf_index {
        let f = if saw_zero {
            Fixing::FixedZero
        } else if saw_two {
            Fixing::Free
        } else {
            Fixing::FixedOne
        };
        df.set(pos + 1, f);
    }
    for c in &node.children {
        walk(c, saw_zero, saw_two, df);
    }
}

/// The words fixed to one, in their original order.
pub fn sentence_trunk(df: &DeltaFixing, tokens: &TokenSeq) -> Vec<String> {
    df.iter()
        .filter(|(_, f)| *f == Fixing::FixedOne)
        .map(|(i, _)| tokens.word(i).to_string())
        .collect()
}

/// A preposition phrase or subordinate clause occurrence: the introducing
/// term (first leaf) and the remaining member words, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseSpan {
    pub intro: usize,
    pub members: Vec<usize>,
}

/// Collects one span per PP/SBAR subtree (nested phrases give nested spans).
pub fn phrase_spans(tree: &ParseTree) -> Vec<PhraseSpan> {
    let mut out = Vec::new();
    collect_spans(tree, &mut out);
    out
}

fn collect_spans(node: &ParseTree, out: &mut Vec<PhraseSpan>) {
    if node.label == "PP" || node.label == "SBAR" {
        let mut positions = node.leaf_positions();
        positions.sort_unstable();
        if positions.len() >= 2 {
            out.push(PhraseSpan {
                intro: positions[0] + 1,
                members: positions[1..].iter().map(|p| p + 1).collect(),
            });
        }
    }
    for c in &node.children {
        collect_spans(c, out);
    }
}
