//! Isomorphism-invariant codes for monotone double forests.
//!
//! In a `≤₁`-tree a node's `≤₂`-predecessor is one of its `≤₁`-ancestors,
//! and an ancestor is determined by its depth. So a double tree is a rooted
//! tree whose nodes carry `(δ, depth of the ≤₂-predecessor)`, and the usual
//! sorted-children encoding of labeled rooted trees decides isomorphism.

use std::fmt;

use super::{DoubleForest, NodeId};

/// Equal codes iff the forests are isomorphic, labels included.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_form(t: &DoubleForest) -> CanonicalCode {
    let codes = subtree_codes(t);
    let mut trees: Vec<&str> = t.roots().into_iter().map(|r| codes[r].as_str()).collect();
    trees.sort();
    CanonicalCode(trees.concat())
}

/// Code of the subtree above every node, with `≤₂`-predecessors outside
/// the subtree recorded by their depth from the forest root. Two siblings
/// with equal codes can be swapped by an automorphism.
pub(crate) fn subtree_codes(t: &DoubleForest) -> Vec<String> {
    let children = t.children();
    let mut codes = vec![String::new(); t.len()];
    for r in t.roots() {
        let mut path = Vec::new();
        fill(t, &children, r, &mut path, &mut codes);
    }
    codes
}

fn fill(t: &DoubleForest, children: &[Vec<NodeId>], x: NodeId, path: &mut Vec<NodeId>, codes: &mut [String]) {
    path.push(x);
    for &c in &children[x] {
        fill(t, children, c, path, codes);
    }
    path.pop();
    let pred = match t.le2_pred(x) {
        Some(p) => path.iter().position(|&a| a == p).expect("≤₂-predecessor is a ≤₁-ancestor").to_string(),
        None => "-".to_string(),
    };
    let mut subs: Vec<&str> = children[x].iter().map(|&c| codes[c].as_str()).collect();
    subs.sort();
    codes[x] = format!("({},{}{})", t.delta(x), pred, subs.concat());
}
