//! Small forests for exhaustive and randomized checks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{canonical_form, CanonicalCode, DoubleForest, Node, NodeId};

/// Which `≤₂` structures to generate on top of a `≤₁`-tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `≤₂` discrete: plain rooted trees.
    RootedTree,
    /// `≤₂` also a tree with the same root.
    DoubleTree,
    /// Any double forest structure on a `≤₁`-tree.
    AnyOnTree,
}

/// `≤₂`-predecessor choices for a new node hung under `p`: `p` itself or
/// any strict `≤₂`-predecessor of `p`. Anything else breaks interpolation.
fn le2_options(nodes: &[Node], p: NodeId) -> Vec<NodeId> {
    let mut out = vec![p];
    let mut cur = nodes[p].le2_pred;
    while let Some(q) = cur {
        out.push(q);
        cur = nodes[q].le2_pred;
    }
    out
}

/// All unlabeled structures of the given shape with exactly `n` nodes, one
/// per isomorphism class, ordered by canonical code.
pub fn all_of_size(n: usize, shape: Shape) -> Vec<DoubleForest> {
    if n == 0 {
        return Vec::new();
    }
    let mut found = BTreeMap::new();
    let mut nodes = vec![Node::root(0)];
    grow(&mut nodes, n, shape, &mut found);
    found.into_values().collect()
}

/// All structures with `1..=max_nodes` nodes, smallest first.
pub fn all_up_to(max_nodes: usize, shape: Shape) -> Vec<DoubleForest> {
    (1..=max_nodes).flat_map(|n| all_of_size(n, shape)).collect()
}

fn grow(nodes: &mut Vec<Node>, n: usize, shape: Shape, found: &mut BTreeMap<CanonicalCode, DoubleForest>) {
    if nodes.len() == n {
        let f = DoubleForest::from_nodes_unchecked(nodes.clone());
        found.entry(canonical_form(&f)).or_insert(f);
        return;
    }
    for p in 0..nodes.len() {
        let mut preds: Vec<Option<NodeId>> = match shape {
            Shape::RootedTree => vec![None],
            Shape::DoubleTree | Shape::AnyOnTree => le2_options(nodes, p).into_iter().map(Some).collect(),
        };
        if shape == Shape::AnyOnTree {
            preds.push(None);
        }
        for pred in preds {
            nodes.push(Node { delta: 0, le1_parent: Some(p), le2_pred: pred });
            grow(nodes, n, shape, found);
            nodes.pop();
        }
    }
}

/// A random monotone double forest with `1..=max_nodes` nodes and labels
/// `≤ max_delta`. With `tree`, there is a single `≤₁`-root. Node ids are
/// shuffled so that parents need not precede children.
pub fn random_m2f(rng: &mut impl Rng, max_nodes: usize, max_delta: u32, tree: bool) -> DoubleForest {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    for i in 0..n {
        let parent = if i == 0 || (!tree && rng.gen_bool(0.25)) { None } else { Some(rng.gen_range(0..i)) };
        let node = match parent {
            None => Node::root(rng.gen_range(0..=max_delta)),
            Some(p) => {
                let pred = if rng.gen_bool(0.5) {
                    let opts = le2_options(&nodes, p);
                    Some(opts[rng.gen_range(0..opts.len())])
                } else {
                    None
                };
                let delta = match pred {
                    Some(q) => nodes[q].delta,
                    None => rng.gen_range(0..=nodes[p].delta),
                };
                Node { delta, le1_parent: Some(p), le2_pred: pred }
            }
        };
        nodes.push(node);
    }
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(rng);
    let mut shuffled = vec![Node::root(0); n];
    for (old, node) in nodes.into_iter().enumerate() {
        shuffled[perm[old]] = Node {
            delta: node.delta,
            le1_parent: node.le1_parent.map(|p| perm[p]),
            le2_pred: node.le2_pred.map(|q| perm[q]),
        };
    }
    DoubleForest::from_nodes_unchecked(shuffled)
}
