//! Double forests and monotone double forests.
//!
//! A [`DoubleForest`] is a finite node set with two forest orders `≤₁ ⊇ ≤₂`
//! and a natural-number label `δ` on every node. Both orders are stored as
//! immediate-predecessor links; the relations themselves are the
//! reflexive-transitive closures of those links. An unlabeled double forest
//! is one whose labels are all zero, so a single type serves both.
//!
//! Axioms checked by [`validate_double_forest`] and [`validate_m2f`]:
//!
//! * both link structures are acyclic (hence forests),
//! * nesting: `a ≤₂ b ⟹ a ≤₁ b`,
//! * interpolation: `a ≤₁ b ≤₁ c` and `a ≤₂ c` imply `a ≤₂ b`,
//! * labels weakly decrease along `≤₁` and are constant along `≤₂`.

mod canonical;
mod covering;
pub mod generate;
mod io;

pub use canonical::{canonical_form, CanonicalCode};
pub use covering::{covering_exists, is_covering, tree_covering_exists, Covering};
pub use io::{from_json, to_dot, to_json, to_json_value, ForestJson, JsonError, NodeJson};

use thiserror::Error;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub delta: u32,
    pub le1_parent: Option<NodeId>,
    pub le2_pred: Option<NodeId>,
}

impl Node {
    pub fn root(delta: u32) -> Node {
        Node { delta, le1_parent: None, le2_pred: None }
    }
}

/// A violated axiom together with the nodes that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("node {node} links to missing node {target}")]
    Dangling { node: NodeId, target: NodeId },
    #[error("≤₁ links form a cycle through node {node}")]
    Le1Cycle { node: NodeId },
    #[error("≤₂ links form a cycle through node {node}")]
    Le2Cycle { node: NodeId },
    #[error("nesting: {a} ≤₂ {b} but not {a} ≤₁ {b}")]
    Nesting { a: NodeId, b: NodeId },
    #[error("interpolation: {a} ≤₁ {b} ≤₁ {c} and {a} ≤₂ {c} but not {a} ≤₂ {b}")]
    Interpolation { a: NodeId, b: NodeId, c: NodeId },
    #[error("descending: {x} ≤₁ {y} but δ({x}) < δ({y})")]
    Descending { x: NodeId, y: NodeId },
    #[error("constant-on-le2: {x} ≤₂ {y} but δ({x}) ≠ δ({y})")]
    ConstantOnLe2 { x: NodeId, y: NodeId },
}

impl Violation {
    /// Short axiom name, stable for reports.
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Dangling { .. } => "dangling",
            Violation::Le1Cycle { .. } | Violation::Le2Cycle { .. } => "forest",
            Violation::Nesting { .. } => "nesting",
            Violation::Interpolation { .. } => "interpolation",
            Violation::Descending { .. } => "descending",
            Violation::ConstantOnLe2 { .. } => "constant-on-le2",
        }
    }

    /// Renders the violation with node names supplied by the caller.
    pub fn describe(&self, name: impl Fn(NodeId) -> String) -> String {
        let detail = match *self {
            Violation::Dangling { node, target } => format!("node {} links to missing node {target}", name(node)),
            Violation::Le1Cycle { node } => format!("≤₁ links form a cycle through {}", name(node)),
            Violation::Le2Cycle { node } => format!("≤₂ links form a cycle through {}", name(node)),
            Violation::Nesting { a, b } => {
                let (a, b) = (name(a), name(b));
                format!("{a} ≤₂ {b} but not {a} ≤₁ {b}")
            }
            Violation::Interpolation { a, b, c } => {
                let (a, b, c) = (name(a), name(b), name(c));
                format!("{a} ≤₁ {b} ≤₁ {c} and {a} ≤₂ {c} but not {a} ≤₂ {b}")
            }
            Violation::Descending { x, y } => {
                let (x, y) = (name(x), name(y));
                format!("{x} ≤₁ {y} but δ({x}) < δ({y})")
            }
            Violation::ConstantOnLe2 { x, y } => {
                let (x, y) = (name(x), name(y));
                format!("{x} ≤₂ {y} but δ({x}) ≠ δ({y})")
            }
        };
        format!("{}: {detail}", self.axiom())
    }
}

fn check_links(nodes: &[Node]) -> Result<(), Violation> {
    let n = nodes.len();
    for (i, node) in nodes.iter().enumerate() {
        for target in [node.le1_parent, node.le2_pred].into_iter().flatten() {
            if target >= n {
                return Err(Violation::Dangling { node: i, target });
            }
        }
    }
    for i in 0..n {
        if chain(nodes, i, |x| x.le1_parent).count() > n {
            return Err(Violation::Le1Cycle { node: i });
        }
        if chain(nodes, i, |x| x.le2_pred).count() > n {
            return Err(Violation::Le2Cycle { node: i });
        }
    }
    Ok(())
}

/// Strict predecessors of `start` along `link`, nearest first. On a cyclic
/// structure this never ends, so callers bound it.
fn chain<'a>(
    nodes: &'a [Node],
    start: NodeId,
    link: impl Fn(&Node) -> Option<NodeId> + 'a,
) -> impl Iterator<Item = NodeId> + 'a {
    let mut cur = link(&nodes[start]);
    let mut steps = 0usize;
    std::iter::from_fn(move || {
        let here = cur?;
        steps += 1;
        if steps > nodes.len() + 1 {
            return None;
        }
        cur = link(&nodes[here]);
        Some(here)
    })
}

/// Checks the double-forest axioms, ignoring labels.
pub fn validate_double_forest(nodes: &[Node]) -> Result<(), Violation> {
    check_links(nodes)?;
    for c in 0..nodes.len() {
        let le1_below: Vec<NodeId> = chain(nodes, c, |x| x.le1_parent).collect();
        if let Some(p) = nodes[c].le2_pred {
            if !le1_below.contains(&p) {
                return Err(Violation::Nesting { a: p, b: c });
            }
        }
        for a in chain(nodes, c, |x| x.le2_pred) {
            // Every b strictly between a and c along ≤₁ must sit ≤₂-above a.
            for &b in le1_below.iter().take_while(|&&b| b != a) {
                if !chain(nodes, b, |x| x.le2_pred).any(|z| z == a) {
                    return Err(Violation::Interpolation { a, b, c });
                }
            }
        }
    }
    Ok(())
}

/// Checks the double-forest axioms plus both label conditions.
pub fn validate_m2f(nodes: &[Node]) -> Result<(), Violation> {
    validate_double_forest(nodes)?;
    for (y, node) in nodes.iter().enumerate() {
        if let Some(x) = node.le1_parent {
            if nodes[x].delta < node.delta {
                return Err(Violation::Descending { x, y });
            }
        }
        if let Some(x) = node.le2_pred {
            if nodes[x].delta != node.delta {
                return Err(Violation::ConstantOnLe2 { x, y });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("invalid monotone double forest: {0}")]
    Invalid(#[from] Violation),
    #[error("the forest is empty")]
    Empty,
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
}

/// A validated monotone double forest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DoubleForest {
    nodes: Vec<Node>,
}

impl DoubleForest {
    pub fn new(nodes: Vec<Node>) -> Result<Self, ForestError> {
        validate_m2f(&nodes)?;
        Ok(DoubleForest { nodes })
    }

    /// Callers guarantee the axioms; constructions in this crate do.
    pub(crate) fn from_nodes_unchecked(nodes: Vec<Node>) -> Self {
        debug_assert_eq!(validate_m2f(&nodes), Ok(()));
        DoubleForest { nodes }
    }

    pub fn singleton(delta: u32) -> Self {
        DoubleForest { nodes: vec![Node::root(delta)] }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn delta(&self, x: NodeId) -> u32 {
        self.nodes[x].delta
    }

    pub fn le1_parent(&self, x: NodeId) -> Option<NodeId> {
        self.nodes[x].le1_parent
    }

    pub fn le2_pred(&self, x: NodeId) -> Option<NodeId> {
        self.nodes[x].le2_pred
    }

    /// `≤₁`-minimal nodes, in index order.
    pub fn roots(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|&x| self.nodes[x].le1_parent.is_none()).collect()
    }

    /// Immediate `≤₁`-successors of every node, in index order.
    pub fn children(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.len()];
        for (x, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.le1_parent {
                out[p].push(x);
            }
        }
        out
    }

    /// True when `≤₁` has a least element.
    pub fn is_tree(&self) -> bool {
        self.roots().len() == 1
    }

    /// True when both orders have a common least element.
    pub fn is_double_tree(&self) -> bool {
        let roots = self.roots();
        roots.len() == 1 && self.nodes.iter().enumerate().all(|(x, n)| x == roots[0] || n.le2_pred.is_some())
    }

    pub fn root(&self) -> Option<NodeId> {
        match self.roots().as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    /// Label of the root, for trees.
    pub fn order(&self) -> Option<u32> {
        self.root().map(|r| self.delta(r))
    }

    pub fn le1(&self, a: NodeId, b: NodeId) -> bool {
        a == b || chain(&self.nodes, b, |x| x.le1_parent).any(|z| z == a)
    }

    pub fn le2(&self, a: NodeId, b: NodeId) -> bool {
        a == b || chain(&self.nodes, b, |x| x.le2_pred).any(|z| z == a)
    }

    /// Dense matrices of both relations; `le1[a * n + b]` is `a ≤₁ b`.
    pub fn closure(&self) -> Closure {
        let n = self.len();
        let mut le1 = vec![false; n * n];
        let mut le2 = vec![false; n * n];
        for b in 0..n {
            le1[b * n + b] = true;
            le2[b * n + b] = true;
            for a in chain(&self.nodes, b, |x| x.le1_parent) {
                le1[a * n + b] = true;
            }
            for a in chain(&self.nodes, b, |x| x.le2_pred) {
                le2[a * n + b] = true;
            }
        }
        Closure { n, le1, le2 }
    }

    /// Number of strict `≤₂`-predecessors of `x`.
    pub fn le2_depth(&self, x: NodeId) -> usize {
        chain(&self.nodes, x, |n| n.le2_pred).count()
    }

    pub fn le1_depth(&self, x: NodeId) -> usize {
        chain(&self.nodes, x, |n| n.le1_parent).count()
    }

    /// Size of the longest `≤₂`-chain minus one.
    pub fn height(&self) -> Result<usize, ForestError> {
        (0..self.len()).map(|x| self.le2_depth(x)).max().ok_or(ForestError::Empty)
    }

    /// Largest `v + k` such that some `≤₂`-chain of `k + 1` nodes carries
    /// the label `v`.
    pub fn m2f_height(&self) -> Result<usize, ForestError> {
        (0..self.len()).map(|x| self.delta(x) as usize + self.le2_depth(x)).max().ok_or(ForestError::Empty)
    }

    /// `T^x`: the induced substructure on `{y : x ≤₁ y}`. Node `x` becomes
    /// node 0; the rest keep their relative index order.
    pub fn substructure_above(&self, x: NodeId) -> Result<DoubleForest, ForestError> {
        if x >= self.len() {
            return Err(ForestError::UnknownNode(x));
        }
        let mut keep: Vec<NodeId> = vec![x];
        keep.extend((0..self.len()).filter(|&y| y != x && self.le1(x, y)));
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &y) in keep.iter().enumerate() {
            new_id[y] = i;
        }
        let remap = |p: Option<NodeId>| p.and_then(|p| (new_id[p] != usize::MAX).then_some(new_id[p]));
        let nodes = keep
            .iter()
            .map(|&y| Node {
                delta: self.delta(y),
                le1_parent: if y == x { None } else { remap(self.le1_parent(y)) },
                // ≤₂-predecessors of y below x are all outside the set.
                le2_pred: remap(self.le2_pred(y)),
            })
            .collect();
        Ok(DoubleForest::from_nodes_unchecked(nodes))
    }

    /// The same `≤₁` structure with `≤₂` discrete and all labels zero.
    pub fn le1_tree(&self) -> DoubleForest {
        let nodes = self.nodes.iter().map(|n| Node { delta: 0, le1_parent: n.le1_parent, le2_pred: None }).collect();
        DoubleForest::from_nodes_unchecked(nodes)
    }

    /// The same double forest with every label set to zero.
    pub fn unlabeled(&self) -> DoubleForest {
        let nodes = self.nodes.iter().map(|n| Node { delta: 0, ..n.clone() }).collect();
        DoubleForest::from_nodes_unchecked(nodes)
    }

    /// Copies `self` into `nodes`, shifting ids. Roots of `≤₁` are hung
    /// under `le1_root_parent`; nodes without a `≤₂`-predecessor get the
    /// one chosen by `le2_attach` (given the original node). Labels pass
    /// through `relabel`.
    pub(crate) fn graft_into(
        &self,
        nodes: &mut Vec<Node>,
        le1_root_parent: Option<NodeId>,
        le2_attach: impl Fn(&Node) -> Option<NodeId>,
        relabel: impl Fn(u32) -> u32,
    ) -> std::ops::Range<NodeId> {
        let offset = nodes.len();
        for n in &self.nodes {
            nodes.push(Node {
                delta: relabel(n.delta),
                le1_parent: n.le1_parent.map(|p| p + offset).or(le1_root_parent),
                le2_pred: n.le2_pred.map(|p| p + offset).or_else(|| le2_attach(n)),
            });
        }
        offset..nodes.len()
    }
}

/// Dense relation matrices for a forest.
#[derive(Clone, Debug)]
pub struct Closure {
    pub n: usize,
    pub le1: Vec<bool>,
    pub le2: Vec<bool>,
}

impl Closure {
    pub fn le1(&self, a: NodeId, b: NodeId) -> bool {
        self.le1[a * self.n + b]
    }

    pub fn le2(&self, a: NodeId, b: NodeId) -> bool {
        self.le2[a * self.n + b]
    }
}

/// `⊕`: the disjoint union, components laid out in order.
pub fn disjoint_union(ts: &[DoubleForest]) -> DoubleForest {
    let mut nodes = Vec::with_capacity(ts.iter().map(DoubleForest::len).sum());
    for t in ts {
        t.graft_into(&mut nodes, None, |_| None, |d| d);
    }
    DoubleForest::from_nodes_unchecked(nodes)
}
