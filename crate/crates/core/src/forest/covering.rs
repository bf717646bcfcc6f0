//! Deciding `S ≼^c T`: is there an injection preserving `≤₁` and `≤₂`
//! forward and never lowering a label?
//!
//! Both relations are closures of link structures, so it is enough to
//! preserve each link: `h(parent(x)) <₁ h(x)` and `h(pred(x)) <₂ h(x)`.
//! Source nodes are assigned in `≤₁`-preorder, so the images of a node's
//! parent and `≤₂`-predecessor are always known when the node is reached.

use super::canonical::subtree_codes;
use super::{DoubleForest, NodeId};

/// A covering witness: `map[x]` is the image of source node `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Covering {
    pub map: Vec<NodeId>,
}

/// Checks a candidate witness against the full relations (not just links).
pub fn is_covering(s: &DoubleForest, t: &DoubleForest, map: &[NodeId]) -> bool {
    if map.len() != s.len() || map.iter().any(|&y| y >= t.len()) {
        return false;
    }
    let mut seen = vec![false; t.len()];
    for &y in map {
        if std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    let (sc, tc) = (s.closure(), t.closure());
    (0..s.len()).all(|a| {
        s.delta(a) <= t.delta(map[a])
            && (0..s.len())
                .all(|b| (!sc.le1(a, b) || tc.le1(map[a], map[b])) && (!sc.le2(a, b) || tc.le2(map[a], map[b])))
    })
}

struct Search<'a> {
    s: &'a DoubleForest,
    /// Source nodes in visiting order.
    order: Vec<NodeId>,
    /// For a node whose previous sibling is interchangeable with it, that
    /// sibling; its image must then get a smaller index.
    twin: Vec<Option<NodeId>>,
    /// Candidate images per source node, filtered by label and subtree size.
    candidates: Vec<Vec<NodeId>>,
    lt1: Vec<bool>,
    lt2: Vec<bool>,
    tn: usize,
    map: Vec<NodeId>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> bool {
        let Some(&x) = self.order.get(i) else {
            return true;
        };
        let parent = self.s.le1_parent(x).map(|p| self.map[p]);
        let pred = self.s.le2_pred(x).map(|q| self.map[q]);
        let floor = self.twin[x].map(|w| self.map[w]);
        for k in 0..self.candidates[x].len() {
            let y = self.candidates[x][k];
            if self.used[y]
                || floor.is_some_and(|f| y <= f)
                || parent.is_some_and(|p| !self.lt1[p * self.tn + y])
                || pred.is_some_and(|q| !self.lt2[q * self.tn + y])
            {
                continue;
            }
            self.used[y] = true;
            self.map[x] = y;
            if self.run(i + 1) {
                return true;
            }
            self.used[y] = false;
        }
        false
    }
}

fn subtree_sizes(t: &DoubleForest) -> Vec<usize> {
    let mut size = vec![1usize; t.len()];
    // Children have no fixed index relation to parents, so go by depth.
    let mut by_depth: Vec<NodeId> = (0..t.len()).collect();
    by_depth.sort_by_key(|&x| std::cmp::Reverse(t.le1_depth(x)));
    for x in by_depth {
        if let Some(p) = t.le1_parent(x) {
            size[p] += size[x];
        }
    }
    size
}

/// Label counts `|{x : δ(x) ≥ k}|` of `s` never exceed those of `t`.
fn labels_fit(s: &DoubleForest, t: &DoubleForest) -> bool {
    let mut sd: Vec<u32> = s.nodes().iter().map(|n| n.delta).collect();
    let mut td: Vec<u32> = t.nodes().iter().map(|n| n.delta).collect();
    sd.sort_unstable_by(|a, b| b.cmp(a));
    td.sort_unstable_by(|a, b| b.cmp(a));
    sd.iter().zip(&td).all(|(a, b)| a <= b)
}

/// Finds a covering of `s` into `t` if one exists.
pub fn covering_exists(s: &DoubleForest, t: &DoubleForest) -> Option<Covering> {
    if s.is_empty() {
        return Some(Covering { map: Vec::new() });
    }
    if s.len() > t.len() || !labels_fit(s, t) || s.m2f_height().ok()? > t.m2f_height().ok()? {
        return None;
    }

    let codes = subtree_codes(s);
    let mut children = s.children();
    for c in &mut children {
        c.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
    }
    let mut roots = s.roots();
    roots.sort_by(|&a, &b| codes[a].cmp(&codes[b]));

    let mut twin = vec![None; s.len()];
    for group in std::iter::once(&roots).chain(children.iter()) {
        for w in group.windows(2) {
            if codes[w[0]] == codes[w[1]] {
                twin[w[1]] = Some(w[0]);
            }
        }
    }

    let mut order = Vec::with_capacity(s.len());
    let mut stack: Vec<NodeId> = roots.iter().rev().copied().collect();
    while let Some(x) = stack.pop() {
        order.push(x);
        stack.extend(children[x].iter().rev());
    }

    let (ssize, tsize) = (subtree_sizes(s), subtree_sizes(t));
    let candidates = (0..s.len())
        .map(|x| (0..t.len()).filter(|&y| s.delta(x) <= t.delta(y) && ssize[x] <= tsize[y]).collect())
        .collect();

    let tc = t.closure();
    let strict = |m: &[bool]| -> Vec<bool> {
        let mut m = m.to_vec();
        for y in 0..t.len() {
            m[y * t.len() + y] = false;
        }
        m
    };
    let mut search = Search {
        s,
        order,
        twin,
        candidates,
        lt1: strict(&tc.le1),
        lt2: strict(&tc.le2),
        tn: t.len(),
        map: vec![usize::MAX; s.len()],
        used: vec![false; t.len()],
    };
    if search.run(0) {
        debug_assert!(is_covering(s, t, &search.map));
        Some(Covering { map: search.map })
    } else {
        None
    }
}

/// Covering of plain rooted trees: only `≤₁` is consulted, labels and `≤₂`
/// are ignored.
pub fn tree_covering_exists(s: &DoubleForest, t: &DoubleForest) -> bool {
    covering_exists(&s.le1_tree(), &t.le1_tree()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Node;

    fn chain(n: usize, le2: bool) -> DoubleForest {
        let nodes = (0..n)
            .map(|i| Node {
                delta: 0,
                le1_parent: i.checked_sub(1),
                le2_pred: if le2 { i.checked_sub(1) } else { None },
            })
            .collect();
        DoubleForest::new(nodes).unwrap()
    }

    fn cherry() -> DoubleForest {
        DoubleForest::new(vec![
            Node::root(0),
            Node { delta: 0, le1_parent: Some(0), le2_pred: None },
            Node { delta: 0, le1_parent: Some(0), le2_pred: None },
        ])
        .unwrap()
    }

    #[test]
    fn singleton_covers_into_anything() {
        let s = DoubleForest::singleton(0);
        for t in [chain(1, false), chain(3, true), cherry()] {
            let w = covering_exists(&s, &t).unwrap();
            assert!(is_covering(&s, &t, &w.map));
        }
        assert!(covering_exists(&DoubleForest::singleton(1), &chain(3, true)).is_none());
    }

    #[test]
    fn le2_edges_must_be_preserved() {
        assert!(covering_exists(&chain(2, true), &chain(2, false)).is_none());
        assert!(covering_exists(&chain(2, false), &chain(2, true)).is_some());
    }

    #[test]
    fn plain_tree_covering() {
        let single = DoubleForest::singleton(0);
        assert!(tree_covering_exists(&single, &single));
        assert!(!tree_covering_exists(&chain(2, false), &single));
        // Incomparable children may land on a chain.
        assert!(tree_covering_exists(&cherry(), &chain(3, false)));
        assert!(!tree_covering_exists(&chain(3, false), &cherry()));
    }

    #[test]
    fn witness_checker_rejects_bad_maps() {
        let c = chain(2, true);
        assert!(is_covering(&c, &c, &[0, 1]));
        assert!(!is_covering(&c, &c, &[1, 0]));
        assert!(!is_covering(&c, &c, &[0, 0]));
        assert!(!is_covering(&c, &c, &[0]));
    }
}
