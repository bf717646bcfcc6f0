//! Collapsing operations on monotone double trees and the map `T(a)` from
//! principal ordinal terms to monotone double trees.
//!
//! Every constructor puts its new root at node 0 and then lays the input
//! components out one after another in argument order, so equal inputs
//! always produce identical outputs, node numbering included.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::forest::{DoubleForest, ForestError, Node, NodeId};
use crate::ot::in_ot_restricted;
use crate::term::{OrderIndex, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollapseError {
    #[error("empty sequence")]
    Empty,
    #[error("component {index} is not a tree")]
    NotATree { index: usize },
    #[error("component {index} has order {found}, above its predecessor's {previous}")]
    NotDescending { index: usize, previous: u32, found: u32 },
    #[error("component {index} has order {found}, expected {expected}")]
    WrongOrder { index: usize, expected: u32, found: u32 },
    #[error("coll needs components of positive order")]
    OrderZero,
    #[error("component {index} has order {found}, above {bound}")]
    OrderTooHigh { index: usize, bound: u32, found: u32 },
    #[error("{0} is not a principal term")]
    NotPrincipal(Term),
    #[error("{0} is not an ordinal term with finite subscripts")]
    NotInOtOmega(Term),
    #[error("{0} has order {1}, expected 0")]
    NotOrderZero(Term, OrderIndex),
    #[error("0 has no double tree")]
    ZeroTerm,
}

fn tree_order(index: usize, t: &DoubleForest) -> Result<u32, CollapseError> {
    t.order().ok_or(CollapseError::NotATree { index })
}

/// A nonempty sequence of monotone double trees whose orders weakly
/// decrease.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendingSequence(Vec<DoubleForest>);

impl DescendingSequence {
    pub fn new(items: Vec<DoubleForest>) -> Result<Self, CollapseError> {
        if items.is_empty() {
            return Err(CollapseError::Empty);
        }
        let mut previous = u32::MAX;
        for (index, t) in items.iter().enumerate() {
            let found = tree_order(index, t)?;
            if found > previous {
                return Err(CollapseError::NotDescending { index, previous, found });
            }
            previous = found;
        }
        Ok(DescendingSequence(items))
    }

    pub fn items(&self) -> &[DoubleForest] {
        &self.0
    }

    pub fn into_items(self) -> Vec<DoubleForest> {
        self.0
    }
}

fn ord(t: &DoubleForest) -> u32 {
    t.order().expect("component is a tree")
}

/// `coll` on trees already known to have order `u + 1`.
fn coll_raw(u: u32, ts: &[&DoubleForest]) -> DoubleForest {
    let mut nodes = vec![Node::root(u)];
    for t in ts {
        t.graft_into(&mut nodes, Some(0), |n| (n.delta == u + 1).then_some(0), |d| d.min(u));
    }
    DoubleForest::from_nodes_unchecked(nodes)
}

fn exp_raw(u: u32, ts: &[&DoubleForest]) -> DoubleForest {
    let mut nodes = vec![Node::root(u)];
    for t in ts {
        t.graft_into(&mut nodes, Some(0), |_| None, |d| d);
    }
    DoubleForest::from_nodes_unchecked(nodes)
}

/// `Ψ_u` on an order-descending, nonempty sequence of trees.
pub(crate) fn psi_raw(u: u32, ts: &[&DoubleForest]) -> DoubleForest {
    let last = ord(ts[ts.len() - 1]);
    if last > u {
        let i = ts.iter().rposition(|t| ord(t) > u + 1).map_or(0, |p| p + 1);
        if i == 0 {
            return coll_raw(u, ts);
        }
        let head = psi_raw(u + 1, &ts[..i]);
        let mut args = vec![&head];
        args.extend_from_slice(&ts[i..]);
        coll_raw(u, &args)
    } else {
        let i = ts.iter().rposition(|t| ord(t) > u).map_or(0, |p| p + 1);
        if i == 0 {
            return exp_raw(u, ts);
        }
        let head = psi_raw(u, &ts[..i]);
        let mut args = vec![&head];
        args.extend_from_slice(&ts[i..]);
        exp_raw(u, &args)
    }
}

/// Adds a root of label `u` below trees of order `u + 1`. The root is
/// `≤₂`-below exactly the nodes labeled `u + 1`, and all labels are cut
/// down to at most `u`.
pub fn coll(ts: &DescendingSequence) -> Result<DoubleForest, CollapseError> {
    let items = ts.items();
    let top = ord(&items[0]);
    if top == 0 {
        return Err(CollapseError::OrderZero);
    }
    if let Some(index) = items.iter().position(|t| ord(t) != top) {
        return Err(CollapseError::WrongOrder { index, expected: top, found: ord(&items[index]) });
    }
    let refs: Vec<&DoubleForest> = items.iter().collect();
    Ok(coll_raw(top - 1, &refs))
}

/// `exp_u`: a root of label `u` below trees of order at most `u`, with no
/// new `≤₂` relations. The empty list gives a single node.
pub fn exp(u: u32, ts: &[DoubleForest]) -> Result<DoubleForest, CollapseError> {
    for (index, t) in ts.iter().enumerate() {
        let found = tree_order(index, t)?;
        if found > u {
            return Err(CollapseError::OrderTooHigh { index, bound: u, found });
        }
    }
    let refs: Vec<&DoubleForest> = ts.iter().collect();
    Ok(exp_raw(u, &refs))
}

/// `Ψ_u`: collapses an order-descending sequence to a tree of order `u`.
pub fn psi(u: u32, ts: &DescendingSequence) -> DoubleForest {
    let refs: Vec<&DoubleForest> = ts.items().iter().collect();
    psi_raw(u, &refs)
}

/// `ρ`: a new node below everything in both orders. Labels are dropped.
pub fn rho(fs: &[DoubleForest]) -> DoubleForest {
    let mut nodes = vec![Node::root(0)];
    for f in fs {
        f.graft_into(&mut nodes, Some(0), |_| Some(0), |_| 0);
    }
    DoubleForest::from_nodes_unchecked(nodes)
}

/// `T^x`, the part of `t` at or above `x` in `≤₁`.
pub fn substructure_above(t: &DoubleForest, x: NodeId) -> Result<DoubleForest, ForestError> {
    t.substructure_above(x)
}

/// Computes `T(a)` with a cache shared by all calls, including calls from
/// different threads.
#[derive(Debug, Default)]
pub struct Translator {
    memo: Mutex<HashMap<Term, Arc<DoubleForest>>>,
}

impl Translator {
    pub fn new() -> Self {
        Translator::default()
    }

    pub fn translate(&self, a: &Term) -> Result<Arc<DoubleForest>, CollapseError> {
        if !a.is_principal() {
            return Err(CollapseError::NotPrincipal(a.clone()));
        }
        if !in_ot_restricted(a, OrderIndex::Omega) {
            return Err(CollapseError::NotInOtOmega(a.clone()));
        }
        Ok(self.build(a))
    }

    /// `ρ(T(b_1), ..., T(b_k))` for a nonzero `a = (b_1, ..., b_k)` of order 0.
    pub fn translate_sum(&self, a: &Term) -> Result<DoubleForest, CollapseError> {
        if a.is_zero() {
            return Err(CollapseError::ZeroTerm);
        }
        if a.order() != OrderIndex::ZERO {
            return Err(CollapseError::NotOrderZero(a.clone(), a.order()));
        }
        if !in_ot_restricted(a, OrderIndex::Omega) {
            return Err(CollapseError::NotInOtOmega(a.clone()));
        }
        let parts: Vec<DoubleForest> = a.parts().iter().map(|b| (*self.build(b)).clone()).collect();
        Ok(rho(&parts))
    }

    /// Number of cached translations.
    pub fn cached(&self) -> usize {
        self.memo.lock().expect("translation cache poisoned").len()
    }

    fn build(&self, a: &Term) -> Arc<DoubleForest> {
        if let Some(t) = self.memo.lock().expect("translation cache poisoned").get(a) {
            return Arc::clone(t);
        }
        let Term::Principal(OrderIndex::Finite(u), arg) = a else {
            unreachable!("checked principal with finite subscript: {a}")
        };
        let t = if arg.is_zero() {
            DoubleForest::singleton(*u)
        } else {
            let parts: Vec<Arc<DoubleForest>> = arg.parts().iter().map(|b| self.build(b)).collect();
            let refs: Vec<&DoubleForest> = parts.iter().map(|p| p.as_ref()).collect();
            psi_raw(*u, &refs)
        };
        let t = Arc::new(t);
        // Another thread may have raced us here; both values are identical.
        self.memo.lock().expect("translation cache poisoned").entry(a.clone()).or_insert_with(|| Arc::clone(&t));
        t
    }
}

/// `T(a)` for principal `a ∈ OT(ω)`.
pub fn translate(a: &Term) -> Result<DoubleForest, CollapseError> {
    Translator::new().translate(a).map(|t| (*t).clone())
}

/// `ρ(T(b_1), ..., T(b_k))` for nonzero `a = (b_1, ..., b_k) ∈ OT(ω)` of
/// order 0.
pub fn translate_sum(a: &Term) -> Result<DoubleForest, CollapseError> {
    Translator::new().translate_sum(a)
}
