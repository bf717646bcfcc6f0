//! JSON and DOT renderings of forests.
//!
//! JSON: `{"nodes":[{"id":"n0","delta":0,"le1_parent":null,"le2_pred":null}, ...]}`.
//! A missing `delta` reads as 0, which is how unlabeled double forests are
//! written.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DoubleForest, ForestError, Node, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeJson {
    pub id: String,
    #[serde(default)]
    pub delta: u32,
    #[serde(default)]
    pub le1_parent: Option<String>,
    #[serde(default)]
    pub le2_pred: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForestJson {
    pub nodes: Vec<NodeJson>,
}

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed forest JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("duplicate node id {0:?}")]
    DuplicateId(String),
    #[error("node {node:?} refers to unknown node {target:?}")]
    UnknownId { node: String, target: String },
    #[error("{0}")]
    Invalid(String),
}

pub fn node_name(x: NodeId) -> String {
    format!("n{x}")
}

pub fn to_json_value(t: &DoubleForest) -> ForestJson {
    ForestJson {
        nodes: t
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| NodeJson {
                id: node_name(i),
                delta: n.delta,
                le1_parent: n.le1_parent.map(node_name),
                le2_pred: n.le2_pred.map(node_name),
            })
            .collect(),
    }
}

pub fn to_json(t: &DoubleForest) -> String {
    serde_json::to_string(&to_json_value(t)).expect("forest JSON serializes")
}

/// Parses and validates a forest, returning it with the original node ids
/// (indexed by node).
pub fn from_json(text: &str) -> Result<(DoubleForest, Vec<String>), JsonError> {
    let parsed: ForestJson = serde_json::from_str(text)?;
    let mut index = HashMap::new();
    for (i, n) in parsed.nodes.iter().enumerate() {
        if index.insert(n.id.clone(), i).is_some() {
            return Err(JsonError::DuplicateId(n.id.clone()));
        }
    }
    let lookup = |node: &NodeJson, target: &Option<String>| -> Result<Option<NodeId>, JsonError> {
        target
            .as_ref()
            .map(|t| {
                index.get(t).copied().ok_or_else(|| JsonError::UnknownId { node: node.id.clone(), target: t.clone() })
            })
            .transpose()
    };
    let nodes = parsed
        .nodes
        .iter()
        .map(|n| Ok(Node { delta: n.delta, le1_parent: lookup(n, &n.le1_parent)?, le2_pred: lookup(n, &n.le2_pred)? }))
        .collect::<Result<Vec<_>, JsonError>>()?;
    let names: Vec<String> = parsed.nodes.into_iter().map(|n| n.id).collect();
    match DoubleForest::new(nodes) {
        Ok(f) => Ok((f, names)),
        Err(ForestError::Invalid(v)) => Err(JsonError::Invalid(v.describe(|x| names[x].clone()))),
        Err(e) => Err(JsonError::Invalid(e.to_string())),
    }
}

/// Graphviz rendering: solid edges for `≤₁` links, dashed for `≤₂` links,
/// nodes labeled `id:δ`.
pub fn to_dot(t: &DoubleForest, names: Option<&[String]>) -> String {
    let name = |x: NodeId| names.map_or_else(|| node_name(x), |n| n[x].clone());
    let mut out = String::from("digraph forest {\n");
    for (x, n) in t.nodes().iter().enumerate() {
        let _ = writeln!(out, "  \"{}\" [label=\"{}:{}\"];", name(x), name(x), n.delta);
    }
    for (x, n) in t.nodes().iter().enumerate() {
        if let Some(p) = n.le1_parent {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [style=solid];", name(p), name(x));
        }
        if let Some(q) = n.le2_pred {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [style=dashed];", name(q), name(x));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_ids() {
        let text = r#"{"nodes":[{"id":"r","delta":1,"le1_parent":null,"le2_pred":null},
                                {"id":"x","delta":1,"le1_parent":"r","le2_pred":"r"}]}"#;
        let (f, names) = from_json(text).unwrap();
        assert_eq!(names, ["r", "x"]);
        assert_eq!(f.len(), 2);
        let (g, _) = from_json(&to_json(&f)).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn missing_delta_means_zero() {
        let (f, _) = from_json(r#"{"nodes":[{"id":"a"},{"id":"b","le1_parent":"a"}]}"#).unwrap();
        assert!(f.nodes().iter().all(|n| n.delta == 0));
    }

    #[test]
    fn json_errors() {
        assert!(matches!(from_json("{"), Err(JsonError::Syntax(_))));
        assert!(matches!(from_json(r#"{"nodes":[{"id":"a"},{"id":"a"}]}"#), Err(JsonError::DuplicateId(_))));
        assert!(matches!(from_json(r#"{"nodes":[{"id":"a","le1_parent":"zz"}]}"#), Err(JsonError::UnknownId { .. })));
        let err = from_json(r#"{"nodes":[{"id":"a"},{"id":"b","le2_pred":"a"}]}"#).unwrap_err();
        assert_eq!(err.to_string(), "nesting: a ≤₂ b but not a ≤₁ b");
    }

    #[test]
    fn dot_edges() {
        let f =
            DoubleForest::new(vec![Node::root(0), Node { delta: 0, le1_parent: Some(0), le2_pred: Some(0) }]).unwrap();
        let dot = to_dot(&f, None);
        assert_eq!(dot.matches("style=solid").count(), 1);
        assert_eq!(dot.matches("style=dashed").count(), 1);
        assert!(dot.contains("label=\"n1:0\""));
    }
}
