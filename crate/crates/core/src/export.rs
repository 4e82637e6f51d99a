//! Graph output: Graphviz DOT and a JSON node/edge list.

use std::fmt::Write;

use serde::Serialize;

use crate::framework::{ArgumentGraph, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphJson {
    pub nodes: Vec<GraphJsonNode>,
    pub edges: Vec<GraphJsonEdge>,
    pub grounded: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphJsonNode {
    pub id: String,
    pub kind: NodeKind,
    pub scheme: String,
    pub label: String,
    pub grounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphJsonEdge {
    pub from: String,
    pub to: String,
}

pub fn to_json(graph: &ArgumentGraph) -> GraphJson {
    let grounded = graph.grounded();
    GraphJson {
        nodes: graph
            .nodes
            .iter()
            .map(|n| GraphJsonNode {
                id: n.id.clone(),
                kind: n.kind,
                scheme: n.scheme.clone(),
                label: n.label.clone(),
                grounded: grounded.contains(&n.id),
            })
            .collect(),
        edges: graph
            .aaf
            .attacks()
            .map(|(from, to)| GraphJsonEdge {
                from: from.to_string(),
                to: to.to_string(),
            })
            .collect(),
        grounded: grounded.members.into_iter().collect(),
    }
}

fn quote(s: &str) -> String {
    format!(
        "\"{}\"",
        s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
    )
}

/// Arguments are boxes and questions ellipses; grounded members are filled.
pub fn to_dot(graph: &ArgumentGraph) -> String {
    let grounded = graph.grounded();
    let mut out = String::from("digraph aaf {\n  rankdir=LR;\n");
    for node in &graph.nodes {
        let shape = match node.kind {
            NodeKind::Argument => "box",
            NodeKind::Question => "ellipse",
        };
        let fill = if grounded.contains(&node.id) {
            ", style=filled, fillcolor=\"#c6e5c3\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {} [shape={shape}, label={}, tooltip={}{fill}];",
            quote(&node.id),
            quote(&node.id),
            quote(&node.label)
        );
    }
    for (from, to) in graph.aaf.attacks() {
        let _ = writeln!(out, "  {} -> {};", quote(from), quote(to));
    }
    out.push_str("}\n");
    out
}
