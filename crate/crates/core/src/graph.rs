//! Labelled directed graphs and their Graphviz rendering.

use std::collections::BTreeSet;
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Empty for an unlabelled edge.
    pub labels: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

impl LabelledGraph {
    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edge(from, to).is_some()
    }

    pub fn edge(&self, from: &str, to: &str) -> Option<&Edge> {
        let f = self.nodes.iter().position(|n| n == from)?;
        let t = self.nodes.iter().position(|n| n == to)?;
        self.edges.iter().find(|e| e.from == f && e.to == t)
    }

    /// Graphviz `digraph`; edge labels are joined by `,`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", quote(name));
        for node in &self.nodes {
            let _ = writeln!(out, "    {};", quote(node));
        }
        for edge in &self.edges {
            let from = quote(&self.nodes[edge.from]);
            let to = quote(&self.nodes[edge.to]);
            if edge.labels.is_empty() {
                let _ = writeln!(out, "    {from} -> {to};");
            } else {
                let label = edge.labels.iter().map(String::as_str).collect::<Vec<_>>().join(",");
                let _ = writeln!(out, "    {from} -> {to} [label={}];", quote(&label));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_output() {
        let g = LabelledGraph {
            nodes: vec!["x".into(), "0".into()],
            edges: vec![
                Edge { from: 0, to: 1, labels: ["0".to_string(), "1".to_string()].into() },
                Edge { from: 1, to: 0, labels: BTreeSet::new() },
            ],
        };
        assert_eq!(
            g.to_dot("dtg"),
            "digraph \"dtg\" {\n    \"x\";\n    \"0\";\n    \"x\" -> \"0\" [label=\"0,1\"];\n    \"0\" -> \"x\";\n}\n"
        );
        assert!(g.has_edge("x", "0"));
        assert!(!g.has_edge("0", "0"));
    }
}
