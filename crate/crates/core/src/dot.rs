//! Graphviz export of a conflict's implication graph.

use crate::search::ConflictGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the graph as a DOT digraph: decision variables as boxes, implied
/// variables as ellipses, the violated constraint as a double octagon, and
/// reason constraints as edge labels. Output is deterministically ordered.
pub fn to_dot(graph: &ConflictGraph) -> String {
    let mut out = String::from("digraph conflict {\n");
    out.push_str("  rankdir=LR;\n");
    let mut nodes = graph.nodes.clone();
    nodes.sort_by(|a, b| a.var.cmp(&b.var));
    for node in &nodes {
        let shape = if node.decision { "box" } else { "ellipse" };
        out.push_str(&format!(
            "  {} [shape={shape}, label={}];\n",
            quote(&node.var),
            quote(&format!(
                "{}={} @{}",
                node.var, node.value as u8, node.level
            )),
        ));
    }
    out.push_str(&format!(
        "  conflict [shape=doubleoctagon, label={}];\n",
        quote(&format!("conflict: {}", graph.violated))
    ));
    let mut edges = graph.edges.clone();
    edges.sort_by(|a, b| (&a.from, &a.to, &a.label).cmp(&(&b.from, &b.to, &b.label)));
    for edge in &edges {
        let to = if edge.to == "conflict" {
            "conflict".to_string()
        } else {
            quote(&edge.to)
        };
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            quote(&edge.from),
            to,
            quote(&edge.label)
        ));
    }
    out.push_str("}\n");
    out
}
