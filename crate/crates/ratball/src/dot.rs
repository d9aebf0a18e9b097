//! Graphviz output.

use std::fmt::Write as _;

use ratball_core::cabling::Plumbing;
use ratball_core::plumbing::WeightedTree;

fn colour(role: &str) -> &'static str {
    match role.trim_end_matches(|c: char| c.is_ascii_digit()) {
        "torso" => "lightblue",
        "leg" => "palegreen",
        "node" => "gold",
        "connective" => "lightgrey",
        _ => "salmon",
    }
}

pub fn tree_to_dot(t: &WeightedTree) -> String {
    render(t, |_| None)
}

/// Weights as labels, roles as a `role` attribute and a fill colour.
pub fn plumbing_to_dot(p: &Plumbing) -> String {
    render(&p.tree, |v| p.role(v).map(|r| r.to_string()))
}

fn render<F>(t: &WeightedTree, role: F) -> String
where
    F: Fn(ratball_core::plumbing::VertexId) -> Option<String>,
{
    let mut out = String::from("graph plumbing {\n  node [shape=circle];\n");
    for (v, w) in t.vertices() {
        let _ = write!(out, "  v{} [label=\"{}\"", v.0, w);
        if let Some(r) = role(v) {
            let _ = write!(out, ", role=\"{}\", style=filled, fillcolor={}", r, colour(&r));
        }
        out.push_str("];\n");
    }
    for (a, b) in t.edges() {
        let _ = writeln!(out, "  v{} -- v{};", a.0, b.0);
    }
    out.push_str("}\n");
    out
}
