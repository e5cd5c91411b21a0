//! DOT emitters for labelled graphs, covers, proper communication
//! graphs, and ideal-lattice Hasse diagrams. Output ordering is stable.

use std::fmt::Write;

use crate::covers::CoverResult;
use crate::graph::LabelledGraph;
use crate::invariants::{IdealLattice, ProperCommunicationGraph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_dot(g: &LabelledGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(g.name()));
    let _ = writeln!(out, "  rankdir=LR;");
    for v in g.vertex_names() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    let mut edges: Vec<(String, String, String)> = g.edges().iter().map(|e| g.edge_names(e)).collect();
    edges.sort();
    for (s, l, d) in edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&s), quote(&d), quote(&l));
    }
    out.push_str("}\n");
    out
}

/// Cover graphs are drawn with union-decomposition vertex labels
/// (`P(u)∪P(v)`) and one same-rank cluster per layer.
pub fn cover_dot(c: &CoverResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(c.graph.name()));
    let _ = writeln!(out, "  rankdir=TB;");
    let mut layers: Vec<usize> = c.vertices.iter().filter_map(|v| v.layer).collect();
    layers.sort_unstable();
    layers.dedup();
    for layer in layers {
        let _ = writeln!(out, "  {{ rank=same;");
        for (i, v) in c.vertices.iter().enumerate() {
            if v.layer == Some(layer) {
                let _ = writeln!(
                    out,
                    "    {} [label={}];",
                    quote(&v.name),
                    quote(&c.union_name(i))
                );
            }
        }
        let _ = writeln!(out, "  }}");
    }
    for (i, v) in c.vertices.iter().enumerate() {
        if v.layer.is_none() {
            let _ = writeln!(
                out,
                "  {} [label={}];",
                quote(&v.name),
                quote(&c.union_name(i))
            );
        }
    }
    let mut edges: Vec<(String, String, String)> =
        c.graph.edges().iter().map(|e| c.graph.edge_names(e)).collect();
    edges.sort();
    for (s, l, d) in edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&s), quote(&d), quote(&l));
    }
    out.push_str("}\n");
    out
}

/// Arcs are drawn transitively reduced; the closure is what the
/// invariant compares.
pub fn pcg_dot(p: &ProperCommunicationGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph pcg {{");
    for (i, name) in p.node_names.iter().enumerate() {
        let marker = if p.root == Some(i) { " [shape=doublecircle]" } else { "" };
        let _ = writeln!(out, "  n{} [label={}]{};", i, quote(name), marker);
    }
    for &(a, b) in &p.reduced {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

pub fn hasse_dot(l: &IdealLattice) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph ideals {{");
    let _ = writeln!(out, "  rankdir=BT;");
    for (i, name) in l.element_names.iter().enumerate() {
        let _ = writeln!(out, "  e{} [label={}];", i, quote(name));
    }
    for &(a, b) in &l.hasse {
        let _ = writeln!(out, "  e{a} -> e{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_loop_graph_dot() {
        let g = LabelledGraph::from_edges("l", &[("v", "a", "v")]).unwrap();
        let dot = graph_dot(&g);
        assert!(dot.contains("digraph \"l\""));
        assert!(dot.contains("\"v\" -> \"v\" [label=\"a\"];"));
    }

    #[test]
    fn dot_output_is_deterministic() {
        let g = crate::construct::even_shift();
        assert_eq!(graph_dot(&g), graph_dot(&g));
    }
}
