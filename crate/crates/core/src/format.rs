//! Text formats for labelled graphs and rooted DAGs.
//!
//! Graph format, one construct per line, `#` starts a comment:
//!
//! ```text
//! graph even            # optional, must come first
//! vertex A              # optional explicit declaration order
//! A 1 A                 # edge lines: <src> <label> <dst>
//! A 0 B
//! B 0 A
//! ```
//!
//! Vertices are implicitly declared by edges in order of first
//! occurrence. Serialization writes all vertices in declaration order and
//! edges sorted by `(src, label, dst)`, so output is diff-stable and
//! `parse(serialize(g)) == g`.
//!
//! DAG format: a `root <name>` line followed by `arc <src> <dst>` lines.

use crate::construct::RootedDag;
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

fn tokens(input: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    input.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            None
        } else {
            Some((i + 1, toks))
        }
    })
}

pub fn parse_graph(input: &str) -> Result<LabelledGraph> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut first = true;
    for (line, toks) in tokens(input) {
        match toks.as_slice() {
            ["graph", n] => {
                if !first {
                    return Err(Error::Parse {
                        line,
                        msg: "graph line must come first".into(),
                    });
                }
                name = Some(n.to_string());
            }
            ["graph", ..] => {
                return Err(Error::Parse {
                    line,
                    msg: "graph line takes exactly one name".into(),
                })
            }
            ["vertex", v] => {
                if !vertices.iter().any(|x| x == v) {
                    vertices.push(v.to_string());
                }
            }
            ["vertex", ..] => {
                return Err(Error::Parse {
                    line,
                    msg: "vertex line takes exactly one name".into(),
                })
            }
            [src, label, dst] => {
                for v in [src, dst] {
                    if !vertices.iter().any(|x| x == v) {
                        vertices.push(v.to_string());
                    }
                }
                edges.push((src.to_string(), label.to_string(), dst.to_string()));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `<src> <label> <dst>`, got {} tokens", toks.len()),
                })
            }
        }
        first = false;
    }
    LabelledGraph::new(name.unwrap_or_else(|| "g".into()), vertices, &edges)
}

pub fn serialize_graph(g: &LabelledGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("graph {}\n", g.name()));
    for v in g.vertex_names() {
        out.push_str(&format!("vertex {v}\n"));
    }
    let mut lines: Vec<(String, String, String)> =
        g.edges().iter().map(|e| g.edge_names(e)).collect();
    lines.sort();
    for (s, l, d) in lines {
        out.push_str(&format!("{s} {l} {d}\n"));
    }
    out
}

pub fn parse_dag(input: &str) -> Result<RootedDag> {
    let mut root: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arcs: Vec<(String, String)> = Vec::new();
    for (line, toks) in tokens(input) {
        match toks.as_slice() {
            ["root", r] => {
                if root.is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate root line".into(),
                    });
                }
                root = Some(r.to_string());
                if !vertices.iter().any(|x| x == r) {
                    vertices.push(r.to_string());
                }
            }
            ["arc", a, b] => {
                for v in [a, b] {
                    if !vertices.iter().any(|x| x == v) {
                        vertices.push(v.to_string());
                    }
                }
                arcs.push((a.to_string(), b.to_string()));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected `root <name>` or `arc <src> <dst>`".into(),
                })
            }
        }
    }
    let root = root.ok_or(Error::Parse {
        line: 0,
        msg: "missing root line".into(),
    })?;
    let arc_refs: Vec<(&str, &str)> = arcs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    RootedDag::new(vertices, &root, &arc_refs)
}

pub fn serialize_dag(d: &RootedDag) -> String {
    let mut out = format!("root {}\n", d.vertices[d.root]);
    let mut lines: Vec<(String, String)> = d
        .arcs
        .iter()
        .map(|&(a, b)| (d.vertices[a].clone(), d.vertices[b].clone()))
        .collect();
    lines.sort();
    for (a, b) in lines {
        out.push_str(&format!("arc {a} {b}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments_and_implicit_vertices() {
        let g = parse_graph(
            "# the even shift\ngraph even\nA 1 A\nA 0 B # to B\nB 0 A\n",
        )
        .unwrap();
        assert_eq!(g.name(), "even");
        assert_eq!(g.vertex_names(), ["A", "B"]);
        assert_eq!(g.edges().len(), 3);
    }

    #[test]
    fn vertex_lines_force_declaration_order() {
        let g = parse_graph("vertex B\nvertex A\nA 1 A\nA 0 B\nB 0 A\n").unwrap();
        assert_eq!(g.vertex_names(), ["B", "A"]);
    }

    #[test]
    fn round_trips_all_fixtures() {
        for name in crate::construct::FIXTURES {
            let g = crate::construct::fixture(name).unwrap();
            let text = serialize_graph(&g);
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, g, "fixture {name}");
            assert_eq!(serialize_graph(&back), text, "fixture {name}");
        }
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_graph("A 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("A 1 B\ngraph late\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn dag_round_trip() {
        let d = parse_dag("root r\narc r x\narc r y\narc r z\narc y z\n").unwrap();
        assert_eq!(d.vertices.len(), 4);
        let text = serialize_dag(&d);
        let back = parse_dag(&text).unwrap();
        assert_eq!(back.vertices, d.vertices);
        assert_eq!(back.arcs, d.arcs);
    }
}
