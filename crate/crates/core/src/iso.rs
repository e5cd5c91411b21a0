//! Exact isomorphism for small labelled multigraphs and small digraphs,
//! via iterated colour refinement followed by backtracking.

use std::collections::BTreeMap;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::graph::LabelledGraph;
use crate::invariants::Digraph;

/// Internal edge-coloured multigraph form: `n` vertices, arcs carry a
/// colour id. Parallel arcs allowed.
struct Coloured {
    n: usize,
    arcs: Vec<(usize, usize, usize)>,
}

fn refine_colours(g: &Coloured) -> Vec<u64> {
    let mut colour: Vec<u64> = vec![0; g.n];
    for _ in 0..=g.n {
        let mut next = Vec::with_capacity(g.n);
        for v in 0..g.n {
            let mut outs: Vec<(usize, u64)> = g
                .arcs
                .iter()
                .filter(|&&(s, _, _)| s == v)
                .map(|&(_, d, c)| (c, colour[d]))
                .collect();
            outs.sort_unstable();
            let mut ins: Vec<(usize, u64)> = g
                .arcs
                .iter()
                .filter(|&&(_, d, _)| d == v)
                .map(|&(s, _, c)| (c, colour[s]))
                .collect();
            ins.sort_unstable();
            let mut h = DefaultHasher::new();
            colour[v].hash(&mut h);
            outs.hash(&mut h);
            ins.hash(&mut h);
            next.push(h.finish());
        }
        if next == colour {
            break;
        }
        colour = next;
    }
    colour
}

/// Multiset of arc colours between an ordered vertex pair.
fn pair_labels(g: &Coloured) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &(s, d, c) in &g.arcs {
        m.entry((s, d)).or_default().push(c);
    }
    for v in m.values_mut() {
        v.sort_unstable();
    }
    m
}

fn isomorphic(g1: &Coloured, g2: &Coloured) -> bool {
    if g1.n != g2.n || g1.arcs.len() != g2.arcs.len() {
        return false;
    }
    let c1 = refine_colours(g1);
    let c2 = refine_colours(g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return false;
    }
    let p1 = pair_labels(g1);
    let p2 = pair_labels(g2);

    // order vertices of g1 by ascending colour-class size for early pruning
    let mut class_size: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..g1.n).collect();
    order.sort_by_key(|&v| (class_size[&c1[v]], c1[v]));

    let mut map = vec![usize::MAX; g1.n];
    let mut used = vec![false; g2.n];

    fn consistent(
        v: usize,
        w: usize,
        map: &[usize],
        p1: &BTreeMap<(usize, usize), Vec<usize>>,
        p2: &BTreeMap<(usize, usize), Vec<usize>>,
    ) -> bool {
        // check every adjacency of v with already-mapped vertices
        for (u, mu) in map.iter().enumerate() {
            if *mu == usize::MAX && u != v {
                continue;
            }
            let mu = if u == v { w } else { *mu };
            if p1.get(&(v, u)) != p2.get(&(w, mu)) {
                return false;
            }
            if u != v && p1.get(&(u, v)) != p2.get(&(mu, w)) {
                return false;
            }
        }
        true
    }

    fn backtrack(
        pos: usize,
        order: &[usize],
        c1: &[u64],
        c2: &[u64],
        p1: &BTreeMap<(usize, usize), Vec<usize>>,
        p2: &BTreeMap<(usize, usize), Vec<usize>>,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..used.len() {
            if used[w] || c1[v] != c2[w] {
                continue;
            }
            if !consistent(v, w, map, p1, p2) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if backtrack(pos + 1, order, c1, c2, p1, p2, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    backtrack(0, &order, &c1, &c2, &p1, &p2, &mut map, &mut used)
}

/// Labelled-graph isomorphism: a vertex bijection carrying edges to edges
/// with identical labels. Vertex names are ignored.
pub fn labelled_graph_isomorphic(g1: &LabelledGraph, g2: &LabelledGraph) -> bool {
    if g1.alphabet().symbols() != g2.alphabet().symbols() {
        return false;
    }
    let to_coloured = |g: &LabelledGraph| Coloured {
        n: g.vertex_count(),
        arcs: g.edges().iter().map(|e| (e.src, e.dst, e.label)).collect(),
    };
    isomorphic(&to_coloured(g1), &to_coloured(g2))
}

/// Unlabelled digraph isomorphism, used to compare the DAG-valued
/// invariants.
pub fn digraph_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    let to_coloured = |d: &Digraph| Coloured {
        n: d.n,
        arcs: d.arcs.iter().map(|&(s, t)| (s, t, 0)).collect(),
    };
    isomorphic(&to_coloured(a), &to_coloured(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabelledGraph;

    #[test]
    fn renamed_graph_is_isomorphic() {
        let a = crate::construct::even_shift();
        let b = LabelledGraph::from_edges(
            "renamed",
            &[("P1", "1", "P1"), ("P1", "0", "P2"), ("P2", "0", "P1")],
        )
        .unwrap();
        assert!(labelled_graph_isomorphic(&a, &b));
    }

    #[test]
    fn label_swap_is_not_isomorphic() {
        let a = crate::construct::even_shift();
        let b = LabelledGraph::from_edges(
            "swapped",
            &[("A", "0", "A"), ("A", "1", "B"), ("B", "1", "A")],
        )
        .unwrap();
        assert!(!labelled_graph_isomorphic(&a, &b));
    }

    #[test]
    fn parallel_edge_placement_matters() {
        // same edge and label counts, but the y-loop moves from the
        // vertex with parallel out-edges to the one without
        let a = LabelledGraph::from_edges(
            "a",
            &[("u", "x", "v"), ("u", "y", "v"), ("v", "x", "u"), ("u", "y", "u")],
        )
        .unwrap();
        let b = LabelledGraph::from_edges(
            "b",
            &[("u", "x", "v"), ("u", "y", "v"), ("v", "x", "u"), ("v", "y", "v")],
        )
        .unwrap();
        assert!(!labelled_graph_isomorphic(&a, &b));
        // swapping source and target of everything is an isomorphism
        let c = LabelledGraph::from_edges(
            "c",
            &[("v", "x", "u"), ("v", "y", "u"), ("u", "x", "v"), ("v", "y", "v")],
        )
        .unwrap();
        assert!(labelled_graph_isomorphic(&a, &c));
    }

    #[test]
    fn digraph_chain_vs_antichain() {
        let chain = Digraph {
            n: 2,
            arcs: vec![(0, 1)],
        };
        let anti = Digraph { n: 2, arcs: vec![] };
        assert!(!digraph_isomorphic(&chain, &anti));
        assert!(digraph_isomorphic(&chain, &chain));
        let chain_rev = Digraph {
            n: 2,
            arcs: vec![(1, 0)],
        };
        assert!(digraph_isomorphic(&chain, &chain_rev));
    }

    #[test]
    fn digraph_needs_backtracking_on_regular_shapes() {
        // two 3-cycles vs a 6-cycle: same degrees everywhere
        let two = Digraph {
            n: 6,
            arcs: vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
        };
        let six = Digraph {
            n: 6,
            arcs: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)],
        };
        assert!(!digraph_isomorphic(&two, &six));
    }
}
