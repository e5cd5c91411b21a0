//! Flow invariants and ideal-lattice combinatorics: the proper
//! communication graph, Condition (K), and the hereditary saturated
//! subsets indexing the gauge-invariant ideal lattice.

use crate::bitset::Bits;
use crate::covers::krieger_cover;
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexSet};
use crate::iso::digraph_isomorphic;

/// A plain digraph shape for isomorphism checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

/// The DAG of proper communication sets: cyclic strongly connected
/// classes, with an arc whenever a path connects them. Vertices lying on
/// no cycle belong to no node.
#[derive(Debug, Clone)]
pub struct ProperCommunicationGraph {
    /// The proper communication sets, ordered by least source vertex.
    pub nodes: Vec<VertexSet>,
    /// Display names of the nodes.
    pub node_names: Vec<String>,
    /// Reachability arcs, transitively closed; the defining form.
    pub closure: Vec<(usize, usize)>,
    /// Transitive reduction of `closure`, for display.
    pub reduced: Vec<(usize, usize)>,
    /// The unique maximal node, when one exists.
    pub root: Option<usize>,
}

impl ProperCommunicationGraph {
    pub fn shape(&self) -> Digraph {
        Digraph {
            n: self.nodes.len(),
            arcs: self.closure.clone(),
        }
    }
}

/// Builds the proper communication graph of a labelled graph: nodes are
/// the strongly connected components containing at least one edge, arcs
/// follow path reachability.
pub fn proper_communication_graph(g: &LabelledGraph) -> ProperCommunicationGraph {
    let scc = g.scc();
    let cyclic: Vec<bool> = (0..scc.components.len())
        .map(|c| {
            g.edges()
                .iter()
                .any(|e| scc.comp_of[e.src] == c && scc.comp_of[e.dst] == c)
        })
        .collect();
    // reachability over the condensation, accumulated in reverse
    // topological order
    let nc = scc.components.len();
    let mut reach: Vec<Bits> = (0..nc).map(|_| Bits::new(nc)).collect();
    let order = {
        let mut indeg = vec![0usize; nc];
        for row in &scc.condensation {
            for &b in row {
                indeg[b] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..nc).filter(|&c| indeg[c] == 0).collect();
        let mut topo = Vec::new();
        while let Some(c) = queue.pop() {
            topo.push(c);
            for &b in &scc.condensation[c] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push(b);
                }
            }
        }
        debug_assert_eq!(topo.len(), nc);
        topo
    };
    for &c in order.iter().rev() {
        for &b in &scc.condensation[c] {
            let other = reach[b].clone();
            reach[c].insert(b);
            reach[c].union_with(&other);
        }
    }

    let kept: Vec<usize> = (0..nc).filter(|&c| cyclic[c]).collect();
    let nodes: Vec<VertexSet> = kept
        .iter()
        .map(|&c| g.set_of_indices(scc.components[c].iter().copied()))
        .collect();
    let node_names: Vec<String> = nodes.iter().map(|s| g.set_name(s)).collect();
    let mut closure = Vec::new();
    for (li, &c) in kept.iter().enumerate() {
        for (lj, &d) in kept.iter().enumerate() {
            if li != lj && reach[c].contains(d) {
                closure.push((li, lj));
            }
        }
    }
    closure.sort_unstable();
    let reduced: Vec<(usize, usize)> = closure
        .iter()
        .copied()
        .filter(|&(a, b)| {
            !closure
                .iter()
                .any(|&(x, y)| x == a && y != b && y != a && closure.contains(&(y, b)))
        })
        .collect();
    let n = nodes.len();
    let root = (0..n).find(|&i| (0..n).all(|j| j == i || closure.contains(&(i, j))));
    let root = root.filter(|&i| {
        // unique maximal node: no other node also reaches everything
        !(0..n).any(|j| j != i && (0..n).all(|k| k == j || closure.contains(&(j, k))))
    });
    ProperCommunicationGraph {
        nodes,
        node_names,
        closure,
        reduced,
        root,
    }
}

/// The flow invariant: the proper communication graph of the left
/// Krieger cover of the presented shift.
pub fn pcg_invariant(g: &LabelledGraph) -> Result<ProperCommunicationGraph> {
    let k = krieger_cover(g)?;
    Ok(proper_communication_graph(&k.graph))
}

/// Exact unlabelled DAG isomorphism of the two invariants.
pub fn dag_isomorphic(a: &ProperCommunicationGraph, b: &ProperCommunicationGraph) -> bool {
    digraph_isomorphic(&a.shape(), &b.shape())
}

/// Picks a fresh symbol name not present in the alphabet.
pub fn fresh_symbol(g: &LabelledGraph, base: &str) -> String {
    let mut name = format!("{base}_dot");
    while g.alphabet().contains(&name) {
        name.push('_');
    }
    name
}

/// Checks that the proper communication graph of the Krieger cover is
/// unchanged by expanding `symbol` into a two-edge path.
pub fn flow_expand_check(g: &LabelledGraph, symbol: &str) -> Result<bool> {
    let before = pcg_invariant(g)?;
    let expanded = g.symbol_expand(symbol, &fresh_symbol(g, symbol))?;
    let after = pcg_invariant(&expanded)?;
    Ok(dag_isomorphic(&before, &after))
}

/// Condition (K): no strongly connected component containing an edge is
/// a single simple cycle, i.e. every vertex lies on zero or at least two
/// cycles.
pub fn condition_k(g: &LabelledGraph) -> bool {
    let scc = g.scc();
    'comps: for (ci, comp) in scc.components.iter().enumerate() {
        let mut internal = 0usize;
        for e in g.edges() {
            if scc.comp_of[e.src] == ci && scc.comp_of[e.dst] == ci {
                internal += 1;
            }
        }
        if internal == 0 {
            continue;
        }
        // a strongly connected component is a single simple cycle iff
        // every member emits exactly one internal edge
        for &v in comp {
            let out_internal = g
                .out_edges(v)
                .filter(|e| scc.comp_of[e.dst] == ci)
                .count();
            if out_internal != 1 {
                continue 'comps;
            }
        }
        return false;
    }
    true
}

/// The lattice of hereditary and saturated vertex subsets, ordered by
/// inclusion with its Hasse diagram.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    /// Elements sorted by (cardinality, bit pattern); always contains
    /// the empty set and the full vertex set.
    pub elements: Vec<VertexSet>,
    pub element_names: Vec<String>,
    /// Covering pairs `(lower, upper)` by element index.
    pub hasse: Vec<(usize, usize)>,
}

pub(crate) const DEFAULT_IDEAL_VERTEX_CAP: usize = 20;

pub fn hereditary_saturated_subsets(g: &LabelledGraph) -> Result<IdealLattice> {
    hereditary_saturated_subsets_with_cap(g, DEFAULT_IDEAL_VERTEX_CAP)
}

pub fn hereditary_saturated_subsets_with_cap(
    g: &LabelledGraph,
    cap: usize,
) -> Result<IdealLattice> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "ideal lattice enumeration over {n} vertices (cap {cap})"
        )));
    }
    let out_mask: Vec<u64> = (0..n)
        .map(|v| {
            let mut m = 0u64;
            for e in g.out_edges(v) {
                m |= 1 << e.dst;
            }
            m
        })
        .collect();
    let mut members: Vec<u64> = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let hereditary = (0..n).all(|v| mask & (1 << v) == 0 || out_mask[v] & !mask == 0);
        if !hereditary {
            continue;
        }
        let saturated = (0..n).all(|v| {
            mask & (1 << v) != 0 || out_mask[v] == 0 || out_mask[v] & !mask != 0
        });
        if saturated {
            members.push(mask);
        }
    }
    members.sort_by_key(|&m| (m.count_ones(), m));
    if members.len() > 10_000 {
        return Err(Error::CapExceeded(format!(
            "ideal lattice with {} elements",
            members.len()
        )));
    }
    let elements: Vec<VertexSet> = members
        .iter()
        .map(|&m| g.set_of_indices((0..n).filter(|&v| m & (1 << v) != 0)))
        .collect();
    let element_names: Vec<String> = elements.iter().map(|s| g.set_name(s)).collect();
    let mut hasse = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            if i == j || a & !b != 0 || a == b {
                continue;
            }
            // a < b; direct unless something sits strictly between
            let between = members
                .iter()
                .any(|&c| c != a && c != b && a & !c == 0 && c & !b == 0);
            if !between {
                hasse.push((i, j));
            }
        }
    }
    hasse.sort_unstable();
    Ok(IdealLattice {
        elements,
        element_names,
        hasse,
    })
}

/// Saturation closure: repeatedly adds vertices that emit at least one
/// edge and whose every out-neighbour already lies inside. The join of
/// two lattice elements is the saturation of their union.
pub fn saturate(g: &LabelledGraph, set: &VertexSet) -> VertexSet {
    let mut bits: Vec<bool> = (0..g.vertex_count()).map(|v| set.contains(v)).collect();
    loop {
        let mut changed = false;
        for v in 0..g.vertex_count() {
            if bits[v] {
                continue;
            }
            let mut emits = false;
            let mut all_in = true;
            for e in g.out_edges(v) {
                emits = true;
                if !bits[e.dst] {
                    all_in = false;
                    break;
                }
            }
            if emits && all_in {
                bits[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    g.set_of_indices((0..g.vertex_count()).filter(|&v| bits[v]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{even_shift, fixture};

    #[test]
    fn pcg_of_irreducible_graph_is_one_node() {
        let g = even_shift();
        let p = proper_communication_graph(&g);
        assert_eq!(p.nodes.len(), 1);
        assert!(p.closure.is_empty());
        assert_eq!(p.root, Some(0));
    }

    #[test]
    fn pcg_drops_acyclic_vertices() {
        // u and v have loops, m is a bridge vertex on no cycle
        let g = LabelledGraph::from_edges(
            "g",
            &[
                ("u", "a", "u"),
                ("u", "b", "m"),
                ("m", "c", "v"),
                ("v", "a", "v"),
            ],
        )
        .unwrap();
        let p = proper_communication_graph(&g);
        assert_eq!(p.nodes.len(), 2);
        assert_eq!(p.closure, vec![(0, 1)]);
        assert_eq!(p.root, Some(0));
    }

    #[test]
    fn pcg_invariant_of_even_shift() {
        let g = even_shift();
        let p = pcg_invariant(&g).unwrap();
        assert_eq!(p.nodes.len(), 2);
        assert_eq!(p.closure.len(), 1);
    }

    #[test]
    fn dag_isomorphic_on_pcgs() {
        let g = even_shift();
        let p = pcg_invariant(&g).unwrap();
        assert!(dag_isomorphic(&p, &p));
    }

    #[test]
    fn flow_expand_on_even_and_one_loop() {
        let g = even_shift();
        assert!(flow_expand_check(&g, "1").unwrap());
        let l = LabelledGraph::from_edges("l", &[("v", "a", "v")]).unwrap();
        assert!(flow_expand_check(&l, "a").unwrap());
    }

    #[test]
    fn condition_k_on_simple_and_doubled_cycles() {
        let cycle =
            LabelledGraph::from_edges("c", &[("a", "x", "b"), ("b", "y", "a")]).unwrap();
        assert!(!condition_k(&cycle));
        let doubled = LabelledGraph::from_edges(
            "d",
            &[("a", "x", "b"), ("b", "y", "a"), ("a", "z", "a")],
        )
        .unwrap();
        assert!(condition_k(&doubled));
        // acyclic part does not matter
        let mixed = LabelledGraph::from_edges(
            "m",
            &[("a", "x", "a"), ("a", "y", "a"), ("a", "z", "b"), ("b", "w", "b"), ("b", "v", "b")],
        )
        .unwrap();
        assert!(condition_k(&mixed));
    }

    #[test]
    fn ideals_of_irreducible_graph_are_trivial() {
        let g = fixture("2inv_left_fischer").unwrap();
        let l = hereditary_saturated_subsets(&g).unwrap();
        assert_eq!(l.elements.len(), 2);
        assert_eq!(l.elements[0].count(), 0);
        assert_eq!(l.elements[1].count(), g.vertex_count());
        assert_eq!(l.hasse, vec![(0, 1)]);
    }

    #[test]
    fn ideal_lattice_closed_under_meet_and_join() {
        let k = crate::covers::krieger_cover(&even_shift()).unwrap();
        let l = hereditary_saturated_subsets(&k.graph).unwrap();
        assert_eq!(l.elements.len(), 3);
        for a in &l.elements {
            for b in &l.elements {
                let meet = a.intersect(b);
                assert!(l.elements.contains(&meet), "meet missing");
                let join = saturate(&k.graph, &a.union(b));
                assert!(l.elements.contains(&join), "join missing");
            }
        }
    }

    #[test]
    fn ideal_cap_is_enforced() {
        let g = even_shift();
        assert!(matches!(
            hereditary_saturated_subsets_with_cap(&g, 1),
            Err(Error::CapExceeded(_))
        ));
    }
}
