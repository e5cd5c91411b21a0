//! Finite labelled directed multigraphs and their structural predicates
//! and transforms.
//!
//! A [`LabelledGraph`] is the universal input and output of this crate: a
//! finite directed multigraph with edge labels drawn from a surjectively
//! used alphabet. Parallel edges are allowed, exact duplicate edges
//! (same source, label, and target) are rejected.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bitset::{tarjan_scc, Bits};
use crate::error::{Error, Result};

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of a graph instance; vertex sets are bound to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphId(u64);

fn fresh_graph_id() -> GraphId {
    GraphId(NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed))
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace) && !s.contains('#')
}

/// The finite, ordered symbol set of a labelled graph.
///
/// Symbols are kept sorted, are unique, and may not contain whitespace
/// or `#` (the comment character of the text format).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    fn new(mut symbols: Vec<String>) -> Result<Self> {
        symbols.sort();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(Error::Invalid("alphabet must be nonempty".into()));
        }
        for s in &symbols {
            if !valid_token(s) {
                return Err(Error::Invalid(format!(
                    "symbol {s:?} contains whitespace or '#'"
                )));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn id_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.binary_search_by(|s| s.as_str().cmp(symbol)).ok()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.id_of(symbol).is_some()
    }
}

/// An edge, with endpoints and label stored as indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub label: usize,
    pub dst: usize,
}

/// A finite labelled directed multigraph over a nonempty alphabet.
#[derive(Debug, Clone)]
pub struct LabelledGraph {
    id: GraphId,
    name: String,
    alphabet: Alphabet,
    vertices: Vec<String>,
    vindex: HashMap<String, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl PartialEq for LabelledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.alphabet == other.alphabet
            && self.edges == other.edges
    }
}
impl Eq for LabelledGraph {}

/// The five structural predicates of a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Predicates {
    pub left_resolving: bool,
    pub right_resolving: bool,
    pub essential: bool,
    pub irreducible_graph: bool,
    pub predecessor_separated: bool,
}

/// Strongly connected components with their condensation.
#[derive(Debug, Clone)]
pub struct Scc {
    /// Component index per vertex; components are ordered by least vertex.
    pub comp_of: Vec<usize>,
    /// Vertices of each component, ascending.
    pub components: Vec<Vec<usize>>,
    /// Deduplicated condensation arcs, adjacency per component.
    pub condensation: Vec<Vec<usize>>,
}

impl LabelledGraph {
    /// Builds a graph from named vertices and `(src, label, dst)` edges.
    ///
    /// The alphabet is derived from the labels, so the labelling map is
    /// surjective by construction. Exact duplicate edges are rejected
    /// rather than silently deduplicated.
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<String>,
        edges: &[(String, String, String)],
    ) -> Result<Self> {
        let name = name.into();
        if !valid_token(&name) {
            return Err(Error::Invalid(format!("invalid graph name {name:?}")));
        }
        if vertices.is_empty() {
            return Err(Error::Invalid("graph must have at least one vertex".into()));
        }
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_token(v) {
                return Err(Error::Invalid(format!("invalid vertex name {v:?}")));
            }
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex {v:?}")));
            }
        }
        if edges.is_empty() {
            return Err(Error::Invalid(
                "graph must have at least one edge (alphabet must be nonempty)".into(),
            ));
        }
        let alphabet = Alphabet::new(edges.iter().map(|(_, l, _)| l.clone()).collect())?;
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (src, label, dst) in edges {
            let s = *vindex
                .get(src)
                .ok_or_else(|| Error::Invalid(format!("undeclared vertex {src:?}")))?;
            let d = *vindex
                .get(dst)
                .ok_or_else(|| Error::Invalid(format!("undeclared vertex {dst:?}")))?;
            let l = alphabet.id_of(label).expect("label in derived alphabet");
            idx_edges.push(Edge {
                src: s,
                label: l,
                dst: d,
            });
        }
        // canonical edge order: by (src name, label, dst name)
        idx_edges.sort_by(|a, b| {
            (&vertices[a.src], &alphabet.symbols[a.label], &vertices[a.dst]).cmp(&(
                &vertices[b.src],
                &alphabet.symbols[b.label],
                &vertices[b.dst],
            ))
        });
        for w in idx_edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Invalid(format!(
                    "duplicate edge {} {} {}",
                    vertices[w[0].src], alphabet.symbols[w[0].label], vertices[w[0].dst]
                )));
            }
        }
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inn = vec![Vec::new(); vertices.len()];
        for (ei, e) in idx_edges.iter().enumerate() {
            out[e.src].push(ei);
            inn[e.dst].push(ei);
        }
        Ok(LabelledGraph {
            id: fresh_graph_id(),
            name,
            alphabet,
            vertices,
            vindex,
            edges: idx_edges,
            out,
            inn,
        })
    }

    /// Convenience constructor from string triples with implicit vertex
    /// declaration in order of first occurrence.
    pub fn from_edges(name: impl Into<String>, edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        for (s, _, d) in edges {
            for v in [s, d] {
                if seen.insert(v.to_string()) {
                    vertices.push(v.to_string());
                }
            }
        }
        let owned: Vec<(String, String, String)> = edges
            .iter()
            .map(|(s, l, d)| (s.to_string(), l.to_string(), d.to_string()))
            .collect();
        LabelledGraph::new(name, vertices, &owned)
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vindex.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.out[v].iter().map(move |&ei| &self.edges[ei])
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.inn[v].iter().map(move |&ei| &self.edges[ei])
    }

    pub fn symbol(&self, id: usize) -> &str {
        &self.alphabet.symbols()[id]
    }

    /// Edge triple rendered with names.
    pub fn edge_names(&self, e: &Edge) -> (String, String, String) {
        (
            self.vertices[e.src].clone(),
            self.alphabet.symbols()[e.label].clone(),
            self.vertices[e.dst].clone(),
        )
    }

    // ---- vertex sets ------------------------------------------------

    pub fn empty_set(&self) -> VertexSet {
        VertexSet {
            graph: self.id,
            bits: Bits::new(self.vertex_count()),
        }
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet {
            graph: self.id,
            bits: Bits::from_indices(self.vertex_count(), 0..self.vertex_count()),
        }
    }

    pub fn set_of_indices<I: IntoIterator<Item = usize>>(&self, iter: I) -> VertexSet {
        VertexSet {
            graph: self.id,
            bits: Bits::from_indices(self.vertex_count(), iter),
        }
    }

    pub fn set_of_names<'a, I: IntoIterator<Item = &'a str>>(&self, iter: I) -> Result<VertexSet> {
        let mut bits = Bits::new(self.vertex_count());
        for name in iter {
            let v = self
                .vertex_id(name)
                .ok_or_else(|| Error::Invalid(format!("unknown vertex {name:?}")))?;
            bits.insert(v);
        }
        Ok(VertexSet {
            graph: self.id,
            bits,
        })
    }

    /// Sorted vertex names of a set, rendered `{a,b,c}`.
    pub fn set_name(&self, set: &VertexSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|v| self.vertex_name(v)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join(","))
    }

    // ---- predicates --------------------------------------------------

    /// No vertex receives two edges with the same label.
    pub fn is_left_resolving(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.dst, e.label)))
    }

    /// No vertex emits two edges with the same label.
    pub fn is_right_resolving(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.src, e.label)))
    }

    /// Every vertex emits and receives at least one edge.
    pub fn is_essential(&self) -> bool {
        (0..self.vertex_count()).all(|v| !self.out[v].is_empty() && !self.inn[v].is_empty())
    }

    fn first_stranded(&self) -> Option<usize> {
        (0..self.vertex_count()).find(|&v| self.out[v].is_empty() || self.inn[v].is_empty())
    }

    pub(crate) fn require_essential(&self) -> Result<()> {
        match self.first_stranded() {
            None => Ok(()),
            Some(v) => Err(Error::NotEssential(self.vertices[v].clone())),
        }
    }

    /// One strongly connected component and at least one edge.
    pub fn is_irreducible_graph(&self) -> bool {
        !self.edges.is_empty() && self.scc().components.len() == 1
    }

    /// Distinct vertices have distinct predecessor sets. Defined only for
    /// essential graphs.
    pub fn is_predecessor_separated(&self) -> Result<bool> {
        if !self.is_essential() {
            return Err(Error::PredSepRequiresEssential);
        }
        let mut ctx = crate::lang::LangCtx::new(self);
        let mut keys = HashSet::new();
        for v in 0..self.vertex_count() {
            let k = ctx.key_id_of_indices([v])?;
            if !keys.insert(k) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All five predicates at once. Errors if the graph is not essential,
    /// since predecessor separation is undefined there.
    pub fn predicates(&self) -> Result<Predicates> {
        let predecessor_separated = self.is_predecessor_separated()?;
        Ok(Predicates {
            left_resolving: self.is_left_resolving(),
            right_resolving: self.is_right_resolving(),
            essential: true,
            irreducible_graph: self.is_irreducible_graph(),
            predecessor_separated,
        })
    }

    // ---- transforms ---------------------------------------------------

    /// Strongly connected components and the condensation DAG.
    pub fn scc(&self) -> Scc {
        let adj: Vec<Vec<usize>> = (0..self.vertex_count())
            .map(|v| self.out[v].iter().map(|&ei| self.edges[ei].dst).collect())
            .collect();
        let (comp_of, components) = tarjan_scc(&adj);
        let mut condensation = vec![Vec::new(); components.len()];
        for e in &self.edges {
            let (a, b) = (comp_of[e.src], comp_of[e.dst]);
            if a != b {
                condensation[a].push(b);
            }
        }
        for row in &mut condensation {
            row.sort_unstable();
            row.dedup();
        }
        Scc {
            comp_of,
            components,
            condensation,
        }
    }

    /// Iteratively deletes vertices that emit or receive no edge.
    pub fn trim_to_essential(&self) -> Result<LabelledGraph> {
        Ok(self.trim_with_map()?.0)
    }

    /// Trim plus the surviving original vertex indices, in order.
    pub(crate) fn trim_with_map(&self) -> Result<(LabelledGraph, Vec<usize>)> {
        let n = self.vertex_count();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let emits = self.out[v]
                    .iter()
                    .any(|&ei| alive[self.edges[ei].dst]);
                let receives = self.inn[v]
                    .iter()
                    .any(|&ei| alive[self.edges[ei].src]);
                if !emits || !receives {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        if kept.is_empty() {
            return Err(Error::EmptyAfterTrim);
        }
        if kept.len() == n {
            return Ok((self.clone(), kept));
        }
        let vertices: Vec<String> = kept.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .filter(|e| alive[e.src] && alive[e.dst])
            .map(|e| self.edge_names(e))
            .collect();
        let g = LabelledGraph::new(self.name.clone(), vertices, &edges)?;
        Ok((g, kept))
    }

    /// Reverses every edge, keeping labels.
    pub fn transpose(&self) -> LabelledGraph {
        let edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    self.vertices[e.dst].clone(),
                    self.alphabet.symbols()[e.label].clone(),
                    self.vertices[e.src].clone(),
                )
            })
            .collect();
        LabelledGraph::new(self.name.clone(), self.vertices.clone(), &edges)
            .expect("transpose of a valid graph is valid")
    }

    /// Replaces every edge labelled `symbol` by a two-edge path through a
    /// fresh midpoint vertex, the second edge labelled `fresh`.
    pub fn symbol_expand(&self, symbol: &str, fresh: &str) -> Result<LabelledGraph> {
        let sym = self
            .alphabet
            .id_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        if !valid_token(fresh) {
            return Err(Error::Invalid(format!("invalid fresh symbol {fresh:?}")));
        }
        if self.alphabet.contains(fresh) {
            return Err(Error::FreshSymbolClash(fresh.to_string()));
        }
        let mut vertices = self.vertices.clone();
        let mut taken: HashSet<String> = vertices.iter().cloned().collect();
        let mut edges: Vec<(String, String, String)> = Vec::new();
        let mut mid_counter = 0usize;
        for e in &self.edges {
            let (s, l, d) = self.edge_names(e);
            if e.label != sym {
                edges.push((s, l, d));
                continue;
            }
            let mut mid = format!("mid_{symbol}_{mid_counter}");
            mid_counter += 1;
            while taken.contains(&mid) {
                mid.push('_');
            }
            taken.insert(mid.clone());
            vertices.push(mid.clone());
            edges.push((s, l, mid.clone()));
            edges.push((mid, fresh.to_string(), d));
        }
        LabelledGraph::new(self.name.clone(), vertices, &edges)
    }

    /// Subgraph induced by a nonempty vertex set; the alphabet is
    /// recomputed from the surviving labels.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<LabelledGraph> {
        if set.graph != self.id {
            return Err(Error::GraphMismatch);
        }
        if set.is_empty() {
            return Err(Error::EmptySelection);
        }
        let vertices: Vec<String> = set.iter().map(|v| self.vertices[v].clone()).collect();
        let edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .filter(|e| set.contains(e.src) && set.contains(e.dst))
            .map(|e| self.edge_names(e))
            .collect();
        if edges.is_empty() {
            return Err(Error::EmptyInducedAlphabet);
        }
        LabelledGraph::new(self.name.clone(), vertices, &edges)
    }

    /// Side-by-side union of two graphs over disjoint alphabets. Vertex
    /// names are prefixed with the graph names to stay unique.
    pub fn disjoint_union(a: &LabelledGraph, b: &LabelledGraph) -> Result<LabelledGraph> {
        for s in a.alphabet.symbols() {
            if b.alphabet.contains(s) {
                return Err(Error::AlphabetOverlap(s.clone()));
            }
        }
        let (pa, pb) = if a.name != b.name {
            (format!("{}.", a.name), format!("{}.", b.name))
        } else {
            (format!("{}1.", a.name), format!("{}2.", b.name))
        };
        let mut vertices: Vec<String> = a.vertices.iter().map(|v| format!("{pa}{v}")).collect();
        vertices.extend(b.vertices.iter().map(|v| format!("{pb}{v}")));
        let mut edges: Vec<(String, String, String)> = Vec::new();
        for e in &a.edges {
            let (s, l, d) = a.edge_names(e);
            edges.push((format!("{pa}{s}"), l, format!("{pa}{d}")));
        }
        for e in &b.edges {
            let (s, l, d) = b.edge_names(e);
            edges.push((format!("{pb}{s}"), l, format!("{pb}{d}")));
        }
        LabelledGraph::new(format!("{}+{}", a.name, b.name), vertices, &edges)
    }
}

/// A set of vertices of one specific graph, as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    graph: GraphId,
    bits: Bits,
}

impl VertexSet {
    pub fn graph_id(&self) -> GraphId {
        self.graph
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.graph, other.graph, "vertex sets bound to different graphs");
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        VertexSet {
            graph: self.graph,
            bits,
        }
    }

    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.graph, other.graph, "vertex sets bound to different graphs");
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        VertexSet {
            graph: self.graph,
            bits,
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        assert_eq!(self.graph, other.graph, "vertex sets bound to different graphs");
        self.bits.is_subset_of(&other.bits)
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    pub(crate) fn from_bits(graph: GraphId, bits: Bits) -> Self {
        VertexSet { graph, bits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even() -> LabelledGraph {
        crate::construct::even_shift()
    }

    #[test]
    fn rejects_duplicate_edges() {
        let err = LabelledGraph::from_edges("g", &[("a", "x", "b"), ("a", "x", "b")]);
        assert!(matches!(err, Err(Error::Invalid(_))));
    }

    #[test]
    fn allows_parallel_edges_with_distinct_endpoints_or_labels() {
        let g = LabelledGraph::from_edges("g", &[("a", "x", "b"), ("a", "y", "b"), ("b", "x", "a")])
            .unwrap();
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.alphabet().symbols(), ["x", "y"]);
    }

    #[test]
    fn rejects_empty_and_invalid_names() {
        assert!(LabelledGraph::from_edges("g", &[]).is_err());
        assert!(LabelledGraph::from_edges("g", &[("a b", "x", "c")]).is_err());
        assert!(LabelledGraph::from_edges("g", &[("a", "#", "c")]).is_err());
    }

    #[test]
    fn predicates_on_even_shift_fixture() {
        let g = even();
        let p = g.predicates().unwrap();
        assert!(p.left_resolving);
        assert!(p.right_resolving);
        assert!(p.essential);
        assert!(p.irreducible_graph);
        assert!(p.predecessor_separated);
    }

    #[test]
    fn predicates_on_single_loop() {
        let g = LabelledGraph::from_edges("loop", &[("v", "a", "v")]).unwrap();
        let p = g.predicates().unwrap();
        assert!(
            p.left_resolving
                && p.right_resolving
                && p.essential
                && p.irreducible_graph
                && p.predecessor_separated
        );
    }

    #[test]
    fn pred_sep_requires_essential() {
        let g = LabelledGraph::from_edges("p", &[("a", "x", "b"), ("b", "x", "c"), ("c", "x", "c")])
            .unwrap();
        assert!(!g.is_essential());
        assert!(matches!(
            g.predicates(),
            Err(Error::PredSepRequiresEssential)
        ));
    }

    #[test]
    fn trim_is_identity_on_essential_and_errors_on_acyclic_path() {
        let g = even();
        assert_eq!(g.trim_to_essential().unwrap(), g);

        let path =
            LabelledGraph::from_edges("p", &[("a", "x", "b"), ("b", "x", "c")]).unwrap();
        assert!(matches!(path.trim_to_essential(), Err(Error::EmptyAfterTrim)));
    }

    #[test]
    fn trim_drops_stranded_tail() {
        let g = LabelledGraph::from_edges(
            "g",
            &[("a", "x", "a"), ("a", "y", "b"), ("b", "y", "c")],
        )
        .unwrap();
        let t = g.trim_to_essential().unwrap();
        assert_eq!(t.vertex_names(), ["a"]);
        assert_eq!(t.edges().len(), 1);
    }

    #[test]
    fn transpose_is_involution_and_reverses_single_edge() {
        let g = LabelledGraph::from_edges("g", &[("u", "a", "v"), ("v", "b", "u")]).unwrap();
        let t = g.transpose();
        assert_eq!(t.edges().len(), 2);
        let (s, l, d) = t.edge_names(&t.edges()[0]);
        assert_eq!((s.as_str(), l.as_str(), d.as_str()), ("u", "b", "v"));
        assert_eq!(t.transpose(), g);

        let looped = LabelledGraph::from_edges("l", &[("v", "a", "v")]).unwrap();
        assert_eq!(looped.transpose(), looped);
    }

    #[test]
    fn symbol_expand_single_loop_becomes_two_cycle() {
        let g = LabelledGraph::from_edges("l", &[("v", "a", "v")]).unwrap();
        let e = g.symbol_expand("a", "dot").unwrap();
        assert_eq!(e.vertex_count(), 2);
        assert_eq!(e.edges().len(), 2);
        assert!(e.is_essential());
        assert!(e.is_left_resolving());
        assert!(matches!(
            g.symbol_expand("a", "a"),
            Err(Error::FreshSymbolClash(_))
        ));
    }

    #[test]
    fn induced_subgraph_full_set_is_identity() {
        let g = even();
        let s = g.full_set();
        assert_eq!(g.induced_subgraph(&s).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_one_looped_vertex() {
        let g = even();
        let a = g.set_of_names(["A"]).unwrap();
        let sub = g.induced_subgraph(&a).unwrap();
        assert_eq!(sub.vertex_count(), 1);
        assert_eq!(sub.alphabet().symbols(), ["1"]);
    }

    #[test]
    fn induced_subgraph_rejects_foreign_set_and_edgeless_result() {
        let g = even();
        let h = even();
        assert!(matches!(
            g.induced_subgraph(&h.full_set()),
            Err(Error::GraphMismatch)
        ));
        let b = g.set_of_names(["B"]).unwrap();
        assert!(matches!(
            g.induced_subgraph(&b),
            Err(Error::EmptyInducedAlphabet)
        ));
    }

    #[test]
    fn disjoint_union_two_loops() {
        let a = LabelledGraph::from_edges("ga", &[("v", "a", "v")]).unwrap();
        let b = LabelledGraph::from_edges("gb", &[("v", "b", "v")]).unwrap();
        let u = LabelledGraph::disjoint_union(&a, &b).unwrap();
        assert_eq!(u.vertex_count(), 2);
        assert_eq!(u.scc().components.len(), 2);
        assert!(matches!(
            LabelledGraph::disjoint_union(&a, &a),
            Err(Error::AlphabetOverlap(_))
        ));
    }

    #[test]
    fn scc_of_bridge_graph() {
        let g = LabelledGraph::from_edges(
            "g",
            &[("u", "a", "u"), ("u", "b", "v"), ("v", "a", "v")],
        )
        .unwrap();
        let scc = g.scc();
        assert_eq!(scc.components.len(), 2);
        assert_eq!(scc.condensation[0], vec![1]);
        assert!(scc.condensation[1].is_empty());
    }

    #[test]
    fn irreducible_iff_single_component() {
        let g = even();
        assert!(g.is_irreducible_graph());
        assert_eq!(g.scc().components.len(), 1);
    }
}
