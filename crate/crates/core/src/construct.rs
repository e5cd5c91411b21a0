//! Synthesis of presentations realizing a prescribed proper communication
//! graph or ideal lattice, plus the named fixture graphs used throughout
//! the test suites.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::invariants::Digraph;

/// A finite directed acyclic graph with a root that reaches every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedDag {
    pub vertices: Vec<String>,
    pub root: usize,
    /// Deduplicated arcs, sorted; no self-arcs.
    pub arcs: Vec<(usize, usize)>,
}

impl RootedDag {
    pub fn new(vertices: Vec<String>, root: &str, arcs: &[(&str, &str)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Invalid("dag must have at least one vertex".into()));
        }
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Invalid(format!("undeclared dag vertex {name:?}")))
        };
        let root = index(root)?;
        let mut idx_arcs = Vec::new();
        for &(a, b) in arcs {
            let (a, b) = (index(a)?, index(b)?);
            if a == b {
                return Err(Error::Invalid(format!(
                    "self-arc at {:?} makes a circuit",
                    vertices[a]
                )));
            }
            idx_arcs.push((a, b));
        }
        idx_arcs.sort_unstable();
        idx_arcs.dedup();
        let dag = RootedDag {
            vertices,
            root,
            arcs: idx_arcs,
        };
        if dag.topo_order().is_none() {
            return Err(Error::Invalid("dag contains a circuit".into()));
        }
        let reach = dag.reachable_from(root);
        if let Some(v) = (0..dag.vertices.len()).find(|&v| !reach[v]) {
            return Err(Error::Invalid(format!(
                "root does not reach vertex {:?}",
                dag.vertices[v]
            )));
        }
        Ok(dag)
    }

    fn out(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .filter(move |&&(a, _)| a == v)
            .map(|&(_, b)| b)
    }

    fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = vec![v];
        seen[v] = true;
        while let Some(u) = queue.pop() {
            for w in self.out(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        seen
    }

    fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for &(_, b) in &self.arcs {
            indeg[b] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::new();
        while let Some(v) = queue.pop() {
            order.push(v);
            for w in self.out(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Length of the longest root path to each vertex.
    fn levels(&self) -> Vec<usize> {
        let order = self.topo_order().expect("validated acyclic");
        let mut l = vec![0usize; self.vertices.len()];
        // process in topological order so predecessors are final
        let mut rank = vec![0usize; self.vertices.len()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut by_rank: Vec<usize> = (0..self.vertices.len()).collect();
        by_rank.sort_by_key(|&v| rank[v]);
        for &v in &by_rank {
            for w in self.out(v) {
                l[w] = l[w].max(l[v] + 1);
            }
        }
        l
    }

    /// The unlabelled shape of the transitive closure, for isomorphism
    /// checks against a proper communication graph.
    pub fn closure_shape(&self) -> Digraph {
        let closed = transitive_closure_dag(self);
        Digraph {
            n: closed.vertices.len(),
            arcs: closed.arcs.clone(),
        }
    }

    /// Seeded random rooted DAG with at most `max_vertices` vertices;
    /// every non-root vertex gets at least one earlier parent, so the
    /// root reaches everything and the result is acyclic.
    pub fn random<R: Rng>(rng: &mut R, max_vertices: usize) -> RootedDag {
        let n = rng.random_range(1..=max_vertices.max(1));
        let vertices: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut arcs: Vec<(&str, &str)> = Vec::new();
        let names: Vec<String> = vertices.clone();
        let mut picked: Vec<(usize, usize)> = Vec::new();
        for j in 1..n {
            let mut any = false;
            for i in 0..j {
                if rng.random_bool(0.5) {
                    picked.push((i, j));
                    any = true;
                }
            }
            if !any {
                let i = rng.random_range(0..j);
                picked.push((i, j));
            }
        }
        for &(i, j) in &picked {
            arcs.push((&names[i], &names[j]));
        }
        RootedDag::new(vertices.clone(), &names[0], &arcs).expect("random dag is valid")
    }
}

/// Adds an arc from `u` to `v` whenever `u` reaches `v`.
pub fn transitive_closure_dag(dag: &RootedDag) -> RootedDag {
    let n = dag.vertices.len();
    let mut arcs = Vec::new();
    for u in 0..n {
        let reach = dag.reachable_from(u);
        for v in 0..n {
            if v != u && reach[v] {
                arcs.push((u, v));
            }
        }
    }
    arcs.sort_unstable();
    RootedDag {
        vertices: dag.vertices.clone(),
        root: dag.root,
        arcs,
    }
}

/// Which copies send the uniquely labelled edges back to the root copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnEdges {
    /// From every copy of each sink of the DAG.
    SinksOnly,
    /// From every copy of every non-root vertex.
    AllNonRoot,
}

fn realize(dag: &RootedDag, mode: ReturnEdges, doubled_loops: bool) -> Result<LabelledGraph> {
    let closed = transitive_closure_dag(dag);
    let levels = dag.levels();
    if let Some(&l) = levels.iter().max() {
        if l > 16 {
            return Err(Error::CapExceeded(format!(
                "dag level {l} would need 2^{l} vertex copies"
            )));
        }
    }
    let n_of = |v: usize| 1usize << levels[v];
    let copy_name = |v: usize, i: usize| format!("{}_{}", dag.vertices[v], i + 1);

    let mut vertices = Vec::new();
    for v in 0..dag.vertices.len() {
        for i in 0..n_of(v) {
            vertices.push(copy_name(v, i));
        }
    }
    let root_copy = copy_name(dag.root, 0);

    let mut edges: Vec<(String, String, String)> = Vec::new();
    for v in 0..dag.vertices.len() {
        for i in 0..n_of(v) {
            let name = copy_name(v, i);
            edges.push((name.clone(), format!("a_{}", dag.vertices[v]), name.clone()));
            if doubled_loops {
                edges.push((name.clone(), format!("a_{}'", dag.vertices[v]), name));
            }
        }
    }
    // one block of n(v)/n(u) uniquely labelled edges per closure arc and
    // source copy; every target copy receives exactly one of them
    for &(u, v) in &closed.arcs {
        let m = n_of(v) / n_of(u);
        debug_assert!(m >= 2);
        for i in 0..n_of(u) {
            for k in 0..m {
                edges.push((
                    copy_name(u, i),
                    format!("a_{}_{}_{}", dag.vertices[u], dag.vertices[v], k + 1),
                    copy_name(v, i * m + k),
                ));
            }
        }
    }
    let senders: Vec<usize> = match mode {
        ReturnEdges::SinksOnly => (0..dag.vertices.len())
            .filter(|&v| closed.out(v).next().is_none())
            .collect(),
        ReturnEdges::AllNonRoot => (0..dag.vertices.len())
            .filter(|&v| v != dag.root)
            .collect(),
    };
    for v in senders {
        for i in 0..n_of(v) {
            edges.push((
                copy_name(v, i),
                format!("ret_{}_{}", dag.vertices[v], i + 1),
                root_copy.clone(),
            ));
        }
    }
    LabelledGraph::new(format!("aft_{}", dag.vertices[dag.root]), vertices, &edges)
}

/// Builds the left Fischer cover of an AFT shift whose left Krieger cover
/// has proper communication graph equal to the transitive closure of the
/// DAG: each vertex gets `2^level` copies with an `a_v` loop, closure
/// arcs fan out over uniquely labelled edge blocks, and uniquely labelled
/// return edges close the graph back to the root copy.
pub fn realize_pcg(dag: &RootedDag, mode: ReturnEdges) -> Result<LabelledGraph> {
    realize(dag, mode, false)
}

/// Same construction with two loops (`a_v`, `a_v'`) on every copy, so the
/// Krieger cover of the result satisfies Condition (K) and the DAG's
/// hereditary subsets realize a prescribed ideal lattice.
pub fn realize_ideal_lattice(dag: &RootedDag, mode: ReturnEdges) -> Result<LabelledGraph> {
    realize(dag, mode, true)
}

/// The `c`-charge constrained shift: vertices are charge levels `0..=c`,
/// `+` steps up and `-` steps down.
pub fn charge_constrained(c: usize) -> Result<LabelledGraph> {
    if c < 1 {
        return Err(Error::Invalid("charge must be at least 1".into()));
    }
    let vertices: Vec<String> = (0..=c).map(|i| format!("q{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..c {
        edges.push((format!("q{i}"), "+".to_string(), format!("q{}", i + 1)));
        edges.push((format!("q{}", i + 1), "-".to_string(), format!("q{i}")));
    }
    LabelledGraph::new(format!("charge{c}"), vertices, &edges)
}

/// Standard two-vertex left Fischer cover of the even shift.
pub fn even_shift() -> LabelledGraph {
    LabelledGraph::from_edges("even", &[("A", "1", "A"), ("A", "0", "B"), ("B", "0", "A")])
        .expect("even shift fixture")
}

/// Two-vertex left Fischer cover of the golden mean shift (no `11`).
pub fn golden_mean() -> LabelledGraph {
    LabelledGraph::from_edges(
        "golden_mean",
        &[("B", "0", "A"), ("B", "0", "B"), ("A", "1", "B")],
    )
    .expect("golden mean fixture")
}

/// The 4-vertex rooted DAG (root `r`, leaves `x`, `y`, `z`, extra arc
/// `y -> z`) used by the branching AFT example.
pub fn branching_dag() -> RootedDag {
    RootedDag::new(
        vec!["r".into(), "x".into(), "y".into(), "z".into()],
        "r",
        &[("r", "x"), ("r", "y"), ("r", "z"), ("y", "z")],
    )
    .expect("branching dag fixture")
}

/// Names accepted by [`fixture`].
pub const FIXTURES: &[&str] = &[
    "even_shift",
    "golden_mean",
    "3cc_fischer",
    "3cc_krieger",
    "gfc_justifying",
    "2inv_left_fischer",
    "2inv_right_fischer",
    "branching_aft_fischer",
];

/// Returns a named fixture graph.
pub fn fixture(name: &str) -> Result<LabelledGraph> {
    match name {
        "even_shift" => Ok(even_shift()),
        "golden_mean" => Ok(golden_mean()),
        "3cc_fischer" => LabelledGraph::from_edges(
            "3cc_fischer",
            &[
                ("u", "+", "v"),
                ("v", "+", "w"),
                ("w", "+", "x"),
                ("x", "-", "w"),
                ("w", "-", "v"),
                ("v", "-", "u"),
            ],
        ),
        "3cc_krieger" => LabelledGraph::from_edges(
            "3cc_krieger",
            &[
                // first band: the Fischer cover
                ("Pu", "+", "Pv"),
                ("Pv", "+", "Pw"),
                ("Pw", "+", "Px"),
                ("Px", "-", "Pw"),
                ("Pw", "-", "Pv"),
                ("Pv", "-", "Pu"),
                // into the second band
                ("Pu", "+", "Puv"),
                ("Px", "-", "Pwx"),
                // second band
                ("Puv", "+", "Pvw"),
                ("Pvw", "+", "Pwx"),
                ("Pwx", "-", "Pvw"),
                ("Pvw", "-", "Puv"),
                // into the third band
                ("Puv", "+", "Puvw"),
                ("Pwx", "-", "Pvwx"),
                // third band
                ("Puvw", "+", "Pvwx"),
                ("Pvwx", "-", "Puvw"),
            ],
        ),
        "gfc_justifying" => LabelledGraph::from_edges(
            "gfc_justifying",
            &[
                ("O", "f", "O"),
                ("O", "c", "P'"),
                ("O", "d", "P1"),
                ("O", "e", "P2"),
                ("O", "d", "P"),
                ("O", "e", "P"),
                ("P1", "b", "h1"),
                ("P2", "b", "h2"),
                ("P", "b", "P'"),
                ("h1", "a", "h1"),
                ("h2", "a", "h2"),
                ("P'", "a", "P'"),
                ("h1", "g", "h3"),
                ("h2", "h", "h3"),
                ("h3", "i", "h3"),
                ("P'", "j", "v2"),
                ("v2", "k", "v2"),
            ],
        ),
        "2inv_left_fischer" => LabelledGraph::from_edges(
            "2inv_left_fischer",
            &[
                ("u", "a", "u"),
                ("u", "a'", "u"),
                ("v", "a", "v"),
                ("v", "a'", "v"),
                ("y", "a", "y"),
                ("y", "a'", "y"),
                ("w", "b", "v"),
                ("w", "b", "y"),
                ("v", "c", "w"),
                ("y", "d", "w"),
                ("u", "e", "w"),
                ("w", "g", "x"),
                ("x", "f", "u"),
                ("x", "f", "y"),
            ],
        ),
        "2inv_right_fischer" => LabelledGraph::from_edges(
            "2inv_right_fischer",
            &[
                ("u'", "a", "u'"),
                ("u'", "a'", "u'"),
                ("v'", "a", "v'"),
                ("v'", "a'", "v'"),
                ("w'", "b", "v'"),
                ("x'", "f", "u'"),
                ("w'", "g", "x'"),
                ("u'", "e", "w'"),
                ("u'", "d", "w'"),
                ("v'", "d", "w'"),
                ("v'", "c", "w'"),
            ],
        ),
        "branching_aft_fischer" => {
            // hand transcription of the branching AFT Fischer cover:
            // levels r=0, x=y=1, z=2, so copies r_1; x_1,x_2; y_1,y_2;
            // z_1..z_4, with returns from every non-root copy
            LabelledGraph::from_edges(
                "branching_aft_fischer",
                &[
                    ("r_1", "a_r", "r_1"),
                    ("x_1", "a_x", "x_1"),
                    ("x_2", "a_x", "x_2"),
                    ("y_1", "a_y", "y_1"),
                    ("y_2", "a_y", "y_2"),
                    ("z_1", "a_z", "z_1"),
                    ("z_2", "a_z", "z_2"),
                    ("z_3", "a_z", "z_3"),
                    ("z_4", "a_z", "z_4"),
                    ("r_1", "a_r_x_1", "x_1"),
                    ("r_1", "a_r_x_2", "x_2"),
                    ("r_1", "a_r_y_1", "y_1"),
                    ("r_1", "a_r_y_2", "y_2"),
                    ("r_1", "a_r_z_1", "z_1"),
                    ("r_1", "a_r_z_2", "z_2"),
                    ("r_1", "a_r_z_3", "z_3"),
                    ("r_1", "a_r_z_4", "z_4"),
                    ("y_1", "a_y_z_1", "z_1"),
                    ("y_1", "a_y_z_2", "z_2"),
                    ("y_2", "a_y_z_1", "z_3"),
                    ("y_2", "a_y_z_2", "z_4"),
                    ("x_1", "ret_x_1", "r_1"),
                    ("x_2", "ret_x_2", "r_1"),
                    ("y_1", "ret_y_1", "r_1"),
                    ("y_2", "ret_y_2", "r_1"),
                    ("z_1", "ret_z_1", "r_1"),
                    ("z_2", "ret_z_2", "r_1"),
                    ("z_3", "ret_z_3", "r_1"),
                    ("z_4", "ret_z_4", "r_1"),
                ],
            )
        }
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn charge_constrained_shapes() {
        let g3 = charge_constrained(3).unwrap();
        assert_eq!(g3.vertex_count(), 4);
        assert_eq!(g3.edges().len(), 6);
        let g1 = charge_constrained(1).unwrap();
        assert_eq!(g1.vertex_count(), 2);
        assert_eq!(g1.edges().len(), 2);
        assert!(charge_constrained(0).is_err());
        // the figure fixture is the same graph up to renaming
        let fx = fixture("3cc_fischer").unwrap();
        assert!(crate::iso::labelled_graph_isomorphic(&g3, &fx));
    }

    #[test]
    fn closure_of_chain_adds_shortcut() {
        let d = RootedDag::new(
            vec!["r".into(), "a".into(), "b".into()],
            "r",
            &[("r", "a"), ("a", "b")],
        )
        .unwrap();
        let c = transitive_closure_dag(&d);
        assert_eq!(c.arcs, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn closure_of_branching_dag_is_itself() {
        let d = branching_dag();
        let c = transitive_closure_dag(&d);
        assert_eq!(c.arcs, d.arcs);
    }

    #[test]
    fn closure_of_antichain_is_unchanged() {
        let d = RootedDag::new(
            vec!["r".into(), "a".into(), "b".into()],
            "r",
            &[("r", "a"), ("r", "b")],
        )
        .unwrap();
        let c = transitive_closure_dag(&d);
        assert_eq!(c.arcs, d.arcs);
    }

    #[test]
    fn dag_validation_rejects_circuits_and_unreachable() {
        assert!(RootedDag::new(
            vec!["r".into(), "a".into()],
            "r",
            &[("r", "a"), ("a", "r")]
        )
        .is_err());
        assert!(RootedDag::new(
            vec!["r".into(), "a".into(), "b".into()],
            "r",
            &[("r", "a")]
        )
        .is_err());
    }

    #[test]
    fn realize_pcg_matches_hand_transcription() {
        let g = realize_pcg(&branching_dag(), ReturnEdges::AllNonRoot).unwrap();
        let fx = fixture("branching_aft_fischer").unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert!(crate::iso::labelled_graph_isomorphic(&g, &fx));
    }

    #[test]
    fn realize_pcg_single_vertex_dag() {
        let d = RootedDag::new(vec!["r".into()], "r", &[]).unwrap();
        let g = realize_pcg(&d, ReturnEdges::SinksOnly).unwrap();
        // the root is its own sink, so the return edge is a second loop
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges().len(), 2);
        let g2 = realize_pcg(&d, ReturnEdges::AllNonRoot).unwrap();
        assert_eq!(g2.edges().len(), 1);
    }

    #[test]
    fn realize_pcg_chain_has_two_copies_of_the_leaf() {
        let d = RootedDag::new(vec!["r".into(), "a".into()], "r", &[("r", "a")]).unwrap();
        let g = realize_pcg(&d, ReturnEdges::SinksOnly).unwrap();
        assert_eq!(g.vertex_count(), 3); // r_1, a_1, a_2
        // loops on a_1, a_2 plus returns plus the fan-out from r_1
        assert_eq!(g.edges().len(), 1 + 2 + 2 + 2);
        let p = g.predicates().unwrap();
        assert!(p.left_resolving && p.right_resolving && p.irreducible_graph);
    }

    #[test]
    fn realize_ideal_lattice_single_vertex() {
        let d = RootedDag::new(vec!["r".into()], "r", &[]).unwrap();
        let g = realize_ideal_lattice(&d, ReturnEdges::SinksOnly).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges().len(), 3); // two loops plus the return loop
    }

    #[test]
    fn all_fixtures_are_valid_and_essential() {
        for name in FIXTURES {
            let g = fixture(name).unwrap();
            assert!(g.is_essential(), "fixture {name}");
        }
        assert!(matches!(
            fixture("nope"),
            Err(Error::UnknownFixture(_))
        ));
    }

    #[test]
    fn random_dags_are_valid_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a: Vec<RootedDag> = (0..20).map(|_| RootedDag::random(&mut rng, 5)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b: Vec<RootedDag> = (0..20).map(|_| RootedDag::random(&mut rng, 5)).collect();
        assert_eq!(a, b);
        for d in &a {
            assert!(d.vertices.len() <= 5);
        }
    }
}
