//! The subset automaton of prefix start-sets, the transition relation
//! monoid, and detection of the predecessor classes of right-rays.
//!
//! For a word `w`, `S(w)` is the set of vertices that can start a
//! presentation of `w`. Appending a letter only shrinks the start set, so
//! along any infinite ray the start sets of its prefixes stabilize; the
//! stabilized sets are exactly the start sets of rays, and their
//! predecessor classes are exactly the vertices of the left Krieger
//! cover. The monoid of boolean transition relations makes the
//! stabilization decidable: a set `D` is the limit of some ray iff a
//! relation with domain `D` can reach a cycle among relations with
//! domain `D`.

use std::collections::HashMap;

use crate::bitset::{tarjan_scc, Bits};
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexSet};
use crate::lang::{LangCtx, PredecessorClassKey};

pub(crate) const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// Boolean vertex-by-vertex relation: entry `(u, v)` is set iff a path
/// with the generating word leads from `u` to `v`. Composition is by
/// row-wise OR of masked rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionRelation {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl TransitionRelation {
    pub fn identity(n: usize) -> Self {
        let stride = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * stride];
        for v in 0..n {
            rows[v * stride + v / 64] |= 1 << (v % 64);
        }
        TransitionRelation { n, stride, rows }
    }

    /// Generator for one symbol: `(u, v)` set iff an edge `u --a--> v`
    /// exists.
    pub fn generator(g: &LabelledGraph, symbol: usize) -> Self {
        let n = g.vertex_count();
        let stride = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * stride];
        for e in g.edges() {
            if e.label == symbol {
                rows[e.src * stride + e.dst / 64] |= 1 << (e.dst % 64);
            }
        }
        TransitionRelation { n, stride, rows }
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] & (1 << (v % 64)) != 0
    }

    pub fn compose(&self, other: &TransitionRelation) -> TransitionRelation {
        debug_assert_eq!(self.n, other.n);
        let mut rows = vec![0u64; self.n * self.stride];
        for u in 0..self.n {
            let row = &self.rows[u * self.stride..(u + 1) * self.stride];
            let out = u * self.stride;
            for (wi, &word) in row.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let m = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let mrow = &other.rows[m * self.stride..(m + 1) * self.stride];
                    for (k, &mw) in mrow.iter().enumerate() {
                        rows[out + k] |= mw;
                    }
                }
            }
        }
        TransitionRelation {
            n: self.n,
            stride: self.stride,
            rows,
        }
    }

    /// Vertices with at least one outgoing pair: the start set of the
    /// generating word.
    pub(crate) fn domain_bits(&self) -> Bits {
        let mut b = Bits::new(self.n);
        for u in 0..self.n {
            if self.rows[u * self.stride..(u + 1) * self.stride]
                .iter()
                .any(|&w| w != 0)
            {
                b.insert(u);
            }
        }
        b
    }

    pub fn domain(&self, g: &LabelledGraph) -> VertexSet {
        assert_eq!(g.vertex_count(), self.n);
        VertexSet::from_bits(g.id(), self.domain_bits())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == TransitionRelation::identity(self.n)
    }
}

/// All nonempty prefix start-sets `S(w)` with the transition `U -> aU`.
#[derive(Debug, Clone)]
pub struct ReachableSubsets {
    /// Subsets in BFS discovery order; index 0 is the full vertex set.
    pub subsets: Vec<VertexSet>,
    /// Shortest witness word per subset, ties broken by symbol order.
    pub witnesses: Vec<Vec<String>>,
    /// `transitions[i][symbol]`: index of `aU`, or `None` if empty.
    pub transitions: Vec<Vec<Option<usize>>>,
}

/// Explores `U -> aU` from the full vertex set: every nonempty `S(w)`
/// for `w` in the language, with shortest reversed-reading witnesses.
pub fn reachable_subsets(g: &LabelledGraph) -> Result<ReachableSubsets> {
    reachable_subsets_with_cap(g, crate::lang::DEFAULT_SUBSET_CAP)
}

pub fn reachable_subsets_with_cap(g: &LabelledGraph, cap: usize) -> Result<ReachableSubsets> {
    g.require_essential()?;
    let k = g.alphabet().len();
    let mut ctx = LangCtx::with_cap(g, cap);
    let full = Bits::from_indices(g.vertex_count(), 0..g.vertex_count());
    let start = ctx.intern(full)?;
    debug_assert_eq!(start, 0);
    let mut witnesses: Vec<Vec<String>> = vec![Vec::new()];
    let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = vec![start];
    let mut qi = 0;
    while qi < queue.len() {
        let s = queue[qi];
        qi += 1;
        let mut row = vec![None; k];
        for sym in 0..k {
            if let Some(t) = ctx.step(s, sym)? {
                row[sym] = Some(t);
                if t == witnesses.len() {
                    // freshly interned: witness is the symbol prepended
                    // to the parent witness
                    let mut w = vec![g.symbol(sym).to_string()];
                    w.extend(witnesses[s].iter().cloned());
                    witnesses.push(w);
                    queue.push(t);
                } else if t > witnesses.len() {
                    unreachable!("interning order");
                }
            }
        }
        transitions.push(row);
    }
    let subsets = (0..queue.len())
        .map(|i| VertexSet::from_bits(g.id(), ctx.state_bits(i).clone()))
        .collect();
    Ok(ReachableSubsets {
        subsets,
        witnesses,
        transitions,
    })
}

/// The reachable part of the transition relation monoid, as a
/// deterministic automaton over live (nonempty) relations.
#[derive(Debug, Clone)]
pub struct MonoidExploration {
    /// Live relations in BFS order; index 0 is the identity.
    pub relations: Vec<TransitionRelation>,
    /// Shortest witness word per relation.
    pub witnesses: Vec<Vec<String>>,
    /// `transitions[i][symbol]`: successor under right multiplication,
    /// `None` when the product is the empty (absorbing) relation.
    pub transitions: Vec<Vec<Option<usize>>>,
    /// Interned class-key table and per-relation domain class ids.
    pub keys: Vec<PredecessorClassKey>,
    pub domain_key_ids: Vec<usize>,
}

pub fn relation_monoid(g: &LabelledGraph) -> Result<MonoidExploration> {
    relation_monoid_with_cap(g, DEFAULT_MONOID_CAP)
}

pub fn relation_monoid_with_cap(g: &LabelledGraph, cap: usize) -> Result<MonoidExploration> {
    g.require_essential()?;
    let k = g.alphabet().len();
    let n = g.vertex_count();
    let gens: Vec<TransitionRelation> =
        (0..k).map(|sym| TransitionRelation::generator(g, sym)).collect();

    let mut relations = vec![TransitionRelation::identity(n)];
    let mut index: HashMap<TransitionRelation, usize> = HashMap::new();
    index.insert(relations[0].clone(), 0);
    let mut witnesses: Vec<Vec<String>> = vec![Vec::new()];
    let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
    let mut qi = 0;
    while qi < relations.len() {
        let mut row = vec![None; k];
        for (sym, gen) in gens.iter().enumerate() {
            let prod = relations[qi].compose(gen);
            if prod.is_empty() {
                continue;
            }
            let t = match index.get(&prod) {
                Some(&t) => t,
                None => {
                    if relations.len() >= cap {
                        return Err(Error::StateCapExceeded {
                            kind: "relation monoid",
                            cap,
                        });
                    }
                    let t = relations.len();
                    index.insert(prod.clone(), t);
                    relations.push(prod);
                    let mut w = witnesses[qi].clone();
                    w.push(g.symbol(sym).to_string());
                    witnesses.push(w);
                    t
                }
            };
            row[sym] = Some(t);
        }
        transitions.push(row);
        qi += 1;
    }

    let mut ctx = LangCtx::new(g);
    let mut domain_key_ids = Vec::with_capacity(relations.len());
    for r in &relations {
        domain_key_ids.push(ctx.key_id_of_bits(&r.domain_bits())?);
    }
    let max_key = domain_key_ids.iter().copied().max().unwrap_or(0);
    let keys = (0..=max_key).map(|i| ctx.key_of_id(i)).collect();
    Ok(MonoidExploration {
        relations,
        witnesses,
        transitions,
        keys,
        domain_key_ids,
    })
}

impl MonoidExploration {
    /// Distinct stabilized domains: `D` such that some relation with
    /// domain `D` reaches a cycle lying wholly among domain-`D`
    /// relations. These are exactly the start sets of right-rays.
    pub(crate) fn limit_domain_bits(&self) -> Vec<Bits> {
        let mut by_domain: HashMap<Bits, Vec<usize>> = HashMap::new();
        for (i, r) in self.relations.iter().enumerate() {
            by_domain.entry(r.domain_bits()).or_default().push(i);
        }
        let mut out = Vec::new();
        for (domain, members) in &by_domain {
            let local: HashMap<usize, usize> =
                members.iter().enumerate().map(|(li, &gi)| (gi, li)).collect();
            let adj: Vec<Vec<usize>> = members
                .iter()
                .map(|&gi| {
                    self.transitions[gi]
                        .iter()
                        .filter_map(|t| t.and_then(|t| local.get(&t).copied()))
                        .collect()
                })
                .collect();
            let has_self_loop = adj.iter().enumerate().any(|(v, row)| row.contains(&v));
            let (_, comps) = tarjan_scc(&adj);
            if has_self_loop || comps.iter().any(|c| c.len() >= 2) {
                out.push(domain.clone());
            }
        }
        out.sort();
        out
    }

    /// Witness word of the relation, for reports.
    pub fn witness(&self, i: usize) -> &[String] {
        &self.witnesses[i]
    }
}

/// The set of predecessor classes of right-rays: the vertices of the
/// left Krieger cover.
pub fn krieger_class_keys(g: &LabelledGraph) -> Result<Vec<PredecessorClassKey>> {
    let m = relation_monoid(g)?;
    let mut ctx = LangCtx::new(g);
    let mut keys: Vec<PredecessorClassKey> = Vec::new();
    for d in m.limit_domain_bits() {
        let id = ctx.key_id_of_bits(&d)?;
        keys.push(ctx.key_of_id(id));
    }
    keys.sort();
    keys.dedup();
    Ok(keys)
}

/// Class key of the predecessor set of the eventually periodic ray
/// `w u u u ...`, by stabilizing the relation powers `rel(w) rel(u)^k`.
pub fn periodic_ray_class<S: AsRef<str>>(
    g: &LabelledGraph,
    prefix: &[S],
    period: &[S],
) -> Result<PredecessorClassKey> {
    g.require_essential()?;
    if period.is_empty() {
        return Err(Error::InvalidRay("period must be nonempty".into()));
    }
    let rel_of = |word: &[S]| -> Result<TransitionRelation> {
        let mut r = TransitionRelation::identity(g.vertex_count());
        for s in word {
            let sym = g
                .alphabet()
                .id_of(s.as_ref())
                .ok_or_else(|| Error::UnknownSymbol(s.as_ref().to_string()))?;
            r = r.compose(&TransitionRelation::generator(g, sym));
        }
        Ok(r)
    };
    let rw = rel_of(prefix)?;
    let ru = rel_of(period)?;
    let mut seen: HashMap<TransitionRelation, usize> = HashMap::new();
    let mut cur = rw.compose(&ru);
    loop {
        if cur.is_empty() {
            let show = |w: &[S]| {
                w.iter()
                    .map(|s| s.as_ref().to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            return Err(Error::InvalidRay(format!(
                "{} ({})* leaves the language",
                show(prefix),
                show(period)
            )));
        }
        let k = seen.len();
        if seen.insert(cur.clone(), k).is_some() {
            break;
        }
        cur = cur.compose(&ru);
    }
    // domains are constant along the relation cycle
    let mut ctx = LangCtx::new(g);
    let id = ctx.key_id_of_bits(&cur.domain_bits())?;
    Ok(ctx.key_of_id(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{even_shift, fixture};
    use crate::lang::class_key;

    #[test]
    fn one_loop_graph_monoid_and_subsets() {
        let g = LabelledGraph::from_edges("l", &[("v", "a", "v")]).unwrap();
        let rs = reachable_subsets(&g).unwrap();
        assert_eq!(rs.subsets.len(), 1);
        let m = relation_monoid(&g).unwrap();
        assert_eq!(m.relations.len(), 1);
        assert!(m.relations[0].is_identity());
        assert_eq!(krieger_class_keys(&g).unwrap().len(), 1);
    }

    #[test]
    fn even_shift_subsets_and_witnesses() {
        let g = even_shift();
        let rs = reachable_subsets(&g).unwrap();
        // {A,B}, S(1)={A}, S(10)={B}
        assert_eq!(rs.subsets.len(), 3);
        let names: Vec<String> = rs.subsets.iter().map(|s| g.set_name(s)).collect();
        assert!(names.contains(&"{A,B}".to_string()));
        assert!(names.contains(&"{A}".to_string()));
        assert!(names.contains(&"{B}".to_string()));
        let a_idx = names.iter().position(|n| n == "{A}").unwrap();
        assert_eq!(rs.witnesses[a_idx], vec!["1".to_string()]);
        // {B} = S("01"): only B starts a path labelled 01
        let b_idx = names.iter().position(|n| n == "{B}").unwrap();
        assert_eq!(rs.witnesses[b_idx], vec!["0".to_string(), "1".to_string()]);
    }

    /// Independent oracle: exhaustive closure of the boolean matrices.
    fn brute_monoid_size(g: &LabelledGraph) -> usize {
        let k = g.alphabet().len();
        let gens: Vec<TransitionRelation> =
            (0..k).map(|s| TransitionRelation::generator(g, s)).collect();
        let mut seen = vec![TransitionRelation::identity(g.vertex_count())];
        loop {
            let mut added = false;
            for i in 0..seen.len() {
                for gen in &gens {
                    let p = seen[i].compose(gen);
                    if !p.is_empty() && !seen.contains(&p) {
                        seen.push(p);
                        added = true;
                    }
                }
            }
            if !added {
                return seen.len();
            }
        }
    }

    #[test]
    fn even_shift_monoid_matches_brute_force() {
        let g = even_shift();
        let m = relation_monoid(&g).unwrap();
        assert_eq!(m.relations.len(), brute_monoid_size(&g));
        assert!(m.relations.len() <= 8);
    }

    #[test]
    fn two_invariants_fixture_monoid_terminates() {
        let g = fixture("2inv_left_fischer").unwrap();
        let m = relation_monoid(&g).unwrap();
        assert_eq!(m.relations.len(), brute_monoid_size(&g));
    }

    #[test]
    fn monoid_cap_is_enforced() {
        let g = fixture("2inv_left_fischer").unwrap();
        assert!(matches!(
            relation_monoid_with_cap(&g, 3),
            Err(Error::StateCapExceeded { .. })
        ));
    }

    #[test]
    fn even_shift_krieger_classes() {
        let g = even_shift();
        let keys = krieger_class_keys(&g).unwrap();
        assert_eq!(keys.len(), 3);
        // P3 = X^- is the class of the full vertex set
        let p3 = class_key(&g, &g.full_set()).unwrap();
        assert!(keys.contains(&p3));
        let p1 = class_key(&g, &g.set_of_names(["A"]).unwrap()).unwrap();
        assert!(keys.contains(&p1));
    }

    #[test]
    fn three_charge_fixture_has_nine_krieger_classes() {
        let g = fixture("3cc_fischer").unwrap();
        assert_eq!(krieger_class_keys(&g).unwrap().len(), 9);
    }

    #[test]
    fn periodic_ray_classes_on_even_shift() {
        let g = even_shift();
        // S(0^k) is constantly {A,B}: the class of X^-
        let p3 = periodic_ray_class(&g, &[] as &[&str], &["0"]).unwrap();
        assert_eq!(p3, class_key(&g, &g.full_set()).unwrap());
        // rays starting with 1 have predecessor class P1
        let p1 = class_key(&g, &g.set_of_names(["A"]).unwrap()).unwrap();
        assert_eq!(periodic_ray_class(&g, &[] as &[&str], &["1"]).unwrap(), p1);
        assert_eq!(
            periodic_ray_class(&g, &[] as &[&str], &["1", "0", "0"]).unwrap(),
            p1
        );
        // an odd block of zeros in front gives P2
        let p2 = class_key(&g, &g.set_of_names(["B"]).unwrap()).unwrap();
        assert_eq!(periodic_ray_class(&g, &["0"], &["1"]).unwrap(), p2);
        // (10)* contains the forbidden word 101
        assert!(matches!(
            periodic_ray_class(&g, &[] as &[&str], &["1", "0"]),
            Err(Error::InvalidRay(_))
        ));
    }

    #[test]
    fn domains_match_subset_transitions_up_to_length_six() {
        // cross-module consistency: domain(rel(w)) == S(w)
        for name in ["even_shift", "3cc_fischer", "gfc_justifying"] {
            let g = fixture(name).unwrap();
            let k = g.alphabet().len();
            let gens: Vec<TransitionRelation> =
                (0..k).map(|s| TransitionRelation::generator(&g, s)).collect();
            let rs = reachable_subsets(&g).unwrap();
            // walk all words up to length 6 in the subset automaton and
            // compose relations in parallel
            fn rec(
                g: &LabelledGraph,
                rs: &ReachableSubsets,
                gens: &[TransitionRelation],
                state: usize,
                rel: &TransitionRelation,
                depth: usize,
            ) {
                assert_eq!(
                    rel.domain(g),
                    rs.subsets[state],
                    "domain mismatch in {}",
                    g.name()
                );
                if depth == 0 {
                    return;
                }
                for sym in 0..gens.len() {
                    // prepending a symbol to the witness word means
                    // multiplying by the generator on the left
                    if let Some(t) = rs.transitions[state][sym] {
                        let next = gens[sym].compose(rel);
                        rec(g, rs, gens, t, &next, depth - 1);
                    }
                }
            }
            rec(
                &g,
                &rs,
                &gens,
                0,
                &TransitionRelation::identity(g.vertex_count()),
                6,
            );
        }
    }
}
