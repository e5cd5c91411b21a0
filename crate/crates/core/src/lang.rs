//! Decision procedures for predecessor languages and presented shift
//! languages.
//!
//! The finite-word predecessor language of a vertex set `U` is the set of
//! words labelling some path that terminates in `U`. On a finite essential
//! graph, two vertex sets have the same predecessor language exactly when
//! the predecessor sets (of left-rays) of their unions coincide, so this
//! module decides the union equivalence on finite words: reversed words
//! run over the transposed graph via subset construction, the resulting
//! acceptor is minimized by partition refinement, and its canonical form
//! is the class key.

use std::collections::HashMap;

use crate::bitset::Bits;
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexSet};

pub(crate) const DEFAULT_SUBSET_CAP: usize = 100_000;

/// A deterministic acceptor with a partial transition map in which every
/// state is accepting; the dead state is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicAcceptor {
    pub alphabet: Vec<String>,
    pub start: usize,
    /// `transitions[state][symbol]`, indices into the state list.
    pub transitions: Vec<Vec<Option<usize>>>,
}

impl DeterministicAcceptor {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// Runs the acceptor; the word is accepted iff every step is defined.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut state = self.start;
        for s in word {
            let Ok(sym) = self.alphabet.binary_search_by(|a| a.as_str().cmp(s.as_ref())) else {
                return false;
            };
            match self.transitions[state][sym] {
                Some(next) => state = next,
                None => return false,
            }
        }
        true
    }
}

/// Canonical form of a minimized acceptor: states renumbered by BFS over
/// the sorted alphabet, dead state omitted, start state `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct CanonicalDfa {
    pub states: usize,
    pub edges: Vec<(usize, String, usize)>,
}

/// Fingerprint of a predecessor language; equal keys mean equal
/// languages, across graphs as well as within one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredecessorClassKey(pub(crate) CanonicalDfa);

impl PredecessorClassKey {
    /// Stable short hex digest, used in reports and DOT output.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.0.states.to_le_bytes());
        for (a, s, b) in &self.0.edges {
            h.update(a.to_le_bytes());
            h.update(s.as_bytes());
            h.update([0xff]);
            h.update(b.to_le_bytes());
        }
        let out = h.finalize();
        out[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Minimizes a deterministic partial automaton in which all states are
/// accepting, then renders the canonical form. Moore-style partition
/// refinement; the implicit dead state forms the initial reject block.
pub(crate) fn canonical_min(
    transitions: &[Vec<Option<usize>>],
    start: usize,
    symbols: &[String],
) -> CanonicalDfa {
    let n = transitions.len();
    let k = symbols.len();
    // state n is the dead state
    let mut block = vec![0usize; n + 1];
    block[n] = 1;
    let mut block_count = 2;
    loop {
        // signature: (current block, successor blocks)
        let mut sig_map: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = vec![0usize; n + 1];
        for s in 0..=n {
            let succ: Vec<usize> = (0..k)
                .map(|a| {
                    if s == n {
                        block[n]
                    } else {
                        block[transitions[s][a].unwrap_or(n)]
                    }
                })
                .collect();
            let id = sig_map.len();
            let slot = *sig_map.entry((block[s], succ)).or_insert(id);
            next[s] = slot;
        }
        let next_count = sig_map.len();
        if next_count == block_count {
            block = next;
            break;
        }
        block = next;
        block_count = next_count;
    }

    let dead_block = block[n];
    // BFS over blocks from the start block, sorted alphabet order
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut queue = vec![block[start]];
    order.insert(block[start], 0);
    // representative state per block
    let mut rep: HashMap<usize, usize> = HashMap::new();
    for s in 0..n {
        rep.entry(block[s]).or_insert(s);
    }
    let mut edges = Vec::new();
    let mut qi = 0;
    while qi < queue.len() {
        let b = queue[qi];
        qi += 1;
        let s = rep[&b];
        for a in 0..k {
            if let Some(t) = transitions[s][a] {
                let tb = block[t];
                if tb == dead_block {
                    continue;
                }
                let next_id = order.len();
                let id = *order.entry(tb).or_insert_with(|| {
                    queue.push(tb);
                    next_id
                });
                edges.push((order[&b], symbols[a].clone(), id));
            }
        }
    }
    edges.sort();
    CanonicalDfa {
        states: order.len(),
        edges,
    }
}

/// Shared per-graph machinery: the deterministic prepend automaton over
/// vertex subsets (`U --a--> aU`), interned states, and interned class
/// keys. The same subset states back predecessor acceptors, class keys,
/// inclusion tests, and the cover constructions, so results are memoized
/// here.
pub(crate) struct LangCtx<'g> {
    pub g: &'g LabelledGraph,
    cap: usize,
    states: Vec<Bits>,
    index: HashMap<Bits, usize>,
    trans: Vec<Vec<Option<usize>>>,
    keys: Vec<CanonicalDfa>,
    key_index: HashMap<CanonicalDfa, usize>,
    key_of_state: HashMap<usize, usize>,
}

impl<'g> LangCtx<'g> {
    pub fn new(g: &'g LabelledGraph) -> Self {
        Self::with_cap(g, DEFAULT_SUBSET_CAP)
    }

    pub fn with_cap(g: &'g LabelledGraph, cap: usize) -> Self {
        LangCtx {
            g,
            cap,
            states: Vec::new(),
            index: HashMap::new(),
            trans: Vec::new(),
            keys: Vec::new(),
            key_index: HashMap::new(),
            key_of_state: HashMap::new(),
        }
    }

    /// `aU`: sources of edges labelled `a` that terminate in `U`.
    pub fn prepend(&self, sym: usize, bits: &Bits) -> Bits {
        let mut out = Bits::new(self.g.vertex_count());
        for e in self.g.edges() {
            if e.label == sym && bits.contains(e.dst) {
                out.insert(e.src);
            }
        }
        out
    }

    pub fn intern(&mut self, bits: Bits) -> Result<usize> {
        if let Some(&i) = self.index.get(&bits) {
            return Ok(i);
        }
        if self.states.len() >= self.cap {
            return Err(Error::StateCapExceeded {
                kind: "subset construction",
                cap: self.cap,
            });
        }
        let i = self.states.len();
        self.index.insert(bits.clone(), i);
        self.states.push(bits);
        self.trans.push(vec![None; self.g.alphabet().len()]);
        Ok(i)
    }

    pub fn state_bits(&self, i: usize) -> &Bits {
        &self.states[i]
    }

    /// Transition in the prepend automaton, lazily computed; `None` for
    /// the empty successor.
    pub fn step(&mut self, state: usize, sym: usize) -> Result<Option<usize>> {
        if let Some(t) = self.trans[state][sym] {
            return Ok(Some(t).filter(|&t| !self.states[t].is_empty()));
        }
        let next = self.prepend(sym, &self.states[state]);
        if next.is_empty() {
            return Ok(None);
        }
        let t = self.intern(next)?;
        self.trans[state][sym] = Some(t);
        Ok(Some(t))
    }

    /// All states reachable from `start`, including it, in BFS order.
    fn explore(&mut self, start: usize) -> Result<Vec<usize>> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut queue = vec![start];
        seen.insert(start, 0);
        let mut qi = 0;
        while qi < queue.len() {
            let s = queue[qi];
            qi += 1;
            for sym in 0..self.g.alphabet().len() {
                if let Some(t) = self.step(s, sym)? {
                    if !seen.contains_key(&t) {
                        seen.insert(t, queue.len());
                        queue.push(t);
                    }
                }
            }
        }
        Ok(queue)
    }

    fn intern_key(&mut self, dfa: CanonicalDfa) -> usize {
        if let Some(&k) = self.key_index.get(&dfa) {
            return k;
        }
        let k = self.keys.len();
        self.key_index.insert(dfa.clone(), k);
        self.keys.push(dfa);
        k
    }

    /// Interned class-key id of the subset state. Equal ids iff equal
    /// predecessor languages.
    pub fn key_id(&mut self, state: usize) -> Result<usize> {
        if let Some(&k) = self.key_of_state.get(&state) {
            return Ok(k);
        }
        let reach = self.explore(state)?;
        let local: HashMap<usize, usize> =
            reach.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut table = vec![vec![None; self.g.alphabet().len()]; reach.len()];
        for (i, &s) in reach.iter().enumerate() {
            for sym in 0..self.g.alphabet().len() {
                table[i][sym] = self.step(s, sym)?.map(|t| local[&t]);
            }
        }
        let dfa = canonical_min(&table, 0, self.g.alphabet().symbols());
        let k = self.intern_key(dfa);
        self.key_of_state.insert(state, k);
        Ok(k)
    }

    pub fn key_id_of_bits(&mut self, bits: &Bits) -> Result<usize> {
        let s = self.intern(bits.clone())?;
        self.key_id(s)
    }

    pub fn key_id_of_indices<I: IntoIterator<Item = usize>>(&mut self, iter: I) -> Result<usize> {
        let bits = Bits::from_indices(self.g.vertex_count(), iter);
        self.key_id_of_bits(&bits)
    }

    pub fn key_of_id(&self, id: usize) -> PredecessorClassKey {
        PredecessorClassKey(self.keys[id].clone())
    }

    /// Language inclusion via product reachability: a reachable pair with
    /// a live left component and dead right component refutes it.
    pub fn subset_bits(&mut self, a: &Bits, b: &Bits) -> Result<bool> {
        if a.is_empty() {
            return Ok(true);
        }
        if b.is_empty() {
            return Ok(false);
        }
        let sa = self.intern(a.clone())?;
        let sb = self.intern(b.clone())?;
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![(sa, sb)];
        seen.insert((sa, sb));
        while let Some((x, y)) = queue.pop() {
            for sym in 0..self.g.alphabet().len() {
                match (self.step(x, sym)?, self.step(y, sym)?) {
                    (Some(_), None) => return Ok(false),
                    (Some(nx), Some(ny)) => {
                        if seen.insert((nx, ny)) {
                            queue.push((nx, ny));
                        }
                    }
                    (None, _) => {}
                }
            }
        }
        Ok(true)
    }

    /// Builds the minimized acceptor (over reversed words) for the
    /// predecessor language of a subset state.
    pub fn acceptor(&mut self, state: usize) -> Result<DeterministicAcceptor> {
        let key = self.key_id(state)?;
        let dfa = &self.keys[key];
        let symbols = self.g.alphabet().symbols();
        let mut transitions = vec![vec![None; symbols.len()]; dfa.states];
        for (a, s, b) in &dfa.edges {
            let sym = self.g.alphabet().id_of(s).expect("key symbol in alphabet");
            transitions[*a][sym] = Some(*b);
        }
        Ok(DeterministicAcceptor {
            alphabet: symbols.to_vec(),
            start: 0,
            transitions,
        })
    }

    /// Unminimized acceptor for the same language, for cross-checking the
    /// minimizer in tests.
    #[cfg(test)]
    pub fn raw_acceptor(&mut self, state: usize) -> Result<DeterministicAcceptor> {
        let reach = self.explore(state)?;
        let local: HashMap<usize, usize> =
            reach.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut transitions = vec![vec![None; self.g.alphabet().len()]; reach.len()];
        for (i, &s) in reach.iter().enumerate() {
            for sym in 0..self.g.alphabet().len() {
                transitions[i][sym] = self.step(s, sym)?.map(|t| local[&t]);
            }
        }
        Ok(DeterministicAcceptor {
            alphabet: self.g.alphabet().symbols().to_vec(),
            start: 0,
            transitions,
        })
    }
}

fn checked_set<'a>(g: &LabelledGraph, set: &'a VertexSet) -> Result<&'a VertexSet> {
    if set.graph_id() != g.id() {
        return Err(Error::GraphMismatch);
    }
    if set.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(set)
}

/// Minimized acceptor of the finite-word predecessor language of `set`,
/// read right to left: it runs over reversed words on the transposed
/// graph via subset construction.
pub fn predecessor_acceptor(g: &LabelledGraph, set: &VertexSet) -> Result<DeterministicAcceptor> {
    g.require_essential()?;
    checked_set(g, set)?;
    let mut ctx = LangCtx::new(g);
    let s = ctx.intern(set.bits().clone())?;
    ctx.acceptor(s)
}

/// Equality of predecessor languages of two vertex sets.
pub fn pred_equal(g: &LabelledGraph, a: &VertexSet, b: &VertexSet) -> Result<bool> {
    g.require_essential()?;
    checked_set(g, a)?;
    checked_set(g, b)?;
    let mut ctx = LangCtx::new(g);
    Ok(ctx.key_id_of_bits(a.bits())? == ctx.key_id_of_bits(b.bits())?)
}

/// Inclusion of predecessor languages, decided by product emptiness.
pub fn pred_subset(g: &LabelledGraph, a: &VertexSet, b: &VertexSet) -> Result<bool> {
    g.require_essential()?;
    checked_set(g, a)?;
    checked_set(g, b)?;
    let mut ctx = LangCtx::new(g);
    ctx.subset_bits(a.bits(), b.bits())
}

/// Canonical fingerprint of the predecessor language of `set`.
pub fn class_key(g: &LabelledGraph, set: &VertexSet) -> Result<PredecessorClassKey> {
    g.require_essential()?;
    checked_set(g, set)?;
    let mut ctx = LangCtx::new(g);
    let id = ctx.key_id_of_bits(set.bits())?;
    Ok(ctx.key_of_id(id))
}

/// Canonical form of the finite-path label language of a graph: the
/// label automaton with all states initial and accepting, determinized
/// and minimized. For essential graphs this is the language of the
/// presented shift.
fn factor_language_key(g: &LabelledGraph) -> Result<CanonicalDfa> {
    let symbols = g.alphabet().symbols();
    let mut states: Vec<Bits> = Vec::new();
    let mut index: HashMap<Bits, usize> = HashMap::new();
    let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
    let full = Bits::from_indices(g.vertex_count(), 0..g.vertex_count());
    index.insert(full.clone(), 0);
    states.push(full);
    trans.push(vec![None; symbols.len()]);
    let mut qi = 0;
    while qi < states.len() {
        for sym in 0..symbols.len() {
            let mut next = Bits::new(g.vertex_count());
            for e in g.edges() {
                if e.label == sym && states[qi].contains(e.src) {
                    next.insert(e.dst);
                }
            }
            if next.is_empty() {
                continue;
            }
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= DEFAULT_SUBSET_CAP {
                        return Err(Error::StateCapExceeded {
                            kind: "factor language determinization",
                            cap: DEFAULT_SUBSET_CAP,
                        });
                    }
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    trans.push(vec![None; symbols.len()]);
                    t
                }
            };
            trans[qi][sym] = Some(t);
        }
        qi += 1;
    }
    Ok(canonical_min(&trans, 0, symbols))
}

/// Whether two graphs present the same sofic shift, i.e. their factor
/// languages coincide.
pub fn shift_language_equal(g1: &LabelledGraph, g2: &LabelledGraph) -> Result<bool> {
    Ok(factor_language_key(g1)? == factor_language_key(g2)?)
}

/// Whether some path carries the label sequence `word`. Unknown symbols
/// make it false; the empty word is always presentable.
pub fn word_presentable<S: AsRef<str>>(g: &LabelledGraph, word: &[S]) -> bool {
    let mut current = Bits::from_indices(g.vertex_count(), 0..g.vertex_count());
    for s in word {
        let Some(sym) = g.alphabet().id_of(s.as_ref()) else {
            return false;
        };
        let mut next = Bits::new(g.vertex_count());
        for e in g.edges() {
            if e.label == sym && current.contains(e.src) {
                next.insert(e.dst);
            }
        }
        if next.is_empty() {
            return false;
        }
        current = next;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::even_shift;

    /// Brute force: all words of length <= max over the alphabet that
    /// label a path terminating in `set`, as reversed-reading strings.
    fn brute_pred_words(g: &LabelledGraph, set: &VertexSet, max: usize) -> Vec<Vec<String>> {
        let symbols: Vec<String> = g.alphabet().symbols().to_vec();
        let mut out = Vec::new();
        let mut word: Vec<usize> = Vec::new();
        fn ends_in(g: &LabelledGraph, word: &[usize], set: &VertexSet) -> bool {
            // run forward from every vertex, check terminal intersects set
            let mut cur: Vec<usize> = (0..g.vertex_count()).collect();
            for &sym in word {
                let mut next = Vec::new();
                for e in g.edges() {
                    if e.label == sym && cur.contains(&e.src) && !next.contains(&e.dst) {
                        next.push(e.dst);
                    }
                }
                cur = next;
                if cur.is_empty() {
                    return false;
                }
            }
            cur.iter().any(|&v| set.contains(v))
        }
        fn rec(
            g: &LabelledGraph,
            set: &VertexSet,
            word: &mut Vec<usize>,
            max: usize,
            symbols: &[String],
            out: &mut Vec<Vec<String>>,
        ) {
            if ends_in(g, word, set) {
                out.push(word.iter().map(|&s| symbols[s].clone()).collect());
            }
            if word.len() == max {
                return;
            }
            for sym in 0..symbols.len() {
                word.push(sym);
                rec(g, set, word, max, symbols, out);
                word.pop();
            }
        }
        rec(g, set, &mut word, max, &symbols, &mut out);
        out
    }

    fn all_words(symbols: &[String], max: usize) -> Vec<Vec<String>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &layer {
                for s in symbols {
                    let mut w2: Vec<String> = w.clone();
                    w2.push(s.clone());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn acceptor_matches_brute_force_on_even_shift_a() {
        let g = even_shift();
        let set = g.set_of_names(["A"]).unwrap();
        let acc = predecessor_acceptor(&g, &set).unwrap();
        let expected = brute_pred_words(&g, &set, 6);
        for w in all_words(g.alphabet().symbols(), 6) {
            // the acceptor reads reversed words
            let mut rev = w.clone();
            rev.reverse();
            let brute = expected.contains(&w);
            assert_eq!(acc.accepts(&rev), brute, "word {w:?}");
        }
        // spot checks: epsilon, words ending in 1, words ending 1 0^even,
        // and all-zero words are predecessors of A
        assert!(acc.accepts::<&str>(&[]));
        assert!(acc.accepts(&["1"]));
        assert!(acc.accepts(&["0", "0", "1"])); // reversed "100"
        assert!(acc.accepts(&["0"]));
        assert!(!acc.accepts(&["0", "1"])); // reversed "10"
    }

    #[test]
    fn full_vertex_set_accepts_whole_language_reversed() {
        let g = even_shift();
        let set = g.full_set();
        let acc = predecessor_acceptor(&g, &set).unwrap();
        for w in all_words(g.alphabet().symbols(), 6) {
            let mut rev: Vec<String> = w.clone();
            rev.reverse();
            assert_eq!(acc.accepts(&rev), word_presentable(&g, &w), "word {w:?}");
        }
    }

    #[test]
    fn pred_equal_and_subset_on_even_shift() {
        let g = even_shift();
        let a = g.set_of_names(["A"]).unwrap();
        let ab = g.full_set();
        assert!(pred_equal(&g, &a, &a).unwrap());
        assert!(!pred_equal(&g, &ab, &a).unwrap());
        assert!(pred_subset(&g, &a, &ab).unwrap());
        assert!(!pred_subset(&g, &ab, &a).unwrap());
    }

    #[test]
    fn class_key_reflexive_and_distinct_on_separated_graph() {
        let g = even_shift();
        let a = g.set_of_names(["A"]).unwrap();
        let b = g.set_of_names(["B"]).unwrap();
        assert_eq!(class_key(&g, &a).unwrap(), class_key(&g, &a).unwrap());
        assert_ne!(class_key(&g, &a).unwrap(), class_key(&g, &b).unwrap());
    }

    #[test]
    fn shift_language_equal_is_reflexive_and_detects_difference() {
        let g = even_shift();
        assert!(shift_language_equal(&g, &g).unwrap());
        let full = crate::graph::LabelledGraph::from_edges(
            "full",
            &[("v", "0", "v"), ("v", "1", "v")],
        )
        .unwrap();
        assert!(!shift_language_equal(&g, &full).unwrap());
    }

    #[test]
    fn word_presentable_even_shift() {
        let g = even_shift();
        assert!(word_presentable::<&str>(&g, &[]));
        assert!(!word_presentable(&g, &["1", "0", "1"]));
        assert!(word_presentable(&g, &["1", "0", "0", "1"]));
        assert!(!word_presentable(&g, &["2"]));
    }

    #[test]
    fn minimization_preserves_language_up_to_twice_state_count() {
        let g = even_shift();
        let set = g.set_of_names(["A"]).unwrap();
        let mut ctx = LangCtx::new(&g);
        let s = ctx.intern(set.bits().clone()).unwrap();
        let raw = ctx.raw_acceptor(s).unwrap();
        let min = ctx.acceptor(s).unwrap();
        assert!(min.state_count() <= raw.state_count());
        let bound = 2 * raw.state_count();
        for w in all_words(g.alphabet().symbols(), bound) {
            assert_eq!(raw.accepts(&w), min.accepts(&w), "word {w:?}");
        }
    }
}
