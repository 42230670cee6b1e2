//! Confusability graphs, channel hypergraphs and the exact combinatorics on
//! them: maximum independent set, maximal cliques, completeness.

use std::fmt::Write as _;

/// Fixed-capacity vertex set backed by 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn and_not(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// Simple undirected graph without self-loops on labeled vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            adj: vec![VertexSet::empty(n); n],
        }
    }

    pub fn unlabeled(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::unlabeled(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::unlabeled(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.order())
            .flat_map(|a| {
                self.adj[a]
                    .iter()
                    .filter(move |&b| b > a)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && !self.adjacent(a, b)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{}\" {{\n", escape(name));
        for l in &self.labels {
            let _ = writeln!(out, "  \"{}\";", escape(l));
        }
        for (a, b) in self.edges() {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\";",
                escape(&self.labels[a]),
                escape(&self.labels[b])
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A labeled hyperedge over vertex indices, sorted ascending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hyperedge {
    pub label: String,
    pub vertices: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    labels: Vec<String>,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Empty hyperedges are dropped with a warning.
    pub fn new(labels: Vec<String>, edges: Vec<Hyperedge>) -> Self {
        let edges = edges
            .into_iter()
            .filter_map(|mut e| {
                if e.vertices.is_empty() {
                    log::warn!("dropping empty hyperedge {:?}", e.label);
                    return None;
                }
                e.vertices.sort_unstable();
                e.vertices.dedup();
                Some(e)
            })
            .collect();
        Self { labels, edges }
    }

    /// Convenience constructor with hyperedges labeled `e1, e2, ...`.
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Self {
        Self::new(
            (1..=n).map(|i| i.to_string()).collect(),
            sets.iter()
                .enumerate()
                .map(|(i, s)| Hyperedge {
                    label: format!("e{}", i + 1),
                    vertices: s.clone(),
                })
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// The graph in which two vertices are adjacent iff some hyperedge holds both.
    pub fn two_section(&self) -> Graph {
        let mut g = Graph::new(self.labels.clone());
        for e in &self.edges {
            for (i, &a) in e.vertices.iter().enumerate() {
                for &b in &e.vertices[i + 1..] {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndependentSetResult {
    pub size: usize,
    /// Lexicographically least maximum independent set, by vertex index.
    pub witness: Vec<usize>,
    /// Nodes expanded by the search that established `size`.
    pub node_count: u64,
}

/// Branch and bound for the maximum independent set. Candidates are
/// partitioned greedily into cliques of `g`; the number of cliques bounds how
/// many more vertices can be added.
struct MisSearch<'a> {
    g: &'a Graph,
    /// Vertex processing order: descending degree, ties by index.
    order: Vec<usize>,
    best: usize,
    best_set: Vec<usize>,
    nodes: u64,
    /// When set, stop as soon as an independent set of this size is found.
    target: Option<usize>,
}

impl<'a> MisSearch<'a> {
    fn new(g: &'a Graph, target: Option<usize>) -> Self {
        let mut order: Vec<usize> = (0..g.order()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        Self {
            g,
            order,
            best: 0,
            best_set: Vec::new(),
            nodes: 0,
            target,
        }
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|t| self.best >= t)
    }

    /// Greedy clique cover of `cand`: returns vertices with the running
    /// number of cliques used, in cover order.
    fn cover(&self, cand: &VertexSet) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut out = Vec::with_capacity(cand.len());
        for &v in self.order.iter().filter(|&&v| cand.contains(v)) {
            let k = classes
                .iter()
                .position(|c| c.iter().all(|&u| self.g.adjacent(u, v)));
            match k {
                Some(k) => classes[k].push(v),
                None => classes.push(vec![v]),
            }
        }
        for (k, c) in classes.iter().enumerate() {
            for &v in c {
                out.push((v, k + 1));
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut cand: VertexSet) {
        self.nodes += 1;
        if cand.is_empty() {
            if current.len() > self.best {
                self.best = current.len();
                self.best_set = current.clone();
            }
            return;
        }
        let cover = self.cover(&cand);
        for &(v, bound) in cover.iter().rev() {
            if current.len() + bound <= self.best || self.done() {
                return;
            }
            current.push(v);
            let mut next = cand.and_not(self.g.neighbors(v));
            next.remove(v);
            self.expand(current, next);
            current.pop();
            cand.remove(v);
        }
        if current.len() > self.best {
            self.best = current.len();
            self.best_set = current.clone();
        }
    }
}

fn mis_within(g: &Graph, cand: VertexSet, target: Option<usize>) -> (usize, u64) {
    let mut s = MisSearch::new(g, target);
    s.expand(&mut Vec::new(), cand);
    (s.best, s.nodes)
}

/// Exact maximum independent set with a canonical witness.
pub fn max_independent_set(g: &Graph) -> IndependentSetResult {
    let n = g.order();
    if n == 0 {
        return IndependentSetResult {
            size: 0,
            witness: Vec::new(),
            node_count: 0,
        };
    }
    let (size, node_count) = mis_within(g, VertexSet::full(n), None);

    // Extract the lexicographically least witness: commit to the smallest
    // vertex that still extends to a maximum set.
    let mut witness = Vec::with_capacity(size);
    let mut cand = VertexSet::full(n);
    while witness.len() < size {
        let need = size - witness.len() - 1;
        let pick = cand
            .iter()
            .find(|&v| {
                let mut rest = cand.and_not(g.neighbors(v));
                for u in 0..=v {
                    rest.remove(u);
                }
                need == 0 || mis_within(g, rest, Some(need)).0 >= need
            })
            .expect("a maximum set extends from the committed prefix");
        witness.push(pick);
        let mut rest = cand.and_not(g.neighbors(pick));
        for u in 0..=pick {
            rest.remove(u);
        }
        cand = rest;
    }
    debug_assert!(g.is_independent(&witness));
    IndependentSetResult {
        size,
        witness,
        node_count,
    }
}

/// All maximal cliques, each sorted, the list sorted lexicographically.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    fn rec(
        g: &Graph,
        r: &mut Vec<usize>,
        p: VertexSet,
        mut x: VertexSet,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        // pivot: vertex of P ∪ X with the most neighbours in P
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.and(g.neighbors(u)).len(), std::cmp::Reverse(u)))
            .expect("P is nonempty");
        let mut p = p;
        let todo: Vec<usize> = p.and_not(g.neighbors(pivot)).iter().collect();
        for v in todo {
            r.push(v);
            rec(g, r, p.and(g.neighbors(v)), x.and(g.neighbors(v)), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let n = g.order();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(
        g,
        &mut Vec::new(),
        VertexSet::full(n),
        VertexSet::empty(n),
        &mut out,
    );
    out.sort();
    out
}

pub fn is_complete(g: &Graph) -> bool {
    let n = g.order();
    (0..n).all(|v| g.degree(v) == n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_mis(g: &Graph) -> usize {
        let n = g.order();
        (0u32..1 << n)
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|&i| m & (1 << i) != 0).collect();
                g.is_independent(&s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn brute_maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.order();
        let cliques: Vec<Vec<usize>> = (1u32..1 << n)
            .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s))
            .collect();
        let mut out: Vec<Vec<usize>> = cliques
            .iter()
            .filter(|c| {
                !cliques
                    .iter()
                    .any(|d| d.len() > c.len() && c.iter().all(|v| d.contains(v)))
            })
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn mis_small_cases() {
        assert_eq!(max_independent_set(&Graph::complete(4)).size, 1);
        let e = max_independent_set(&Graph::unlabeled(6));
        assert_eq!(e.size, 6);
        assert_eq!(e.witness, vec![0, 1, 2, 3, 4, 5]);
        let c5 = max_independent_set(&Graph::cycle(5));
        assert_eq!(c5.size, brute_mis(&Graph::cycle(5)));
        assert_eq!(c5.size, 2);
        assert_eq!(c5.witness, vec![0, 2]);
        assert_eq!(max_independent_set(&Graph::unlabeled(0)).size, 0);
    }

    #[test]
    fn cliques_small_cases() {
        assert_eq!(maximal_cliques(&Graph::complete(3)), vec![vec![0, 1, 2]]);
        assert_eq!(
            maximal_cliques(&Graph::unlabeled(3)),
            vec![vec![0], vec![1], vec![2]]
        );
        let c5 = maximal_cliques(&Graph::cycle(5));
        assert_eq!(c5, brute_maximal_cliques(&Graph::cycle(5)));
        assert_eq!(
            c5,
            vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&Graph::complete(4)));
        assert!(is_complete(&Graph::unlabeled(1)));
        assert!(!is_complete(&Graph::cycle(5)));
    }

    #[test]
    fn vertex_sets_span_words() {
        let mut s = VertexSet::empty(130);
        for v in [0, 63, 64, 129] {
            s.insert(v);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.len(), 4);
        s.remove(64);
        assert!(!s.contains(64));
    }

    #[test]
    fn dot_export_lists_edges() {
        let dot = Graph::cycle(3).to_dot("c3");
        assert!(dot.starts_with("graph \"c3\" {"));
        assert_eq!(dot.matches(" -- ").count(), 3);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::unlabeled(n);
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[k] {
                            g.add_edge(a, b);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn mis_matches_brute_force(g in arb_graph(12)) {
            let r = max_independent_set(&g);
            prop_assert_eq!(r.size, brute_mis(&g));
            prop_assert_eq!(r.witness.len(), r.size);
            prop_assert!(g.is_independent(&r.witness));
            prop_assert_eq!(is_complete(&g), r.size == 1);
        }

        #[test]
        fn witness_is_lexicographically_least(g in arb_graph(9)) {
            let n = g.order();
            let r = max_independent_set(&g);
            let least = (0u32..1 << n)
                .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect::<Vec<_>>())
                .filter(|s| s.len() == r.size && g.is_independent(s))
                .min()
                .unwrap();
            prop_assert_eq!(r.witness, least);
        }

        #[test]
        fn maximal_cliques_match_brute_force(g in arb_graph(9)) {
            let cl = maximal_cliques(&g);
            prop_assert_eq!(&cl, &brute_maximal_cliques(&g));
            let mut covered = VertexSet::empty(g.order());
            for c in &cl {
                prop_assert!(g.is_clique(c));
                for &v in c { covered.insert(v); }
            }
            prop_assert_eq!(covered.len(), g.order());
            for (a, b) in g.edges() {
                prop_assert!(cl.iter().any(|c| c.contains(&a) && c.contains(&b)));
            }
        }
    }
}
