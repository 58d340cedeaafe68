//! Small undirected simple graphs stored as adjacency bit rows.

use fixedbitset::FixedBitSet;
use petgraph::graph::UnGraph;

use crate::gf2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<FixedBitSet>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop at {u}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut g = SimpleGraph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components as ascending vertex lists, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                for v in self.adj[u].ones() {
                    if !seen.put(v) {
                        comp.push(v);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn gf2_rank(&self) -> usize {
        gf2::rank(self.adj.iter().cloned())
    }

    pub fn to_petgraph(&self) -> UnGraph<(), ()> {
        let mut g = UnGraph::with_capacity(self.len(), self.edge_count());
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (u, v) in self.edges() {
            g.add_edge(nodes[u], nodes[v], ());
        }
        g
    }

    pub fn is_isomorphic(&self, other: &SimpleGraph) -> bool {
        self.len() == other.len()
            && self.edge_count() == other.edge_count()
            && self.degree_sequence() == other.degree_sequence()
            && petgraph::algo::is_isomorphic(&self.to_petgraph(), &other.to_petgraph())
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.len()).map(|u| self.degree(u)).collect();
        d.sort_unstable();
        d
    }

    /// A vertex map `m` with `self[u] ~ self[v] ⇔ other[m[u]] ~ other[m[v]]`.
    pub fn isomorphism_to(&self, other: &SimpleGraph) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.edge_count() != other.edge_count() {
            return None;
        }
        let (a, b) = (self.to_petgraph(), other.to_petgraph());
        let mut node_match = |_: &(), _: &()| true;
        let mut edge_match = |_: &(), _: &()| true;
        let (ra, rb) = (&a, &b);
        let mut maps = petgraph::algo::subgraph_isomorphisms_iter(&ra, &rb, &mut node_match, &mut edge_match)?;
        maps.next()
    }
}
