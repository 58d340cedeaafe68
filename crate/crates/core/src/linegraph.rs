//! Line-graph recognition by Krausz clique partition, root reconstruction and
//! forbidden-subgraph certificates.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frustration::FrustrationGraph;
use crate::graph::SimpleGraph;

/// Edge partition of a graph into cliques of size at least two; vertices
/// covered by fewer than two cliques get private modes in the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrauszDecomposition {
    pub cliques: Vec<Vec<usize>>,
}

/// Hopping graph whose line graph is the frustration graph. Edge `i` is the
/// image of local vertex `i`, i.e. of term `terms[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootGraph {
    pub modes: usize,
    pub edges: Vec<(usize, usize)>,
    pub terms: Vec<usize>,
}

impl RootGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn as_graph(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.modes, self.edges.iter().copied())
    }

    pub fn line_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.edges.len());
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            for (j, &(c, d)) in self.edges.iter().enumerate().skip(i + 1) {
                let shared = [a == c, a == d, b == c, b == d].iter().filter(|&&s| s).count();
                if shared == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(a, b)| a < b && b < self.modes && seen.insert((a, b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    /// Term ids of the offending vertices.
    pub vertices: Vec<usize>,
    /// 1-based index into [`beineke_graphs`]; 1 is the claw.
    pub beineke_index: usize,
    /// `isomorphism[i]` is the forbidden-graph vertex matched by `vertices[i]`.
    pub isomorphism: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Recognition {
    Root { root: RootGraph, krausz: KrauszDecomposition },
    Obstruction(ObstructionWitness),
}

/// Root chosen for a component that is exactly a triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum K3Root {
    #[default]
    Claw,
    Triangle,
}

const BEINEKE_EDGES: [&[(usize, usize)]; 9] = [
    &[(0, 3), (1, 3), (2, 3)],
    &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 4)],
    &[(0, 1), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
    &[(0, 1), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (4, 5)],
    &[(0, 1), (0, 4), (0, 5), (1, 2), (1, 5), (2, 3), (2, 5), (3, 4)],
    &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (1, 5), (2, 3), (2, 5), (4, 5)],
    &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)],
    &[(0, 1), (0, 4), (0, 5), (1, 2), (1, 5), (2, 3), (2, 5), (3, 4), (3, 5), (4, 5)],
    &[(0, 1), (0, 2), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 5), (3, 4), (3, 5), (4, 5)],
];

/// The nine minimal non-line graphs. Index 0 is the claw; indices 0–2 are the
/// ones containing twin vertices; index 7 is the wheel on six vertices.
pub fn beineke_graphs() -> Vec<SimpleGraph> {
    BEINEKE_EDGES
        .iter()
        .map(|edges| {
            let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
            SimpleGraph::from_edges(n, edges.iter().copied())
        })
        .collect()
}

pub fn verify_krausz(g: &SimpleGraph, k: &KrauszDecomposition) -> bool {
    let n = g.len();
    let mut membership = vec![0usize; n];
    let mut covered = vec![FixedBitSet::with_capacity(n); n];
    for clique in &k.cliques {
        if clique.len() < 2 {
            return false;
        }
        for (i, &u) in clique.iter().enumerate() {
            if u >= n {
                return false;
            }
            membership[u] += 1;
            for &v in &clique[i + 1..] {
                if u == v || !g.has_edge(u, v) || covered[u].contains(v) {
                    return false;
                }
                covered[u].insert(v);
                covered[v].insert(u);
            }
        }
    }
    membership.iter().all(|&m| m <= 2) && (0..n).all(|u| covered[u] == *g.neighbors(u))
}

/// Modes are the cliques in order, followed by one private mode per missing
/// clique membership, assigned in vertex order.
pub fn root_from_krausz(g: &FrustrationGraph, k: &KrauszDecomposition) -> RootGraph {
    let n = g.len();
    let mut ends: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
    for (c, clique) in k.cliques.iter().enumerate() {
        for &u in clique {
            ends[u].push(c);
        }
    }
    let mut modes = k.cliques.len();
    let edges = ends
        .into_iter()
        .map(|mut e| {
            while e.len() < 2 {
                e.push(modes);
                modes += 1;
            }
            (e[0].min(e[1]), e[0].max(e[1]))
        })
        .collect();
    RootGraph { modes, edges, terms: g.terms.clone() }
}

fn clique_from(mut members: Vec<usize>) -> Vec<usize> {
    members.sort_unstable();
    members.dedup();
    members
}

fn is_clique(g: &SimpleGraph, c: &[usize]) -> bool {
    c.iter().enumerate().all(|(i, &u)| c[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Grows the full decomposition from one known clique. Every vertex of a known
/// clique `Q` has its other clique forced to `{v} ∪ (N(v) \ Q)`.
fn propagate(g: &SimpleGraph, seed: Vec<usize>) -> Option<KrauszDecomposition> {
    let n = g.len();
    let mut cliques: Vec<Vec<usize>> = vec![seed];
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &u in &cliques[0] {
        membership[u].push(0);
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(cid) = queue.pop_front() {
        let q = cliques[cid].clone();
        let mut in_q = FixedBitSet::with_capacity(n);
        q.iter().for_each(|&u| in_q.insert(u));
        for &v in &q {
            let mut rest = g.neighbors(v).clone();
            rest.difference_with(&in_q);
            let other: Vec<usize> = membership[v].iter().copied().filter(|&c| c != cid).collect();
            if rest.is_clear() {
                if !other.is_empty() {
                    return None;
                }
                continue;
            }
            let d = clique_from(std::iter::once(v).chain(rest.ones()).collect());
            match other.as_slice() {
                [] => {
                    if !is_clique(g, &d) || d.iter().any(|&x| membership[x].len() >= 2) {
                        return None;
                    }
                    let id = cliques.len();
                    d.iter().for_each(|&x| membership[x].push(id));
                    cliques.push(d);
                    queue.push_back(id);
                }
                [o] if cliques[*o] == d => {}
                _ => return None,
            }
        }
    }
    if membership.iter().any(|m| m.is_empty()) {
        return None;
    }
    let mut k = KrauszDecomposition { cliques };
    k.cliques.sort_unstable();
    verify_krausz(g, &k).then_some(k)
}

/// Krausz decomposition of a connected graph, if it is a line graph.
pub fn krausz_connected(g: &SimpleGraph, k3: K3Root) -> Option<KrauszDecomposition> {
    let n = g.len();
    if n == 1 {
        return Some(KrauszDecomposition { cliques: Vec::new() });
    }
    let u = 0;
    let w = g.neighbors(u).minimum()?;
    let mut common = g.neighbors(u).clone();
    common.intersect_with(g.neighbors(w));
    let common: Vec<usize> = common.ones().collect();
    // The clique holding edge uw is {u, w} plus every common neighbour except
    // at most one vertex that closes a triangle through the other two ends.
    let mut candidates: Vec<Option<usize>> = std::iter::once(None).chain(common.iter().map(|&t| Some(t))).collect();
    if k3 == K3Root::Triangle && n == 3 && g.edge_count() == 3 {
        candidates.rotate_left(1);
    }
    for t in candidates {
        let members: Vec<usize> = common.iter().copied().filter(|&c| Some(c) != t).collect();
        if let Some(t) = t {
            if members.iter().any(|&c| g.has_edge(t, c)) {
                continue;
            }
        }
        let seed = clique_from([u, w].into_iter().chain(members).collect());
        if !is_clique(g, &seed) {
            continue;
        }
        if let Some(k) = propagate(g, seed) {
            return Some(k);
        }
    }
    None
}

pub fn is_line_graph(g: &SimpleGraph) -> bool {
    g.components().iter().all(|c| krausz_connected(&g.induced(c), K3Root::Claw).is_some())
}

/// Recognizes a connected, twin-free frustration graph.
pub fn recognize(g: &FrustrationGraph, k3: K3Root) -> Result<Recognition> {
    if !g.graph.is_connected() || g.is_empty() {
        return Err(Error::input("recognition needs a non-empty connected graph"));
    }
    match krausz_connected(&g.graph, k3) {
        Some(krausz) => {
            let root = root_from_krausz(g, &krausz);
            assert!(root.is_simple(), "root graph has a repeated edge");
            assert_eq!(root.line_graph(), g.graph, "line graph of the root differs from the input");
            Ok(Recognition::Root { root, krausz })
        }
        None => Ok(Recognition::Obstruction(forbidden_witness(g)?)),
    }
}

/// Root for an exact triangle component, honoring the requested preference.
pub fn resolve_whitney_ambiguity(g: &FrustrationGraph, preference: K3Root) -> Result<RootGraph> {
    if g.len() != 3 || g.graph.edge_count() != 3 {
        return Err(Error::input("the root of a component is ambiguous only for a triangle"));
    }
    match recognize(g, preference)? {
        Recognition::Root { root, .. } => Ok(root),
        Recognition::Obstruction(_) => unreachable!("a triangle is a line graph"),
    }
}

/// Minimal forbidden induced subgraph of a non-line graph, found by greedy
/// vertex deletion.
pub fn forbidden_witness(g: &FrustrationGraph) -> Result<ObstructionWitness> {
    if is_line_graph(&g.graph) {
        return Err(Error::input("no forbidden subgraph: the graph is a line graph"));
    }
    let mut keep: Vec<usize> = (0..g.len()).collect();
    for v in 0..g.len() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&u| u != v).collect();
        if !is_line_graph(&g.graph.induced(&trial)) {
            keep = trial;
        }
    }
    let core = g.graph.induced(&keep);
    let (index, isomorphism) = beineke_graphs()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.degree_sequence() == core.degree_sequence())
        .find_map(|(i, b)| core.isomorphism_to(b).map(|m| (i + 1, m)))
        .expect("a minimal non-line graph is one of the nine forbidden graphs");
    Ok(ObstructionWitness {
        vertices: keep.iter().map(|&v| g.terms[v]).collect(),
        beineke_index: index,
        isomorphism,
    })
}

/// Checks that the witness vertices induce the claimed forbidden graph.
pub fn verify_witness(g: &FrustrationGraph, w: &ObstructionWitness) -> bool {
    let local: Option<Vec<usize>> = w.vertices.iter().map(|&t| g.local_index(t)).collect();
    let Some(local) = local else { return false };
    let Some(target) = beineke_graphs().into_iter().nth(w.beineke_index.wrapping_sub(1)) else {
        return false;
    };
    let sub = g.graph.induced(&local);
    if w.isomorphism.len() != sub.len() || sub.len() != target.len() {
        return false;
    }
    (0..sub.len()).all(|i| {
        (0..sub.len()).all(|j| i == j || sub.has_edge(i, j) == target.has_edge(w.isomorphism[i], w.isomorphism[j]))
    })
}
