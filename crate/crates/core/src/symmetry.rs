//! Cycle symmetries, the fermion parity operator, the center of the Pauli
//! group generated by the Hamiltonian and the logical-qubit count.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frustration::{FrustrationGraph, TwinReduction};
use crate::gf2::{self, Gf2Basis};
use crate::linegraph::RootGraph;
use crate::pauli::{product, HamiltonianSpec, PauliWord, SignedPauli};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// `parent[m] = (parent mode, edge index)`, absent for the root.
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    pub in_tree: FixedBitSet,
}

impl SpanningTree {
    pub fn tree_edges(&self) -> Vec<usize> {
        self.in_tree.ones().collect()
    }

    /// Edge indices on the tree path between two modes.
    pub fn path(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while self.depth[a] > self.depth[b] {
            let (p, e) = self.parent[a].unwrap();
            out.push(e);
            a = p;
        }
        while self.depth[b] > self.depth[a] {
            let (p, e) = self.parent[b].unwrap();
            out.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = self.parent[a].unwrap();
            let (pb, eb) = self.parent[b].unwrap();
            out.push(ea);
            out.push(eb);
            a = pa;
            b = pb;
        }
        out
    }
}

/// Breadth-first tree from mode 0, visiting neighbours in increasing order.
pub fn spanning_tree(r: &RootGraph) -> Result<SpanningTree> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r.modes];
    for (e, &(a, b)) in r.edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    adj.iter_mut().for_each(|l| l.sort_unstable());
    let mut parent = vec![None; r.modes];
    let mut depth = vec![usize::MAX; r.modes];
    let mut in_tree = FixedBitSet::with_capacity(r.edges.len());
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                parent[v] = Some((u, e));
                in_tree.insert(e);
                queue.push_back(v);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::input("root graph is disconnected"));
    }
    Ok(SpanningTree { root: 0, parent, depth, in_tree })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCycle {
    /// The non-tree edge closing the cycle.
    pub edge: usize,
    /// Edge indices, ascending; products run in this order.
    pub members: Vec<usize>,
    /// Hermitian cycle operator with `i^d ∏ σ_members = pauli`.
    pub pauli: SignedPauli,
    pub d: u8,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    pub tree: SpanningTree,
    pub cycles: Vec<FundamentalCycle>,
}

fn signed_product(h: &HamiltonianSpec, r: &RootGraph, edges: &[usize]) -> (SignedPauli, u8) {
    let prod = product(h.n(), edges.iter().map(|&e| h.word(r.terms[e])));
    let d = (4 - prod.phase) % 4;
    (SignedPauli::hermitian(prod.word), d)
}

pub fn fundamental_cycles(h: &HamiltonianSpec, r: &RootGraph, tree: &SpanningTree) -> CycleBasis {
    let cycles = (0..r.edges.len())
        .filter(|&e| !tree.in_tree.contains(e))
        .map(|e| {
            let (a, b) = r.edges[e];
            let mut members = tree.path(a, b);
            members.push(e);
            members.sort_unstable();
            let (pauli, d) = signed_product(h, r, &members);
            let trivial = pauli.word.is_identity();
            FundamentalCycle { edge: e, members, pauli, d, trivial }
        })
        .collect();
    CycleBasis { tree: tree.clone(), cycles }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityInfo {
    /// Edge indices, ascending.
    pub t_join: Option<Vec<usize>>,
    /// Hermitian parity operator with `i^d ∏ σ_{t_join} = pauli`.
    pub pauli: Option<SignedPauli>,
    pub d: u8,
    /// Whether the parity value is already fixed by the other generators.
    pub trivial: bool,
}

/// Pairs modes `(0,1), (2,3), …` along tree paths; the symmetric difference of
/// those paths meets every mode an odd number of times.
pub fn find_t_join(h: &HamiltonianSpec, r: &RootGraph, tree: &SpanningTree) -> ParityInfo {
    if r.modes % 2 == 1 {
        return ParityInfo { t_join: None, pauli: None, d: 0, trivial: false };
    }
    let mut t = FixedBitSet::with_capacity(r.edges.len());
    for pair in 0..r.modes / 2 {
        for e in tree.path(2 * pair, 2 * pair + 1) {
            t.toggle(e);
        }
    }
    let t_join: Vec<usize> = t.ones().collect();
    let (pauli, d) = signed_product(h, r, &t_join);
    let trivial = pauli.word.is_identity();
    ParityInfo { t_join: Some(t_join), pauli: Some(pauli), d, trivial }
}

pub fn is_t_join(r: &RootGraph, t: &[usize]) -> bool {
    let mut deg = vec![0usize; r.modes];
    for &e in t {
        let (a, b) = r.edges[e];
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.iter().all(|d| d % 2 == 1)
}

/// Everything the symmetry analysis knows about one connected component of
/// the twin-reduced frustration graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSymmetry {
    pub graph: FrustrationGraph,
    pub root: RootGraph,
    pub cycles: CycleBasis,
    pub parity: ParityInfo,
}

impl ComponentSymmetry {
    pub fn new(h: &HamiltonianSpec, graph: FrustrationGraph, root: RootGraph) -> Result<Self> {
        let tree = spanning_tree(&root)?;
        let cycles = fundamental_cycles(h, &root, &tree);
        let parity = find_t_join(h, &root, &tree);
        Ok(ComponentSymmetry { graph, root, cycles, parity })
    }

    /// Qubits' worth of fermionic degrees of freedom, `⌊(|Ṽ|-1)/2⌋`.
    pub fn fermion_qubits(&self) -> usize {
        (self.root.modes - 1) / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorKind {
    Twin { index: usize },
    Cycle { component: usize, cycle: usize },
    Parity { component: usize },
}

/// A free generator owns a sector bit; a fixed one takes the value
/// `(-1)^{negated} ∏_{b ∈ combination} (-1)^{x_b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum GeneratorStatus {
    Free { bit: usize },
    Fixed { combination: Vec<usize>, negated: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub pauli: SignedPauli,
    pub status: GeneratorStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub n: usize,
    pub generators: Vec<Generator>,
    /// `|Z(P_H)|`: independent central generators, twin stabilizers included.
    pub center_size: usize,
    pub fermion_qubits: usize,
    pub logical_qubits: i64,
    pub modes: Vec<usize>,
    pub cycle_count: usize,
}

impl SymmetryReport {
    pub fn free_bits(&self) -> usize {
        self.center_size
    }

    /// Eigenvalue flags `x` (value `(-1)^x`) of every generator in a sector.
    pub fn values(&self, sector: &[bool]) -> Vec<bool> {
        assert_eq!(sector.len(), self.center_size, "sector length");
        self.generators
            .iter()
            .map(|g| match &g.status {
                GeneratorStatus::Free { bit } => sector[*bit],
                GeneratorStatus::Fixed { combination, negated } => {
                    combination.iter().fold(*negated, |acc, &b| acc ^ sector[b])
                }
            })
            .collect()
    }

    pub fn parity_generator(&self, component: usize) -> Option<&Generator> {
        self.generators.iter().find(|g| g.kind == GeneratorKind::Parity { component })
    }
}

/// Independent central generators: twin stabilizers first, then cycle
/// operators, then parity operators. Later generators that depend on earlier
/// ones are recorded with the value they are forced to take.
pub fn center(h: &HamiltonianSpec, twins: &TwinReduction, comps: &mut [ComponentSymmetry]) -> SymmetryReport {
    let n = h.n();
    let mut candidates: Vec<(GeneratorKind, SignedPauli)> = Vec::new();
    for (i, s) in twins.stabilizers.iter().enumerate() {
        candidates.push((GeneratorKind::Twin { index: i }, s.clone()));
    }
    for (c, comp) in comps.iter().enumerate() {
        for (j, cyc) in comp.cycles.cycles.iter().enumerate() {
            candidates.push((GeneratorKind::Cycle { component: c, cycle: j }, cyc.pauli.clone()));
        }
    }
    for (c, comp) in comps.iter().enumerate() {
        if let Some(p) = &comp.parity.pauli {
            candidates.push((GeneratorKind::Parity { component: c }, p.clone()));
        }
    }

    let mut basis = Gf2Basis::new();
    let mut free_words: Vec<PauliWord> = Vec::new();
    let mut generators = Vec::with_capacity(candidates.len());
    for (kind, pauli) in candidates {
        let status = match basis.insert(&pauli.word.symplectic_vector()) {
            Ok(bit) => {
                free_words.push(pauli.word.clone());
                GeneratorStatus::Free { bit }
            }
            Err(combo) => {
                let combination: Vec<usize> = combo.ones().collect();
                let prod = product(n, combination.iter().map(|&b| &free_words[b]));
                debug_assert_eq!(prod.word, pauli.word);
                GeneratorStatus::Fixed { combination, negated: prod.phase == 2 }
            }
        };
        generators.push(Generator { kind, pauli, status });
    }
    for (c, comp) in comps.iter_mut().enumerate() {
        if comp.parity.pauli.is_some() {
            let g = generators.iter().find(|g| g.kind == GeneratorKind::Parity { component: c }).unwrap();
            comp.parity.trivial = matches!(g.status, GeneratorStatus::Fixed { .. });
        }
    }
    let center_size = basis.rank();
    let fermion_qubits: usize = comps.iter().map(|c| c.fermion_qubits()).sum();
    SymmetryReport {
        n,
        generators,
        center_size,
        fermion_qubits,
        logical_qubits: n as i64 - (fermion_qubits + center_size) as i64,
        modes: comps.iter().map(|c| c.root.modes).collect(),
        cycle_count: comps.iter().map(|c| c.cycles.cycles.len()).sum(),
    }
}

/// Logical-qubit count from the term algebra alone: `n - rank/2 - dim center`,
/// where `rank` is the GF(2) rank of the anticommutation matrix.
pub fn logical_qubits_direct(h: &HamiltonianSpec, g: &FrustrationGraph) -> i64 {
    let span = gf2::rank(h.terms().iter().map(|t| t.word.symplectic_vector()));
    let rank = g.graph.gf2_rank();
    h.n() as i64 - (rank / 2) as i64 - (span - rank) as i64
}

/// Checks `A = B Bᵀ (mod 2)` for the root incidence matrix `B` and that the
/// GF(2) rank of `A` is `|Ṽ|-1` (odd) or `|Ṽ|-2` (even).
pub fn rank_audit(g: &FrustrationGraph, r: &RootGraph) -> bool {
    let m = r.edges.len();
    if g.len() != m {
        return false;
    }
    let incidence: Vec<FixedBitSet> = r
        .edges
        .iter()
        .map(|&(a, b)| {
            let mut row = FixedBitSet::with_capacity(r.modes);
            row.insert(a);
            row.insert(b);
            row
        })
        .collect();
    let factorizes = (0..m).all(|i| {
        (0..m).all(|j| {
            let shared = incidence[i].intersection_count(&incidence[j]) % 2 == 1;
            i == j || shared == g.graph.has_edge(i, j)
        })
    });
    let expected = if r.modes % 2 == 1 { r.modes - 1 } else { r.modes - 2 };
    factorizes && g.graph.gf2_rank() == expected
}
