//! Deterministic model generators: spin chains, lattices, fractals and
//! randomly planted instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frustration::{build_frustration_graph, twin_classes};
use crate::graph::SimpleGraph;
use crate::linegraph::beineke_graphs;
use crate::pauli::{parse_pauli, product, validate_hamiltonian, HamiltonianSpec, PauliWord};

const XY: [char; 2] = ['X', 'Y'];

fn word(n: usize, letters: &[(usize, char)]) -> PauliWord {
    let mut w = PauliWord::identity(n);
    for &(q, p) in letters {
        w.set(q, p);
    }
    w
}

/// Nearest-neighbour chain `Σ μ^j_{αβ} σ^α_j σ^β_{j+1} + Σ ν_j Z_j` with
/// `α, β ∈ {X, Y}`. `mu[j][a][b]` couples qubits `j` and `j+1`; with
/// `periodic`, `mu[n-1]` couples qubit 0 (first factor) and qubit `n-1`.
pub fn xy_chain(n: usize, mu: &[[[f64; 2]; 2]], nu: &[f64], periodic: bool) -> Result<HamiltonianSpec> {
    if n < 2 {
        return Err(Error::input("chain needs at least two qubits"));
    }
    let bonds = if periodic { n } else { n - 1 };
    if mu.len() != bonds || nu.len() != n {
        return Err(Error::input(format!("expected {bonds} bond couplings and {n} fields")));
    }
    let mut terms = Vec::new();
    for (j, m) in mu.iter().enumerate() {
        let (q1, q2) = if j + 1 < n { (j, j + 1) } else { (0, n - 1) };
        for (a, row) in m.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                terms.push((word(n, &[(q1, XY[a]), (q2, XY[b])]), c));
            }
        }
    }
    for (j, &c) in nu.iter().enumerate() {
        terms.push((word(n, &[(j, 'Z')]), c));
    }
    validate_hamiltonian(n, terms)
}

/// Chain with every coupling and field drawn uniformly from `[-1, 1]`.
pub fn xy_chain_random(n: usize, periodic: bool, seed: u64) -> Result<HamiltonianSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bonds = if periodic { n } else { n.saturating_sub(1) };
    let mu: Vec<[[f64; 2]; 2]> =
        (0..bonds).map(|_| std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..=1.0)))).collect();
    let nu: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    xy_chain(n, &mu, &nu, periodic)
}

/// Transverse-field Ising chain `Σ J X_j X_{j+1} + Σ g Z_j`, open.
pub fn tfim(n: usize, j: f64, g: f64) -> Result<HamiltonianSpec> {
    let mu = vec![[[j, 0.0], [0.0, 0.0]]; n.saturating_sub(1)];
    xy_chain(n, &mu, &vec![g; n], false)
}

/// Kitaev honeycomb on an `lx × ly` torus in brick-wall layout. Qubit
/// `2((r mod ly)·lx + (c mod lx)) + s` sits in row `r`, column `c` and
/// sublattice `s` (0 = A, 1 = B). Links: `XX` between A(r,c) and B(r,c),
/// `YY` between B(r,c) and A(r,c+1), `ZZ` between B(r,c) and A(r+1,c).
pub fn kitaev_honeycomb(lx: usize, ly: usize, j: [f64; 3]) -> Result<HamiltonianSpec> {
    if lx < 2 || ly < 2 {
        return Err(Error::input("honeycomb torus needs lx, ly >= 2"));
    }
    let n = 2 * lx * ly;
    let q = |r: usize, c: usize, s: usize| 2 * ((r % ly) * lx + c % lx) + s;
    let mut terms = Vec::with_capacity(3 * lx * ly);
    for r in 0..ly {
        for c in 0..lx {
            let b = q(r, c, 1);
            terms.push((word(n, &[(q(r, c, 0), 'X'), (b, 'X')]), j[0]));
            terms.push((word(n, &[(b, 'Y'), (q(r, c + 1, 0), 'Y')]), j[1]));
            terms.push((word(n, &[(b, 'Z'), (q(r + 1, c, 0), 'Z')]), j[2]));
        }
    }
    validate_hamiltonian(n, terms)
}

/// Cells of the level-`k` Sierpinski triangle as `[top, bottom-left,
/// bottom-right]` qubit triples, with the qubit count.
pub fn sierpinski_cells(k: usize) -> (usize, Vec<[usize; 3]>) {
    fn build(k: usize) -> (usize, Vec<[usize; 3]>, [usize; 3]) {
        if k <= 1 {
            return (3, vec![[0, 1, 2]], [0, 1, 2]);
        }
        let (m, cells, corners) = build(k - 1);
        let [top, bl, br] = corners;
        // copy A keeps its labels; B reuses A's bottom-left as its top, C
        // reuses A's bottom-right as its top and B's bottom-right as its
        // bottom-left
        let mut next = m;
        let mut map_b = vec![usize::MAX; m];
        map_b[top] = bl;
        for (v, slot) in map_b.iter_mut().enumerate() {
            if v != top {
                *slot = next;
                next += 1;
            }
        }
        let mut map_c = vec![usize::MAX; m];
        map_c[top] = br;
        map_c[bl] = map_b[br];
        for (v, slot) in map_c.iter_mut().enumerate() {
            if v != top && v != bl {
                *slot = next;
                next += 1;
            }
        }
        let mut all = cells.clone();
        all.extend(cells.iter().map(|c| c.map(|v| map_b[v])));
        all.extend(cells.iter().map(|c| c.map(|v| map_c[v])));
        (next, all, [top, map_b[bl], map_c[br]])
    }
    let (n, cells, _) = build(k);
    (n, cells)
}

/// `Σ X_top Y_bl Z_br` over shaded cells, plus `J σ` on every bridge qubit,
/// i.e. one shared by two cells from different smallest triangles, using the
/// Pauli type absent from both cells there.
pub fn sierpinski_hanoi(k: usize, j: f64) -> Result<HamiltonianSpec> {
    validate_hamiltonian(sierpinski_qubits(k)?, sierpinski_terms(k, j)?)
}

fn sierpinski_qubits(k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::input("Sierpinski level must be at least 1"));
    }
    Ok(sierpinski_cells(k).0)
}

/// Qubits carrying a field term, with its Pauli type.
pub fn sierpinski_bridges(k: usize) -> Vec<(usize, char)> {
    let (n, cells) = sierpinski_cells(k);
    let letters = ['X', 'Y', 'Z'];
    let mut seen: Vec<Vec<(usize, char)>> = vec![Vec::new(); n];
    for (i, cell) in cells.iter().enumerate() {
        for (v, p) in cell.iter().zip(letters) {
            seen[*v].push((i, p));
        }
    }
    // cells come in consecutive triples forming the smallest triangles
    seen.iter()
        .enumerate()
        .filter_map(|(q, s)| match s[..] {
            [(a, pa), (b, pb)] if a / 3 != b / 3 => {
                Some((q, letters.into_iter().find(|p| *p != pa && *p != pb).unwrap()))
            }
            _ => None,
        })
        .collect()
}

/// Terms of [`sierpinski_hanoi`] including zero-valued fields.
pub fn sierpinski_terms(k: usize, j: f64) -> Result<Vec<(PauliWord, f64)>> {
    let n = sierpinski_qubits(k)?;
    let (_, cells) = sierpinski_cells(k);
    let mut terms: Vec<(PauliWord, f64)> =
        cells.iter().map(|c| (word(n, &[(c[0], 'X'), (c[1], 'Y'), (c[2], 'Z')]), 1.0)).collect();
    terms.extend(sierpinski_bridges(k).into_iter().map(|(q, p)| (word(n, &[(q, p)]), j)));
    Ok(terms)
}

fn ham(n: usize, terms: &[&str]) -> HamiltonianSpec {
    validate_hamiltonian(n, terms.iter().map(|s| (parse_pauli(s, n).unwrap(), 1.0))).unwrap()
}

pub fn single_qubit() -> HamiltonianSpec {
    ham(1, &["X", "Y", "Z"])
}

/// All fifteen non-identity two-qubit Paulis with unit coefficients.
pub fn two_qubit_full() -> HamiltonianSpec {
    let letters = ['I', 'X', 'Y', 'Z'];
    let words: Vec<String> =
        letters.iter().flat_map(|a| letters.iter().map(move |b| format!("{a}{b}"))).filter(|w| w != "II").collect();
    ham(2, &words.iter().map(String::as_str).collect::<Vec<_>>())
}

pub fn claw() -> HamiltonianSpec {
    ham(3, &["XXX", "YII", "IYI", "IIY"])
}

pub fn twin_demo() -> HamiltonianSpec {
    validate_hamiltonian(
        2,
        [("XX", 1.0), ("YY", 0.5), ("ZI", 0.75), ("IZ", -0.4)].map(|(s, c)| (parse_pauli(s, 2).unwrap(), c)),
    )
    .unwrap()
}

pub fn canned_examples() -> Vec<(&'static str, HamiltonianSpec)> {
    vec![
        ("single_qubit", single_qubit()),
        ("two_qubit_full", two_qubit_full()),
        ("claw", claw()),
        ("twin_demo", twin_demo()),
        ("tfim2", tfim(2, 1.0, 1.0).unwrap()),
    ]
}

/// Jordan–Wigner images: mode `2j` is `Z^{⊗j} X_j`, mode `2j+1` is `Z^{⊗j} Y_j`.
pub fn majorana_word(n: usize, mode: usize) -> PauliWord {
    let q = mode / 2;
    let mut letters: Vec<(usize, char)> = (0..q).map(|p| (p, 'Z')).collect();
    letters.push((q, if mode % 2 == 0 { 'X' } else { 'Y' }));
    word(n, &letters)
}

/// Random connected simple graph: a random tree plus uniformly chosen extra
/// edges.
pub fn random_connected_graph(vertices: usize, edges: usize, rng: &mut impl Rng) -> Result<Vec<(usize, usize)>> {
    let max = vertices * vertices.saturating_sub(1) / 2;
    if vertices == 0 || edges + 1 < vertices || edges > max {
        return Err(Error::input(format!("no connected simple graph with {vertices} vertices and {edges} edges")));
    }
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(rng);
    let mut g = SimpleGraph::new(vertices);
    for i in 1..vertices {
        let p = order[rng.random_range(0..i)];
        g.add_edge(order[i], p);
    }
    let mut missing: Vec<(usize, usize)> =
        (0..vertices).flat_map(|a| (a + 1..vertices).map(move |b| (a, b))).filter(|&(a, b)| !g.has_edge(a, b)).collect();
    missing.shuffle(rng);
    for &(a, b) in missing.iter().take(edges - (vertices - 1)) {
        g.add_edge(a, b);
    }
    Ok(g.edges())
}

/// A root graph mapped to spins: edge `(a, b)` becomes the Pauli image of
/// `iγ_a γ_b` with a coefficient of magnitude in `[0.2, 1]` and random sign.
#[derive(Clone, Debug)]
pub struct PlantedRoot {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub hamiltonian: HamiltonianSpec,
}

pub fn planted_root(vertices: usize, edges: usize, seed: u64) -> Result<PlantedRoot> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge_list = random_connected_graph(vertices, edges, &mut rng)?;
    let n = vertices.div_ceil(2);
    let terms = edge_list.iter().map(|&(a, b)| {
        let w = product(n, [&majorana_word(n, a), &majorana_word(n, b)]).word;
        let c = rng.random_range(0.2..=1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        (w, c)
    });
    let hamiltonian = validate_hamiltonian(n, terms.collect::<Vec<_>>())?;
    Ok(PlantedRoot { vertices, edges: edge_list, hamiltonian })
}

/// Random size and density for [`planted_root`] within `vertices`.
pub fn planted_root_random(vertices: std::ops::RangeInclusive<usize>, seed: u64) -> Result<PlantedRoot> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let v = rng.random_range(vertices);
    let e = rng.random_range(v - 1..=v * (v - 1) / 2);
    planted_root(v, e, seed)
}

/// Paulis whose anticommutation graph is exactly `g`: term `i` is `X_i`
/// times `Z_j` for each neighbour `j < i`.
pub fn hamiltonian_with_frustration_graph(g: &SimpleGraph, coeffs: &[f64]) -> Result<HamiltonianSpec> {
    validate_hamiltonian(g.len(), frustration_words(g).into_iter().zip(coeffs.iter().copied()))
}

fn frustration_words(g: &SimpleGraph) -> Vec<PauliWord> {
    let n = g.len();
    (0..n)
        .map(|i| {
            let mut letters = vec![(i, 'X')];
            letters.extend(g.neighbors(i).ones().filter(|&j| j < i).map(|j| (j, 'Z')));
            word(n, &letters)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PlantedObstruction {
    pub beineke_index: usize,
    /// Term ids carrying the planted forbidden subgraph.
    pub planted: Vec<usize>,
    /// Frustration graph, vertices indexed by term id.
    pub graph: SimpleGraph,
    pub hamiltonian: HamiltonianSpec,
}

/// Random twin-free graph containing one of the nine forbidden graphs as an
/// induced subgraph, with `extra` further vertices.
pub fn planted_beineke(extra: usize, seed: u64) -> Result<PlantedObstruction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forbidden = beineke_graphs();
    for _ in 0..10_000 {
        let beineke_index = rng.random_range(0..forbidden.len());
        let b = &forbidden[beineke_index];
        let m = b.len() + extra;
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut rng);
        let mut g = SimpleGraph::new(m);
        for (u, v) in b.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        for a in 0..m {
            for c in (a + 1).max(b.len())..m {
                if rng.random_bool(0.4) {
                    g.add_edge(perm[a], perm[c]);
                }
            }
        }
        let coeffs: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..=1.0)).collect();
        let hamiltonian = hamiltonian_with_frustration_graph(&g, &coeffs)?;
        let fg = build_frustration_graph(&hamiltonian);
        if g.is_connected() && twin_classes(&fg).is_empty() {
            let words = frustration_words(&g);
            let term_id = |v: usize| hamiltonian.terms().iter().position(|t| t.word == words[v]).unwrap();
            let mut planted: Vec<usize> = perm[..b.len()].iter().map(|&v| term_id(v)).collect();
            planted.sort_unstable();
            return Ok(PlantedObstruction { beineke_index, planted, graph: fg.graph, hamiltonian });
        }
    }
    Err(Error::ResourceCap("no twin-free planted graph found".into()))
}
