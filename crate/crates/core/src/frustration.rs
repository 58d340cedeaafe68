//! Anticommutation graph of Hamiltonian terms, its components, and removal of
//! twin vertices through their conserved products.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::gf2::Gf2Basis;
use crate::graph::SimpleGraph;
use crate::pauli::{anticommutes, mul, product, HamiltonianSpec, SignedPauli};

/// Vertex `i` of `graph` is the term `terms[i]` of the originating Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct FrustrationGraph {
    pub terms: Vec<usize>,
    pub graph: SimpleGraph,
}

impl FrustrationGraph {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Subgraph induced on the given local vertex indices.
    pub fn induced(&self, local: &[usize]) -> FrustrationGraph {
        FrustrationGraph {
            terms: local.iter().map(|&i| self.terms[i]).collect(),
            graph: self.graph.induced(local),
        }
    }

    pub fn local_index(&self, term: usize) -> Option<usize> {
        self.terms.iter().position(|&t| t == term)
    }
}

pub fn build_frustration_graph(h: &HamiltonianSpec) -> FrustrationGraph {
    let m = h.len();
    let mut graph = SimpleGraph::new(m);
    for j in 0..m {
        for k in j + 1..m {
            if anticommutes(h.word(j), h.word(k)) {
                graph.add_edge(j, k);
            }
        }
    }
    FrustrationGraph { terms: (0..m).collect(), graph }
}

pub fn connected_components(g: &FrustrationGraph) -> Vec<FrustrationGraph> {
    g.graph.components().iter().map(|c| g.induced(c)).collect()
}

/// Classes of at least two vertices sharing an open neighborhood, as local
/// indices, each sorted and ordered by smallest member.
pub fn twin_classes(g: &FrustrationGraph) -> Vec<Vec<usize>> {
    let mut buckets: HashMap<&FixedBitSet, Vec<usize>> = HashMap::new();
    for u in 0..g.len() {
        buckets.entry(g.graph.neighbors(u)).or_default().push(u);
    }
    let mut classes: Vec<Vec<usize>> = buckets.into_values().filter(|c| c.len() > 1).collect();
    classes.sort_unstable();
    classes
}

/// How a removed twin is rewritten inside a stabilizer sector:
/// `σ_removed → (-1)^{d + Σ_{s∈generators} x_s} σ_kept`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwinRelation {
    pub removed: usize,
    pub kept: usize,
    pub d: bool,
    pub generators: FixedBitSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwinReduction {
    /// Twin classes found in each pass, as term ids.
    pub classes: Vec<Vec<usize>>,
    /// In removal order; later relations may fold into terms that earlier
    /// relations targeted.
    pub relations: Vec<TwinRelation>,
    /// Independent Hermitian generators of the twin-product group.
    pub stabilizers: Vec<SignedPauli>,
    /// Surviving term ids, ascending.
    pub kept: Vec<usize>,
}

impl TwinReduction {
    pub fn analyze(h: &HamiltonianSpec, g: &FrustrationGraph) -> TwinReduction {
        let n = h.n();
        let mut alive: Vec<usize> = (0..g.len()).collect();
        let mut classes = Vec::new();
        let mut pairs = Vec::new();
        loop {
            let sub = g.induced(&alive);
            let found = twin_classes(&sub);
            if found.is_empty() {
                break;
            }
            let mut removed = FixedBitSet::with_capacity(g.len());
            for class in &found {
                let kept = alive[class[0]];
                for &c in &class[1..] {
                    removed.insert(alive[c]);
                    pairs.push((g.terms[kept], g.terms[alive[c]]));
                }
                classes.push(class.iter().map(|&c| g.terms[alive[c]]).collect());
            }
            alive.retain(|&v| !removed.contains(v));
        }

        let mut basis = Gf2Basis::new();
        let mut stabilizers: Vec<SignedPauli> = Vec::new();
        let mut relations = Vec::new();
        for (kept, removed) in pairs {
            let prod = mul(&SignedPauli::hermitian(h.word(kept).clone()), &SignedPauli::hermitian(h.word(removed).clone()));
            debug_assert!(prod.is_hermitian(), "twins must commute");
            let combo = match basis.insert(&prod.word.symplectic_vector()) {
                Ok(idx) => {
                    stabilizers.push(SignedPauli::hermitian(prod.word.clone()));
                    let mut c = FixedBitSet::with_capacity(idx + 1);
                    c.insert(idx);
                    c
                }
                Err(c) => c,
            };
            // ∏ g = i^e σ_w, so σ_removed = σ_kept · i^p σ_w = i^{p-e} σ_kept ∏ g
            let gens = product(n, combo.ones().map(|s| &stabilizers[s].word));
            debug_assert_eq!(gens.word, prod.word);
            let d = (prod.phase + 4 - gens.phase) % 4;
            debug_assert!(d % 2 == 0);
            relations.push(TwinRelation { removed, kept, d: d == 2, generators: combo });
        }
        let mut kept: Vec<usize> = alive.iter().map(|&v| g.terms[v]).collect();
        kept.sort_unstable();
        TwinReduction { classes, relations, stabilizers, kept }
    }

    pub fn generator_count(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.relations.is_empty()
    }

    /// Sign multiplying `σ_kept` when `σ_removed` is eliminated in `sector`.
    pub fn relation_sign(&self, rel: &TwinRelation, sector: &[bool]) -> f64 {
        let flips = rel.generators.ones().filter(|&s| sector[s]).count();
        if (rel.d as usize + flips) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Folds coefficients of all terms (indexed by term id) into the kept
    /// terms, returned in the order of `self.kept`.
    pub fn fold(&self, coeffs: &[f64], sector: &[bool]) -> Result<Vec<f64>> {
        if sector.len() != self.stabilizers.len() {
            return Err(Error::input(format!(
                "twin sector has {} bits, expected {}",
                sector.len(),
                self.stabilizers.len()
            )));
        }
        let mut c = coeffs.to_vec();
        for rel in &self.relations {
            let s = self.relation_sign(rel, sector);
            c[rel.kept] += s * c[rel.removed];
            c[rel.removed] = 0.0;
        }
        Ok(self.kept.iter().map(|&t| c[t]).collect())
    }
}

/// Twin-free model for one stabilizer sector. Folded coefficients may vanish.
pub fn reduce_twins(
    h: &HamiltonianSpec,
    g: &FrustrationGraph,
    sector: &[bool],
) -> Result<(HamiltonianSpec, FrustrationGraph, TwinReduction)> {
    let red = TwinReduction::analyze(h, g);
    let coeffs = red.fold(&h.coeffs(), sector)?;
    let terms = red
        .kept
        .iter()
        .zip(coeffs)
        .map(|(&t, coeff)| crate::pauli::Term { word: h.word(t).clone(), coeff })
        .collect();
    let reduced = HamiltonianSpec::from_terms_unchecked(h.n(), terms);
    let graph = build_frustration_graph(&reduced);
    Ok((reduced, graph, red))
}
