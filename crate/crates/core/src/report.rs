//! Serializable summaries and Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::frustration::build_frustration_graph;
use crate::linegraph::ObstructionWitness;
use crate::pauli::HamiltonianSpec;
use crate::solver::{bit_string, Model, RootedComponent, SpectrumReport};
use crate::symmetry::{GeneratorKind, GeneratorStatus};

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub vertices: Vec<String>,
    pub beineke_index: usize,
}

pub fn witness_json(h: &HamiltonianSpec, w: &ObstructionWitness) -> WitnessJson {
    WitnessJson { vertices: w.vertices.iter().map(|&t| h.word(t).to_string()).collect(), beineke_index: w.beineke_index }
}

#[derive(Debug, Serialize)]
pub struct ComponentJson {
    pub terms: Vec<String>,
    pub modes: usize,
    /// `[a, b, pauli]` per root edge.
    pub edges: Vec<(usize, usize, String)>,
    /// Pauli strings of each clique; clique `i` is mode `i`.
    pub cliques: Vec<Vec<String>>,
    pub spanning_tree: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct RecognitionJson {
    pub n: usize,
    pub twin_classes: Vec<Vec<String>>,
    pub components: Vec<ComponentJson>,
}

/// `twin_classes` are term ids; empty for the unreduced graph.
pub fn recognition_json(h: &HamiltonianSpec, twin_classes: &[Vec<usize>], comps: &[RootedComponent]) -> RecognitionJson {
    let name = |t: usize| h.word(t).to_string();
    RecognitionJson {
        n: h.n(),
        twin_classes: twin_classes.iter().map(|c| c.iter().map(|&t| name(t)).collect()).collect(),
        components: comps
            .iter()
            .map(|c| ComponentJson {
                terms: c.graph.terms.iter().map(|&t| name(t)).collect(),
                modes: c.root.modes,
                edges: c.root.edges.iter().zip(&c.root.terms).map(|(&(a, b), &t)| (a, b, name(t))).collect(),
                cliques: c.krausz.cliques.iter().map(|q| q.iter().map(|&v| name(c.graph.terms[v])).collect()).collect(),
                spanning_tree: c.tree.tree_edges(),
            })
            .collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct GeneratorJson {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub pauli: String,
    #[serde(flatten)]
    pub status: GeneratorStatus,
}

#[derive(Debug, Serialize)]
pub struct SymmetryJson {
    pub n: usize,
    pub center_size: usize,
    pub fermion_qubits: usize,
    pub logical_qubits: i64,
    pub modes: Vec<usize>,
    pub cycles: usize,
    pub twin_stabilizers: usize,
    pub generators: Vec<GeneratorJson>,
    pub sectors: String,
}

pub fn symmetry_json(m: &Model) -> SymmetryJson {
    let s = &m.symmetry;
    SymmetryJson {
        n: s.n,
        center_size: s.center_size,
        fermion_qubits: s.fermion_qubits,
        logical_qubits: s.logical_qubits,
        modes: s.modes.clone(),
        cycles: s.cycle_count,
        twin_stabilizers: m.twins.generator_count(),
        generators: s
            .generators
            .iter()
            .map(|g| GeneratorJson { kind: g.kind, pauli: g.pauli.to_string(), status: g.status.clone() })
            .collect(),
        sectors: format!("2^{}", s.center_size),
    }
}

#[derive(Debug, Serialize)]
pub struct AuditJson {
    pub total_states: String,
    pub hilbert_dimension: String,
    pub complete: bool,
    pub balanced: bool,
}

#[derive(Debug, Serialize)]
pub struct SpectrumJson {
    pub n: usize,
    pub logical_qubits: i64,
    pub ground_energy: f64,
    /// Sector label → `[[energy, multiplicity], ...]`; multiplicities are
    /// decimal strings because they may exceed 64 bits.
    pub sectors: BTreeMap<String, Vec<(f64, String)>>,
    pub single_particle: BTreeMap<String, Vec<Vec<f64>>>,
    pub audit: AuditJson,
}

pub fn spectrum_json(r: &SpectrumReport) -> SpectrumJson {
    let dim = 1u128.checked_shl(r.n as u32);
    SpectrumJson {
        n: r.n,
        logical_qubits: r.logical_qubits,
        ground_energy: r.ground_energy,
        sectors: r
            .sectors
            .iter()
            .map(|s| (bit_string(&s.label), s.energies.iter().map(|&(e, m)| (e, m.to_string())).collect()))
            .collect(),
        single_particle: r
            .sectors
            .iter()
            .map(|s| (bit_string(&s.label), s.components.iter().map(|c| c.spectrum.lambdas.clone()).collect()))
            .collect(),
        audit: AuditJson {
            total_states: r.total_states.to_string(),
            hilbert_dimension: dim.map_or_else(|| format!("2^{}", r.n), |d| d.to_string()),
            complete: r.complete,
            balanced: r.complete && dim == Some(r.total_states),
        },
    }
}

/// One-line summary of the state-count check.
pub fn audit_line(r: &SpectrumReport) -> String {
    let a = spectrum_json(r).audit;
    if !a.complete {
        format!("audit: partial ({} states listed, Hilbert space {})", a.total_states, a.hilbert_dimension)
    } else if a.balanced {
        format!("audit: OK ({} states = 2^{})", a.total_states, r.n)
    } else {
        format!("audit: MISMATCH ({} states, expected {})", a.total_states, a.hilbert_dimension)
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Frustration graph (vertices labelled by Pauli strings, edges by the
/// shared mode) and each component's root (edges labelled by Pauli strings,
/// spanning-tree edges bold).
pub fn dot(h: &HamiltonianSpec, comps: &[RootedComponent]) -> String {
    let mut out = String::new();
    let name = |t: usize| h.word(t).to_string();
    writeln!(out, "graph frustration {{").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for t in 0..h.len() {
        writeln!(out, "  t{t} [label={}];", quote(&name(t))).unwrap();
    }
    let mut mode_offset = 0;
    let mut shared_mode = BTreeMap::new();
    for c in comps {
        for (i, &(a, b)) in c.root.edges.iter().enumerate() {
            for (j, &(x, y)) in c.root.edges.iter().enumerate().skip(i + 1) {
                let common = [a, b].into_iter().find(|v| *v == x || *v == y);
                if let Some(v) = common {
                    shared_mode.insert((c.root.terms[i].min(c.root.terms[j]), c.root.terms[i].max(c.root.terms[j])), mode_offset + v);
                }
            }
        }
        mode_offset += c.root.modes;
    }
    for (tu, tv) in build_frustration_graph(h).graph.edges() {
        match shared_mode.get(&(tu.min(tv), tu.max(tv))) {
            Some(mode) => writeln!(out, "  t{tu} -- t{tv} [label=\"{mode}\"];").unwrap(),
            None => writeln!(out, "  t{tu} -- t{tv} [style=dashed];").unwrap(),
        }
    }
    writeln!(out, "}}").unwrap();
    writeln!(out, "graph root {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    let mut offset = 0;
    for (ci, c) in comps.iter().enumerate() {
        writeln!(out, "  subgraph cluster_{ci} {{").unwrap();
        for v in 0..c.root.modes {
            writeln!(out, "    m{0} [label=\"{0}\"];", offset + v).unwrap();
        }
        for (e, (&(a, b), &t)) in c.root.edges.iter().zip(&c.root.terms).enumerate() {
            let style = if c.tree.in_tree.contains(e) { ", style=bold, color=blue" } else { "" };
            writeln!(out, "    m{} -- m{} [label={}{style}];", offset + a, offset + b, quote(&name(t))).unwrap();
        }
        writeln!(out, "  }}").unwrap();
        offset += c.root.modes;
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Human-readable generator kind for tables.
pub fn kind_label(k: &GeneratorKind) -> String {
    match k {
        GeneratorKind::Twin { index } => format!("twin[{index}]"),
        GeneratorKind::Cycle { component, cycle } => format!("cycle[{component}.{cycle}]"),
        GeneratorKind::Parity { component } => format!("parity[{component}]"),
    }
}
