//! Exact free-fermion solutions of Pauli Hamiltonians whose frustration
//! graph is a line graph.
//!
//! The pipeline: build the anticommutation graph of the terms, remove twin
//! vertices through their conserved products, recognize each component as a
//! line graph `L(R)`, collect the cycle and parity symmetries of `R`, and in
//! each symmetry sector orient `R` into a quadratic Majorana Hamiltonian whose
//! single-particle energies give the whole spectrum.

pub mod error;
pub mod frustration;
pub mod gf2;
pub mod graph;
pub mod linegraph;
pub mod majorana;
pub mod models;
pub mod oracle;
pub mod pauli;
pub mod report;
pub mod solver;
pub mod symmetry;

pub use error::{Error, Result};
pub use frustration::{build_frustration_graph, connected_components, FrustrationGraph, TwinReduction};
pub use graph::SimpleGraph;
pub use linegraph::{recognize, K3Root, KrauszDecomposition, ObstructionWitness, Recognition, RootGraph};
pub use pauli::{parse_pauli, HamiltonianSpec, PauliWord, SignedPauli, Term};
pub use solver::{analyze, solve_full, Model, SectorSelection, SolveOptions, SpectrumReport, TreeOrientation};
pub use symmetry::SymmetryReport;
