//! Sector-by-sector free-fermion solution: orientation of the root graph,
//! the antisymmetric single-particle matrix, its canonical form and the
//! assembled many-body spectrum.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frustration::{build_frustration_graph, connected_components, FrustrationGraph, TwinReduction};
use crate::linegraph::{recognize, K3Root, KrauszDecomposition, Recognition, RootGraph};
use crate::majorana::Monomial;
use crate::pauli::{HamiltonianSpec, SignedPauli};
use crate::symmetry::{center, spanning_tree, SpanningTree, ComponentSymmetry, CycleBasis, GeneratorKind, GeneratorStatus, ParityInfo, SymmetryReport};

/// Relative threshold below which a single-particle energy counts as zero.
pub const ZERO_MODE_TOL: f64 = 1e-12;
/// Default cap on the number of enumerated symmetry sectors.
pub const DEFAULT_MAX_SECTORS: usize = 1 << 16;
/// Default cap on the number of distinct Fock labels combined per sector.
pub const DEFAULT_MAX_STATES: usize = 1 << 22;

/// Per edge: `true` maps the term to `iγ_a γ_b` for the stored edge `(a, b)`
/// with `a < b`, `false` to `iγ_b γ_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub forward: Vec<bool>,
}

impl Orientation {
    pub fn hop(&self, r: &RootGraph, e: usize) -> (usize, usize) {
        let (a, b) = r.edges[e];
        if self.forward[e] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// `i^f` with `∏_{e ∈ edges} iγγ = i^f · γ-monomial`, products in the
    /// given order.
    fn hop_product(&self, r: &RootGraph, edges: &[usize]) -> Monomial {
        let mut m = Monomial::one(r.modes);
        for &e in edges {
            let (t, h) = self.hop(r, e);
            m.times_hop(t, h);
        }
        m
    }
}

/// Directions for spanning-tree edges; every choice gives the same spectra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TreeOrientation {
    #[default]
    LowToHigh,
    Seeded(u64),
}

/// Solves each non-tree edge so that `(-1)^{x_j} i^d ∏ iγγ = +I` around its
/// fundamental cycle.
pub fn orient(r: &RootGraph, cycles: &CycleBasis, x: &[bool], tree: TreeOrientation) -> Orientation {
    assert_eq!(x.len(), cycles.cycles.len(), "one sector bit per fundamental cycle");
    let mut forward = vec![true; r.edges.len()];
    if let TreeOrientation::Seeded(seed) = tree {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for e in cycles.tree.in_tree.ones() {
            forward[e] = rng.random_bool(0.5);
        }
    }
    let mut o = Orientation { forward };
    for (cyc, &xj) in cycles.cycles.iter().zip(x) {
        let m = o.hop_product(r, &cyc.members);
        assert!(m.is_scalar(), "a cycle product of hopping terms is a scalar");
        let total = (2 * xj as u8 + cyc.d + m.phase) % 4;
        assert!(total % 2 == 0, "cycle phases must be real");
        if total == 2 {
            o.forward[cyc.edge] = !o.forward[cyc.edge];
        }
    }
    o
}

/// Whether every fundamental cycle satisfies its sector constraint.
pub fn orientation_consistent(r: &RootGraph, cycles: &CycleBasis, x: &[bool], o: &Orientation) -> bool {
    cycles.cycles.iter().zip(x).all(|(cyc, &xj)| {
        let m = o.hop_product(r, &cyc.members);
        m.is_scalar() && (2 * xj as u8 + cyc.d + m.phase) % 4 == 0
    })
}

/// `h` with `h[t][u] = c/2 = -h[u][t]` for each term `c·iγ_t γ_u`, so that
/// `iγᵀhγ` reproduces the Hamiltonian.
pub fn build_h(r: &RootGraph, o: &Orientation, coeffs: &[f64]) -> DMatrix<f64> {
    assert_eq!(coeffs.len(), r.edges.len());
    let mut h = DMatrix::zeros(r.modes, r.modes);
    for (e, &c) in coeffs.iter().enumerate() {
        let (t, u) = o.hop(r, e);
        assert!(h[(t, u)] == 0.0 && h[(u, t)] == 0.0, "edge assigned twice");
        h[(t, u)] = c / 2.0;
        h[(u, t)] = -c / 2.0;
    }
    h
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeFermionSpectrum {
    /// Non-negative, descending, `⌊|Ṽ|/2⌋` entries.
    pub lambdas: Vec<f64>,
    pub zero_mode: bool,
    /// Sign of `Pf(h)` for even `|Ṽ|`; absent when some `λ` vanishes or the
    /// mode count is odd.
    pub pfaffian_sign: Option<i8>,
}

impl FreeFermionSpectrum {
    pub fn modes(&self) -> usize {
        2 * self.lambdas.len() + self.zero_mode as usize
    }

    /// Energy with every label bit set, `-2Σλ`, optionally restricted to a
    /// fermion parity.
    pub fn ground(&self, parity: Option<i8>) -> f64 {
        let sum: f64 = self.lambdas.iter().sum();
        let lowest = -2.0 * sum;
        match (parity, self.lambdas.last()) {
            (Some(p), Some(&min)) if self.label_parity_all_ones() != p && self.pfaffian_sign.is_some() => {
                lowest + 4.0 * min
            }
            _ => lowest,
        }
    }

    fn label_parity_all_ones(&self) -> i8 {
        let s = self.pfaffian_sign.unwrap_or(1);
        if self.lambdas.len() % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Many-body energies `2Σ(-1)^{x_j}λ_j` over labels whose fermion parity
    /// `sgn Pf(h)·(-1)^{Σx}` equals `parity`, if given.
    pub fn energies(&self, parity: Option<i8>) -> Vec<f64> {
        let m = self.lambdas.len();
        let sign = self.pfaffian_sign.unwrap_or(1);
        (0u64..1 << m)
            .filter(|x| match parity {
                None => true,
                Some(p) => {
                    let ones = x.count_ones() as usize;
                    let label = if ones % 2 == 0 { sign } else { -sign };
                    label == p
                }
            })
            .map(|x| {
                2.0 * self
                    .lambdas
                    .iter()
                    .enumerate()
                    .map(|(j, &l)| if x >> j & 1 == 1 { -l } else { l })
                    .sum::<f64>()
            })
            .collect()
    }
}

/// Pfaffian of a real antisymmetric matrix by pivoted skew elimination.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = a.clone();
    let mut pf = 1.0;
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let kp = (k + 1..n)
            .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
            .unwrap();
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        if a[(k + 1, k)] == 0.0 {
            return 0.0;
        }
        pf *= a[(k, k + 1)];
        if k + 2 < n {
            let pivot = a[(k, k + 1)];
            let tau: Vec<f64> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    pf
}

/// Paired singular values of an antisymmetric `h`, i.e. the `λ_j` of its real
/// canonical form `⊕ [[0, -λ_j], [λ_j, 0]]`.
pub fn block_diagonalize(h: &DMatrix<f64>) -> Result<FreeFermionSpectrum> {
    let n = h.nrows();
    if h.ncols() != n || (0..n).any(|i| (0..n).any(|j| h[(i, j)] != -h[(j, i)])) {
        return Err(Error::input("single-particle matrix is not antisymmetric"));
    }
    let scale = h.amax();
    let mut sv: Vec<f64> = h.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_unstable_by(|a, b| b.total_cmp(a));
    let tol = ZERO_MODE_TOL * scale;
    let lambdas: Vec<f64> = (0..n / 2).map(|j| {
        let l = 0.5 * (sv[2 * j] + sv[2 * j + 1]);
        if l < tol {
            0.0
        } else {
            l
        }
    }).collect();
    let pfaffian_sign = if n % 2 == 0 && lambdas.last().is_none_or(|&l| l > 0.0) {
        let pf = pfaffian(h);
        (pf != 0.0).then(|| if pf > 0.0 { 1 } else { -1 })
    } else {
        None
    };
    Ok(FreeFermionSpectrum { lambdas, zero_mode: n % 2 == 1, pfaffian_sign })
}

#[derive(Clone, Debug, Default)]
pub enum SectorSelection {
    #[default]
    All,
    Explicit(Vec<Vec<bool>>),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub k3_root: K3Root,
    pub max_sectors: usize,
    pub max_states: usize,
    pub sectors: SectorSelection,
    pub tree: TreeOrientation,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            k3_root: K3Root::Claw,
            max_sectors: DEFAULT_MAX_SECTORS,
            max_states: DEFAULT_MAX_STATES,
            sectors: SectorSelection::All,
            tree: TreeOrientation::LowToHigh,
        }
    }
}

/// Recognized model: twin reduction, per-component roots and the symmetry
/// generators with their dependencies.
#[derive(Clone, Debug)]
pub struct Model {
    pub spec: HamiltonianSpec,
    pub graph: FrustrationGraph,
    pub twins: TwinReduction,
    pub components: Vec<ComponentSymmetry>,
    /// Clique partition behind each component's root.
    pub krausz: Vec<KrauszDecomposition>,
    pub symmetry: SymmetryReport,
}

pub fn analyze(h: &HamiltonianSpec, k3: K3Root) -> Result<Model> {
    let graph = build_frustration_graph(h);
    let twins = TwinReduction::analyze(h, &graph);
    let reduced = graph.induced(&twins.kept);
    let mut components = Vec::new();
    let mut cliques = Vec::new();
    for comp in connected_components(&reduced) {
        match recognize(&comp, k3)? {
            Recognition::Root { root, krausz } => {
                components.push(ComponentSymmetry::new(h, comp, root)?);
                cliques.push(krausz);
            }
            Recognition::Obstruction(w) => return Err(Error::Obstruction(Box::new(w))),
        }
    }
    let symmetry = center(h, &twins, &mut components);
    Ok(Model { spec: h.clone(), graph, twins, components, krausz: cliques, symmetry })
}

/// A recognized component with its clique partition and spanning tree.
#[derive(Clone, Debug)]
pub struct RootedComponent {
    pub graph: FrustrationGraph,
    pub root: RootGraph,
    pub krausz: KrauszDecomposition,
    pub tree: SpanningTree,
}

/// Line-graph test of the unreduced frustration graph: succeeds exactly when
/// every term maps to its own Majorana bilinear.
pub fn recognize_hamiltonian(h: &HamiltonianSpec, k3: K3Root) -> Result<Vec<RootedComponent>> {
    let graph = build_frustration_graph(h);
    connected_components(&graph)
        .into_iter()
        .map(|comp| match recognize(&comp, k3)? {
            Recognition::Root { root, krausz } => {
                let tree = spanning_tree(&root)?;
                Ok(RootedComponent { graph: comp, root, krausz, tree })
            }
            Recognition::Obstruction(w) => Err(Error::Obstruction(Box::new(w))),
        })
        .collect()
}

impl Model {
    /// Components of the twin-reduced graph in the same form as
    /// [`recognize_hamiltonian`].
    pub fn rooted(&self) -> Vec<RootedComponent> {
        self.components
            .iter()
            .zip(&self.krausz)
            .map(|(c, k)| RootedComponent {
                graph: c.graph.clone(),
                root: c.root.clone(),
                krausz: k.clone(),
                tree: c.cycles.tree.clone(),
            })
            .collect()
    }
}

/// One sector's single-particle data for a component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentSector {
    pub spectrum: FreeFermionSpectrum,
    /// Required eigenvalue of `i^{|Ṽ|/2} γ_0 ⋯ γ_{|Ṽ|-1}`, for even `|Ṽ|`.
    pub fermion_parity: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorSolution {
    /// One bit per independent generator; `true` selects eigenvalue `-1`.
    pub label: Vec<bool>,
    pub components: Vec<ComponentSector>,
    /// `(energy, multiplicity)`, ascending; empty when the state cap was hit.
    pub energies: Vec<(f64, u128)>,
    pub ground_energy: f64,
    pub parity_filtered: bool,
}

impl SectorSolution {
    pub fn state_count(&self) -> u128 {
        self.energies.iter().map(|&(_, m)| m).sum()
    }

    pub fn label_string(&self) -> String {
        bit_string(&self.label)
    }
}

pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bit_string(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::input(format!("sector label {s:?} must be a string of 0 and 1"))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub logical_qubits: i64,
    pub sectors: Vec<SectorSolution>,
    pub ground_energy: f64,
    /// `Σ` multiplicities over the enumerated sectors.
    pub total_states: u128,
    /// All sectors enumerated and all energies listed.
    pub complete: bool,
}

impl SpectrumReport {
    /// Every energy repeated by its multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .sectors
            .iter()
            .flat_map(|s| s.energies.iter().flat_map(|&(e, m)| std::iter::repeat_n(e, m as usize)))
            .collect();
        out.sort_unstable_by(f64::total_cmp);
        out
    }
}

fn merge_levels(mut levels: Vec<(f64, u128)>, scale: f64) -> Vec<(f64, u128)> {
    levels.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let tol = 1e-11 * scale.max(1.0);
    let mut out: Vec<(f64, u128)> = Vec::with_capacity(levels.len());
    for (e, m) in levels {
        match out.last_mut() {
            Some(last) if (e - last.0).abs() <= tol => last.1 += m,
            _ => out.push((e, m)),
        }
    }
    out
}

impl Model {
    pub fn logical_qubits(&self) -> i64 {
        self.symmetry.logical_qubits
    }

    pub fn sector_count(&self) -> u128 {
        1u128 << self.symmetry.center_size
    }

    fn values_of(&self, values: &[bool], pick: impl Fn(&GeneratorKind) -> bool) -> Vec<bool> {
        self.symmetry
            .generators
            .iter()
            .zip(values)
            .filter(|(g, _)| pick(&g.kind))
            .map(|(_, &v)| v)
            .collect()
    }

    /// Coefficients of every kept term (indexed by term id; removed twins 0)
    /// after folding in the given twin sector.
    fn folded(&self, coeffs: &[f64], values: &[bool]) -> Result<Vec<f64>> {
        let twin_bits = self.values_of(values, |k| matches!(k, GeneratorKind::Twin { .. }));
        let kept = self.twins.fold(coeffs, &twin_bits)?;
        let mut out = vec![0.0; coeffs.len()];
        for (&t, c) in self.twins.kept.iter().zip(kept) {
            out[t] = c;
        }
        Ok(out)
    }

    /// Single-particle data for every component in one sector, using the
    /// given per-term coefficients (zero entries allowed).
    pub fn sector_components(
        &self,
        coeffs: &[f64],
        sector: &[bool],
        tree: TreeOrientation,
    ) -> Result<Vec<ComponentSector>> {
        if sector.len() != self.symmetry.center_size {
            return Err(Error::input(format!(
                "sector label has {} bits, expected {}",
                sector.len(),
                self.symmetry.center_size
            )));
        }
        if coeffs.len() != self.spec.len() {
            return Err(Error::input("coefficient vector does not match the term list"));
        }
        let values = self.symmetry.values(sector);
        let folded = self.folded(coeffs, &values)?;
        self.components
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                let x = self.values_of(&values, |k| matches!(k, GeneratorKind::Cycle { component, .. } if *component == c));
                let o = orient(&comp.root, &comp.cycles, &x, tree);
                let edge_coeffs: Vec<f64> = comp.root.terms.iter().map(|&t| folded[t]).collect();
                let spectrum = block_diagonalize(&build_h(&comp.root, &o, &edge_coeffs))?;
                let fermion_parity = match &comp.parity {
                    ParityInfo { t_join: Some(t), d, .. } => {
                        let p = self.values_of(&values, |k| *k == GeneratorKind::Parity { component: c })[0];
                        let eta = parity_image_sign(&comp.root, &o, t, *d);
                        Some(if p { -eta } else { eta })
                    }
                    _ => None,
                };
                Ok(ComponentSector { spectrum, fermion_parity })
            })
            .collect()
    }

    /// Independent generators with their eigenvalues in a sector, for
    /// projecting a dense operator onto it.
    pub fn sector_stabilizers(&self, sector: &[bool]) -> Vec<(SignedPauli, i8)> {
        self.symmetry
            .generators
            .iter()
            .zip(self.symmetry.values(sector))
            .filter(|(g, _)| matches!(g.status, GeneratorStatus::Free { .. }))
            .map(|(g, v)| (g.pauli.clone(), if v { -1 } else { 1 }))
            .collect()
    }

    pub fn solve_sector(&self, sector: &[bool], opts: &SolveOptions) -> Result<SectorSolution> {
        self.solve_sector_with(&self.spec.coeffs(), sector, opts)
    }

    fn solve_sector_with(&self, coeffs: &[f64], sector: &[bool], opts: &SolveOptions) -> Result<SectorSolution> {
        let components = self.sector_components(coeffs, sector, opts.tree)?;
        let ground_energy = components.iter().map(|c| c.spectrum.ground(c.fermion_parity)).sum();
        let parity_filtered = components.iter().any(|c| c.fermion_parity.is_some());
        let labels: f64 = components
            .iter()
            .map(|c| {
                let m = c.spectrum.lambdas.len() as i32;
                2f64.powi(m - c.fermion_parity.is_some() as i32)
            })
            .product();
        let mut energies = Vec::new();
        if labels <= opts.max_states as f64 {
            let scale = self.spec.max_abs_coeff() * self.spec.len() as f64;
            let mut acc: Vec<(f64, u128)> = vec![(0.0, 1)];
            for c in &components {
                let levels = merge_levels(c.spectrum.energies(c.fermion_parity).into_iter().map(|e| (e, 1)).collect(), scale);
                let combined = acc
                    .iter()
                    .flat_map(|&(a, ma)| levels.iter().map(move |&(b, mb)| (a + b, ma * mb)))
                    .collect();
                acc = merge_levels(combined, scale);
            }
            let degeneracy = 1u128 << self.logical_qubits();
            energies = acc.into_iter().map(|(e, m)| (e, m * degeneracy)).collect();
        }
        Ok(SectorSolution { label: sector.to_vec(), components, energies, ground_energy, parity_filtered })
    }

    pub fn sector_labels(&self, opts: &SolveOptions) -> Result<Vec<Vec<bool>>> {
        let f = self.symmetry.center_size;
        match &opts.sectors {
            SectorSelection::Explicit(labels) => {
                for l in labels {
                    if l.len() != f {
                        return Err(Error::input(format!("sector label has {} bits, expected {f}", l.len())));
                    }
                }
                Ok(labels.clone())
            }
            SectorSelection::All => {
                if f >= 64 || (1u64 << f) > opts.max_sectors as u64 {
                    return Err(Error::ResourceCap(format!(
                        "{f} independent symmetry generators give 2^{f} sectors, above the cap of {}; name sectors explicitly",
                        opts.max_sectors
                    )));
                }
                Ok((0u64..1 << f).map(|i| (0..f).map(|b| i >> b & 1 == 1).collect()).collect())
            }
        }
    }

    pub fn solve(&self, opts: &SolveOptions) -> Result<SpectrumReport> {
        let labels = self.sector_labels(opts)?;
        let all = matches!(opts.sectors, SectorSelection::All);
        let sectors = labels.iter().map(|l| self.solve_sector(l, opts)).collect::<Result<Vec<_>>>()?;
        let ground_energy = sectors.iter().map(|s| s.ground_energy).fold(f64::INFINITY, f64::min);
        let listed = sectors.iter().all(|s| !s.energies.is_empty());
        let total_states = sectors.iter().map(SectorSolution::state_count).sum();
        Ok(SpectrumReport {
            n: self.spec.n(),
            logical_qubits: self.logical_qubits(),
            sectors,
            ground_energy,
            total_states,
            complete: all && listed,
        })
    }
}

/// `η` with `σ_P ↦ η · i^{|Ṽ|/2} γ_0 ⋯ γ_{|Ṽ|-1}` under the orientation.
fn parity_image_sign(r: &RootGraph, o: &Orientation, t_join: &[usize], d: u8) -> i8 {
    let m = o.hop_product(r, t_join);
    let mut all = FixedBitSet::with_capacity(r.modes);
    all.insert_range(..);
    assert_eq!(m.modes, all, "a T-join product covers every mode once");
    let e = (d as usize + m.phase as usize + 4 * r.modes - r.modes / 2) % 4;
    match e {
        0 => 1,
        2 => -1,
        _ => panic!("parity image has imaginary phase"),
    }
}

/// Full pipeline: recognition, symmetry analysis and every sector's spectrum.
pub fn solve_full(h: &HamiltonianSpec, opts: &SolveOptions) -> Result<SpectrumReport> {
    analyze(h, opts.k3_root)?.solve(opts)
}

/// Lambdas of each component for a family of coefficient vectors sharing
/// one term structure; entries may be zero.
pub fn lambda_sweep(model: &Model, coeff_sets: &[Vec<f64>], sector: &[bool]) -> Result<Vec<Vec<Vec<f64>>>> {
    coeff_sets
        .iter()
        .map(|c| {
            Ok(model
                .sector_components(c, sector, TreeOrientation::LowToHigh)?
                .into_iter()
                .map(|s| s.spectrum.lambdas)
                .collect())
        })
        .collect()
}

/// Maps words of `terms` onto the term ids of `model`, for sweeps whose
/// coefficients vanish at some parameter values.
pub fn coefficients_for(model: &Model, terms: &[(crate::pauli::PauliWord, f64)]) -> Result<Vec<f64>> {
    let index: HashMap<_, _> = model.spec.terms().iter().enumerate().map(|(i, t)| (&t.word, i)).collect();
    let mut out = vec![0.0; model.spec.len()];
    for (w, c) in terms {
        match index.get(w) {
            Some(&i) => out[i] += c,
            None if *c == 0.0 => {}
            None => return Err(Error::input(format!("term {w} is not part of the analysed structure"))),
        }
    }
    Ok(out)
}
