//! Dense exact diagonalization used as ground truth. Matrices are assembled
//! from explicit 2×2 Pauli matrices, independently of the symplectic code.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{anticommutes, HamiltonianSpec, PauliWord, SignedPauli};

pub const MAX_ORACLE_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
}

fn single(p: char) -> DMatrix<Complex64> {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    let entries = match p {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        _ => unreachable!("Pauli letters are I, X, Y, Z"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product with qubit 0 as the most significant factor.
pub fn pauli_matrix(w: &PauliWord) -> DMatrix<Complex64> {
    (0..w.n()).fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, q| acc.kronecker(&single(w.get(q))))
}

pub fn signed_matrix(s: &SignedPauli) -> DMatrix<Complex64> {
    let phase = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];
    pauli_matrix(&s.word) * phase[s.phase as usize % 4]
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::ResourceCap(format!("dense oracle is limited to {MAX_ORACLE_QUBITS} qubits, got {n}")));
    }
    Ok(())
}

pub fn dense_matrix(h: &HamiltonianSpec) -> Result<DenseOperator> {
    check_size(h.n())?;
    let dim = 1usize << h.n();
    let mut matrix = DMatrix::zeros(dim, dim);
    for t in h.terms() {
        matrix += pauli_matrix(&t.word) * Complex64::new(t.coeff, 0.0);
    }
    Ok(DenseOperator { n: h.n(), matrix })
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn hermiticity_error(m: &DMatrix<Complex64>) -> f64 {
    max_entry(&(m - m.adjoint()))
}

/// All `2ⁿ` eigenvalues, ascending.
pub fn full_spectrum(d: &DenseOperator) -> Result<Vec<f64>> {
    if hermiticity_error(&d.matrix) >= 1e-12 {
        return Err(Error::input("operator is not Hermitian"));
    }
    let mut ev: Vec<f64> = d.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_unstable_by(f64::total_cmp);
    Ok(ev)
}

/// `∏ (I + s_j σ_j)/2` for commuting Hermitian stabilizers with values `s_j = ±1`.
pub fn projector(n: usize, stabilizers: &[(SignedPauli, i8)]) -> Result<DMatrix<Complex64>> {
    check_size(n)?;
    for (a, (sa, _)) in stabilizers.iter().enumerate() {
        if !sa.is_hermitian() || sa.word.n() != n {
            return Err(Error::input(format!("stabilizer {sa} is not a Hermitian {n}-qubit operator")));
        }
        if stabilizers[..a].iter().any(|(sb, _)| anticommutes(&sa.word, &sb.word)) {
            return Err(Error::input("stabilizers do not commute"));
        }
    }
    let dim = 1usize << n;
    let id = DMatrix::<Complex64>::identity(dim, dim);
    Ok(stabilizers.iter().fold(id.clone(), |p, (s, v)| {
        let half = Complex64::new(0.5, 0.0);
        p * ((&id + signed_matrix(s) * Complex64::new(*v as f64, 0.0)) * half)
    }))
}

/// Spectrum of `D` restricted to the joint eigenspace, with multiplicity.
/// The complement is shifted above the spectrum and then discarded.
pub fn sector_project(d: &DenseOperator, stabilizers: &[(SignedPauli, i8)]) -> Result<Vec<f64>> {
    let p = projector(d.n, stabilizers)?;
    let commutator = &p * &d.matrix - &d.matrix * &p;
    if commutator.iter().any(|c| c.norm() > 1e-9) {
        return Err(Error::input("stabilizers do not commute with the operator"));
    }
    let rank = p.trace().re.round() as usize;
    let dim = p.nrows();
    let bound: f64 = d.matrix.iter().map(|c| c.norm()).sum::<f64>() + 1.0;
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let shifted = &p * &d.matrix * &p + (id - &p) * Complex64::new(bound, 0.0);
    let shifted = (&shifted + shifted.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev = full_spectrum(&DenseOperator { n: d.n, matrix: shifted })?;
    ev.truncate(rank);
    Ok(ev)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultisetComparison {
    pub equal: bool,
    pub max_deviation: f64,
    pub first_mismatch: Option<usize>,
    pub len_a: usize,
    pub len_b: usize,
}

/// Sorted element-wise matching within an absolute tolerance.
pub fn compare_multisets(a: &[f64], b: &[f64], tol: f64) -> MultisetComparison {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let mut max_deviation: f64 = 0.0;
    let mut first_mismatch = None;
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        let dev = (x - y).abs();
        max_deviation = max_deviation.max(dev);
        if dev > tol && first_mismatch.is_none() {
            first_mismatch = Some(i);
        }
    }
    if a.len() != b.len() && first_mismatch.is_none() {
        first_mismatch = Some(a.len().min(b.len()));
    }
    MultisetComparison { equal: first_mismatch.is_none(), max_deviation, first_mismatch, len_a: a.len(), len_b: b.len() }
}
