//! Hermitian Pauli words in symplectic form, exact phase bookkeeping and
//! Hamiltonian validation.
//!
//! A word `(a, b)` stands for `i^{a·b} X^a Z^b`, which is Hermitian for every
//! choice of masks. Qubit 0 is the leftmost character of the string form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n: usize,
    x: FixedBitSet,
    z: FixedBitSet,
}

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        PauliWord { n, x: FixedBitSet::with_capacity(n), z: FixedBitSet::with_capacity(n) }
    }

    pub fn from_masks(x: FixedBitSet, z: FixedBitSet) -> Self {
        assert_eq!(x.len(), z.len(), "mask lengths differ");
        PauliWord { n: x.len(), x, z }
    }

    /// Single-qubit operator `p` (one of `X`, `Y`, `Z`) on qubit `q`.
    pub fn single(n: usize, q: usize, p: char) -> Self {
        let mut w = Self::identity(n);
        w.set(q, p);
        w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> &FixedBitSet {
        &self.x
    }

    pub fn z_mask(&self) -> &FixedBitSet {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_clear() && self.z.is_clear()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x.union_count(&self.z)
    }

    pub fn get(&self, q: usize) -> char {
        match (self.x[q], self.z[q]) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn set(&mut self, q: usize, p: char) {
        let (x, z) = match p {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            _ => panic!("not a Pauli letter: {p}"),
        };
        self.x.set(q, x);
        self.z.set(q, z);
    }

    /// Componentwise XOR of the symplectic vectors (the word of the product).
    pub fn xor(&self, other: &PauliWord) -> PauliWord {
        let mut x = self.x.clone();
        x.symmetric_difference_with(&other.x);
        let mut z = self.z.clone();
        z.symmetric_difference_with(&other.z);
        PauliWord { n: self.n, x, z }
    }

    /// `a·b` counted over the integers.
    fn self_dot(&self) -> usize {
        self.x.intersection_count(&self.z)
    }

    /// Concatenated `x‖z` vector of length `2n`, used for GF(2) elimination.
    pub fn symplectic_vector(&self) -> FixedBitSet {
        let mut v = FixedBitSet::with_capacity(2 * self.n);
        for q in self.x.ones() {
            v.insert(q);
        }
        for q in self.z.ones() {
            v.insert(self.n + q);
        }
        v
    }

    pub fn from_symplectic_vector(n: usize, v: &FixedBitSet) -> PauliWord {
        let mut w = PauliWord::identity(n);
        for i in v.ones() {
            if i < n {
                w.x.insert(i);
            } else {
                w.z.insert(i - n);
            }
        }
        w
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliWord({self})")
    }
}

fn cmp_bits(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    let mut diff = a.clone();
    diff.symmetric_difference_with(b);
    match diff.minimum() {
        None => Ordering::Equal,
        Some(q) if b[q] => Ordering::Less,
        Some(_) => Ordering::Greater,
    }
}

impl Ord for PauliWord {
    /// Lexicographic on `(x_mask, z_mask)` read as bit strings from qubit 0.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| cmp_bits(&self.x, &other.x))
            .then_with(|| cmp_bits(&self.z, &other.z))
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn parse_pauli(text: &str, n: usize) -> Result<PauliWord> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() != n {
        return Err(Error::input(format!(
            "Pauli string {text:?} has length {}, expected {n}",
            chars.len()
        )));
    }
    let mut w = PauliWord::identity(n);
    for (q, c) in chars.into_iter().enumerate() {
        match c {
            'I' | 'X' | 'Y' | 'Z' => w.set(q, c),
            _ => return Err(Error::input(format!("illegal character {c:?} in Pauli string {text:?}"))),
        }
    }
    Ok(w)
}

/// `⟨j,k⟩ = a_j·b_k + b_j·a_k mod 2`; 1 iff the words anticommute.
pub fn symplectic_inner(j: &PauliWord, k: &PauliWord) -> Result<bool> {
    if j.n != k.n {
        return Err(Error::input(format!("qubit counts differ: {} vs {}", j.n, k.n)));
    }
    Ok(anticommutes(j, k))
}

/// Unchecked form of [`symplectic_inner`] for words known to share `n`.
pub fn anticommutes(j: &PauliWord, k: &PauliWord) -> bool {
    (j.x.intersection_count(&k.z) + j.z.intersection_count(&k.x)) % 2 == 1
}

/// A Pauli word times `i^phase`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub word: PauliWord,
    pub phase: u8,
}

impl SignedPauli {
    pub fn new(word: PauliWord, phase: u8) -> Self {
        SignedPauli { word, phase: phase % 4 }
    }

    pub fn hermitian(word: PauliWord) -> Self {
        SignedPauli { word, phase: 0 }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// `+1` or `-1` for Hermitian values.
    pub fn sign(&self) -> i8 {
        match self.phase {
            0 => 1,
            2 => -1,
            _ => panic!("phase i^{} is not real", self.phase),
        }
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.word)
    }
}

/// Exact product `j·k`.
pub fn multiply(j: &SignedPauli, k: &SignedPauli) -> Result<SignedPauli> {
    if j.word.n != k.word.n {
        return Err(Error::input(format!("qubit counts differ: {} vs {}", j.word.n, k.word.n)));
    }
    Ok(mul(j, k))
}

pub(crate) fn mul(j: &SignedPauli, k: &SignedPauli) -> SignedPauli {
    // σ_j σ_k = i^{a_j·b_j + a_k·b_k - a'·b' + 2 b_j·a_k} σ_{j⊕k}
    let word = j.word.xor(&k.word);
    let cross = j.word.z.intersection_count(&k.word.x);
    let d = j.phase as usize
        + k.phase as usize
        + j.word.self_dot()
        + k.word.self_dot()
        + 2 * cross
        + 3 * word.self_dot();
    SignedPauli { word, phase: (d % 4) as u8 }
}

/// Ordered product of Hermitian words.
pub fn product<'a>(n: usize, words: impl IntoIterator<Item = &'a PauliWord>) -> SignedPauli {
    words.into_iter().fold(SignedPauli::hermitian(PauliWord::identity(n)), |acc, w| {
        mul(&acc, &SignedPauli::hermitian(w.clone()))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub word: PauliWord,
    pub coeff: f64,
}

/// Validated Hamiltonian: merged, stripped of identity and zero terms, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    n: usize,
    terms: Vec<Term>,
}

impl HamiltonianSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn word(&self, j: usize) -> &PauliWord {
        &self.terms[j].word
    }

    pub fn coeffs(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    pub(crate) fn from_terms_unchecked(n: usize, terms: Vec<Term>) -> HamiltonianSpec {
        HamiltonianSpec { n, terms }
    }

    pub fn from_json(text: &str) -> Result<HamiltonianSpec> {
        let raw: RawHamiltonian =
            serde_json::from_str(text).map_err(|e| Error::input(format!("malformed Hamiltonian JSON: {e}")))?;
        raw.validate()
    }

    pub fn to_raw(&self) -> RawHamiltonian {
        RawHamiltonian {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| RawTerm { pauli: t.word.to_string(), coeff: t.coeff })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable")
    }
}

pub fn validate_hamiltonian(n: usize, raw: impl IntoIterator<Item = (PauliWord, f64)>) -> Result<HamiltonianSpec> {
    let mut merged: BTreeMap<PauliWord, f64> = BTreeMap::new();
    for (word, coeff) in raw {
        if word.n() != n {
            return Err(Error::input(format!("term {word} does not act on {n} qubits")));
        }
        if !coeff.is_finite() {
            return Err(Error::input(format!("coefficient of {word} is not finite")));
        }
        *merged.entry(word).or_insert(0.0) += coeff;
    }
    let terms: Vec<Term> = merged
        .into_iter()
        .filter(|(w, c)| !w.is_identity() && *c != 0.0)
        .map(|(word, coeff)| Term { word, coeff })
        .collect();
    if terms.is_empty() {
        return Err(Error::input("empty Hamiltonian after removing identity and zero terms"));
    }
    Ok(HamiltonianSpec { n, terms })
}

/// Wire format: `{"n": int, "terms": [{"pauli": "XYZ", "coeff": 1.0}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHamiltonian {
    pub n: usize,
    pub terms: Vec<RawTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub pauli: String,
    pub coeff: f64,
}

impl RawHamiltonian {
    pub fn validate(&self) -> Result<HamiltonianSpec> {
        let words = self
            .terms
            .iter()
            .map(|t| Ok((parse_pauli(&t.pauli, self.n)?, t.coeff)))
            .collect::<Result<Vec<_>>>()?;
        validate_hamiltonian(self.n, words)
    }
}
