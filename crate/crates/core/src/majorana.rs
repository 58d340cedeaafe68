//! Exact products of Majorana monomials.

use fixedbitset::FixedBitSet;

/// `i^phase γ_{m_1} γ_{m_2} ⋯` with `m_1 < m_2 < ⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub modes: FixedBitSet,
    pub phase: u8,
}

impl Monomial {
    pub fn one(modes: usize) -> Self {
        Monomial { modes: FixedBitSet::with_capacity(modes), phase: 0 }
    }

    /// Right-multiplies by `γ_b`.
    pub fn times_mode(&mut self, b: usize) {
        let passed = self.modes.count_ones(b + 1..);
        if passed % 2 == 1 {
            self.phase = (self.phase + 2) % 4;
        }
        self.modes.toggle(b);
    }

    /// Right-multiplies by the hopping operator `i γ_a γ_b`.
    pub fn times_hop(&mut self, a: usize, b: usize) {
        self.phase = (self.phase + 1) % 4;
        self.times_mode(a);
        self.times_mode(b);
    }

    pub fn is_scalar(&self) -> bool {
        self.modes.is_clear()
    }
}
