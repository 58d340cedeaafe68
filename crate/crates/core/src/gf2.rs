//! Linear algebra over GF(2) on bit rows.

use fixedbitset::FixedBitSet;

/// Incremental row-echelon basis that remembers how each stored row was
/// assembled from the vectors accepted so far.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    rows: Vec<(usize, FixedBitSet, FixedBitSet)>,
    accepted: usize,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.accepted
    }

    fn reduce(&self, v: &FixedBitSet) -> (FixedBitSet, FixedBitSet) {
        let mut v = v.clone();
        let mut combo = FixedBitSet::with_capacity(self.accepted + 1);
        for (pivot, row, row_combo) in &self.rows {
            if v.contains(*pivot) {
                v.symmetric_difference_with(row);
                combo.grow(row_combo.len());
                combo.symmetric_difference_with(row_combo);
            }
        }
        (v, combo)
    }

    /// Expresses `v` as a sum of accepted vectors, if possible; bit `i` of
    /// the result marks the `i`-th accepted vector.
    pub fn express(&self, v: &FixedBitSet) -> Option<FixedBitSet> {
        let (rest, combo) = self.reduce(v);
        rest.is_clear().then_some(combo)
    }

    /// Adds `v` if it is independent, returning its index among accepted
    /// vectors; otherwise returns the combination that produces it.
    pub fn insert(&mut self, v: &FixedBitSet) -> Result<usize, FixedBitSet> {
        let (rest, mut combo) = self.reduce(v);
        let Some(pivot) = rest.minimum() else {
            return Err(combo);
        };
        let index = self.accepted;
        combo.grow(index + 1);
        combo.insert(index);
        // keep rows fully reduced against the new pivot
        for (_, row, row_combo) in self.rows.iter_mut() {
            if row.contains(pivot) {
                row.symmetric_difference_with(&rest);
                row_combo.grow(combo.len());
                row_combo.symmetric_difference_with(&combo);
            }
        }
        self.rows.push((pivot, rest, combo));
        self.accepted += 1;
        Ok(index)
    }
}

pub fn rank(rows: impl IntoIterator<Item = FixedBitSet>) -> usize {
    let mut basis = Gf2Basis::new();
    rows.into_iter().filter(|r| basis.insert(r).is_ok()).count()
}
