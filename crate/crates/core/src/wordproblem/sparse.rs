//! Finitely supported perturbations of the infinite identity matrix.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::IntScalar;

/// An element of `GL_∞` stored column by column; only entries that differ
/// from the identity are kept. Indices start at 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SparseMatrix<T> {
    columns: BTreeMap<u64, BTreeMap<u64, T>>,
}

/// Work done by one column operation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ColumnOpCost {
    pub additions: u64,
    /// Sum over the additions of the larger operand's bit length.
    pub bit_operations: u64,
    /// Largest bit length written.
    pub max_bits: u64,
}

impl<T: IntScalar> SparseMatrix<T> {
    pub fn identity() -> Self {
        Self { columns: BTreeMap::new() }
    }

    /// `e_{i,j}`: the identity with a 1 at `(i, j)`, `i ≠ j`.
    pub fn elementary(i: u64, j: u64) -> Self {
        assert!(i != j && i >= 1 && j >= 1, "elementary matrices need distinct indices ≥ 1");
        let mut m = Self::identity();
        m.columns.entry(j).or_default().insert(i, T::one());
        m
    }

    fn identity_entry(row: u64, col: u64) -> T {
        if row == col {
            T::one()
        } else {
            T::zero()
        }
    }

    pub fn get(&self, row: u64, col: u64) -> T {
        self.columns.get(&col).and_then(|c| c.get(&row)).cloned().unwrap_or_else(|| Self::identity_entry(row, col))
    }

    fn put(&mut self, row: u64, col: u64, value: T) {
        if value == Self::identity_entry(row, col) {
            if let Some(c) = self.columns.get_mut(&col) {
                c.remove(&row);
                if c.is_empty() {
                    self.columns.remove(&col);
                }
            }
        } else {
            self.columns.entry(col).or_default().insert(row, value);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.columns.is_empty()
    }

    /// Stored (non-identity) entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, &T)> {
        self.columns.iter().flat_map(|(&c, col)| col.iter().map(move |(&r, v)| (r, c, v)))
    }

    pub fn stored_entries(&self) -> usize {
        self.columns.values().map(BTreeMap::len).sum()
    }

    /// Nonzero entries of column `col`, including the implicit diagonal one.
    fn column(&self, col: u64) -> Vec<(u64, T)> {
        let mut out: Vec<(u64, T)> = self
            .columns
            .get(&col)
            .map(|c| c.iter().filter(|(_, v)| !v.is_zero()).map(|(&r, v)| (r, v.clone())).collect())
            .unwrap_or_default();
        if !self.columns.get(&col).is_some_and(|c| c.contains_key(&col)) {
            out.push((col, T::one()));
        }
        out
    }

    /// Right multiplication by `e_{i,j}^{sign}`: `col_j ← col_j + sign·col_i`.
    pub fn right_multiply_elementary(&mut self, i: u64, j: u64, negative: bool) -> ColumnOpCost {
        assert!(i != j, "elementary matrices need distinct indices");
        let mut cost = ColumnOpCost::default();
        for (row, v) in self.column(i) {
            let old = self.get(row, j);
            cost.additions += 1;
            cost.bit_operations += old.bit_length().max(v.bit_length()).max(1);
            let new = if negative { old - v } else { old + v };
            cost.max_bits = cost.max_bits.max(new.bit_length());
            self.put(row, j, new);
        }
        cost
    }

    /// Largest bit length among stored entries.
    pub fn max_bit_length(&self) -> u64 {
        self.entries().map(|(_, _, v)| v.bit_length()).max().unwrap_or(1)
    }

    /// Smallest `d` with all non-identity entries inside the top-left `d × d` block.
    pub fn support_size(&self) -> u64 {
        self.entries().map(|(r, c, _)| r.max(c)).max().unwrap_or(0)
    }
}

impl<T: IntScalar> fmt::Display for SparseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        f.write_str("I + {")?;
        let mut first = true;
        for (r, c, v) in self.entries() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            let delta = if r == c { v.clone() - T::one() } else { v.clone() };
            write!(f, "({r},{c}): {delta}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn column_operations() {
        let mut m = SparseMatrix::<BigInt>::identity();
        m.right_multiply_elementary(1, 2, false);
        assert_eq!(m, SparseMatrix::elementary(1, 2));
        m.right_multiply_elementary(1, 2, true);
        assert!(m.is_identity());
        for _ in 0..7 {
            m.right_multiply_elementary(2, 1, false);
        }
        assert_eq!(m.get(2, 1), BigInt::from(7));
        assert_eq!(m.stored_entries(), 1);
        assert_eq!(m.to_string(), "I + {(2,1): 7}");
    }

    #[test]
    fn diagonal_entries_are_stored_only_when_not_one() {
        let mut m = SparseMatrix::<i64>::identity();
        m.right_multiply_elementary(1, 2, false);
        m.right_multiply_elementary(2, 1, true);
        // e12 · e21^-1 has (1,1) entry 0.
        assert_eq!(m.get(1, 1), 0);
        assert!(m.entries().all(|(r, c, v)| if r == c { *v != 1 } else { *v != 0 }));
    }
}
