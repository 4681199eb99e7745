//! Word problem of `SL_∞(ℤ)` over the generators `c_k`: `c_k = e_{i,j}` when
//! `k = 2^i·3^j` with `i, j ≥ 1` and `i ≠ j`, and `c_k = 1` otherwise.

use num_bigint::BigInt;
use serde::Serialize;

use super::sparse::SparseMatrix;
use crate::oracle::{OracleError, WordOracle};
use crate::words::{Word, C_FAMILY};

/// Exponents `(i, j)` with `k = 2^i·3^j` and no other prime factor, before
/// any restriction on `i` and `j`. `None` for `k = 0` and for `k` with a prime
/// factor other than 2 and 3.
pub fn decode_index(k: u64) -> Option<(u32, u32)> {
    if k == 0 {
        return None;
    }
    let i = k.trailing_zeros();
    let mut rest = k >> i;
    let mut j = 0;
    while rest.is_multiple_of(3) {
        rest /= 3;
        j += 1;
    }
    (rest == 1).then_some((i, j))
}

/// The elementary matrix `c_k` stands for, or `None` when `c_k = 1`.
pub fn elementary_indices(k: u64) -> Option<(u64, u64)> {
    match decode_index(k) {
        Some((i, j)) if i >= 1 && j >= 1 && i != j => Some((u64::from(i), u64::from(j))),
        _ => None,
    }
}

pub fn slinf_generator(k: u64) -> SparseMatrix<BigInt> {
    match elementary_indices(k) {
        Some((i, j)) => SparseMatrix::elementary(i, j),
        None => SparseMatrix::identity(),
    }
}

/// Measured work of one product evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SlinfCost {
    /// Word length `l`.
    pub length: u64,
    /// Largest generator index `κ`.
    pub kappa: u64,
    /// Divisions spent decoding indices into `(i, j)`.
    pub factorization_steps: u64,
    pub column_operations: u64,
    pub additions: u64,
    pub bit_operations: u64,
    /// Largest bit length of any entry written along the way.
    pub max_bits: u64,
}

impl SlinfCost {
    /// Total step count: decoding plus bit-level addition work.
    pub fn steps(&self) -> u64 {
        self.factorization_steps + self.bit_operations
    }
}

/// The product of a word in the `c_k`, with its cost.
#[derive(Clone, Debug)]
pub struct SlinfRun {
    pub product: SparseMatrix<BigInt>,
    pub cost: SlinfCost,
}

impl SlinfRun {
    pub fn is_trivial(&self) -> bool {
        self.product.is_identity()
    }
}

/// Multiplies the word left to right, each letter as one column operation.
pub fn slinf_evaluate(w: &Word) -> Result<SlinfRun, OracleError> {
    let mut product = SparseMatrix::identity();
    let mut cost = SlinfCost { length: w.len() as u64, ..SlinfCost::default() };
    for l in w.letters() {
        let k = match (l.gen.family(), l.gen.index()) {
            (C_FAMILY, Some(k)) => k,
            _ => return Err(OracleError::UnknownGenerator(l.gen.to_string())),
        };
        cost.kappa = cost.kappa.max(k);
        cost.factorization_steps += u64::from(k.max(1).ilog2()) + 1;
        if let Some((i, j)) = elementary_indices(k) {
            let op = product.right_multiply_elementary(i, j, l.inverse);
            cost.column_operations += 1;
            cost.additions += op.additions;
            cost.bit_operations += op.bit_operations;
            cost.max_bits = cost.max_bits.max(op.max_bits);
        }
    }
    Ok(SlinfRun { product, cost })
}

pub fn slinf_is_trivial(w: &Word) -> Result<(bool, SlinfCost), OracleError> {
    let run = slinf_evaluate(w)?;
    Ok((run.is_trivial(), run.cost))
}

/// [`WordOracle`] for `SL_∞(ℤ)` on words in the `c_k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SlinfOracle;

impl WordOracle for SlinfOracle {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(slinf_evaluate(w)?.is_trivial())
    }

    fn describe(&self) -> String {
        "SL_inf(Z) by sparse column operations, O(l^2 log kappa)".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, None).unwrap()
    }

    #[test]
    fn generator_decoding() {
        assert_eq!(elementary_indices(12), Some((2, 1)));
        assert_eq!(elementary_indices(18), Some((1, 2)));
        assert_eq!(elementary_indices(5), None);
        assert_eq!(elementary_indices(6), None);
        assert_eq!(decode_index(6), Some((1, 1)));
        assert_eq!(elementary_indices(1), None);
        assert_eq!(elementary_indices(8), None);
        assert_eq!(elementary_indices(0), None);
        assert_eq!(slinf_generator(108), SparseMatrix::elementary(2, 3));
    }

    #[test]
    fn examples() {
        assert!(slinf_is_trivial(&w("c_12 c_12^-1")).unwrap().0);
        assert!(slinf_is_trivial(&w("c_18^-1 c_108^-1 c_18 c_108 c_54^-1")).unwrap().0);
        let run = slinf_evaluate(&w("c_12^7")).unwrap();
        assert!(!run.is_trivial());
        assert_eq!(run.product.get(2, 1), BigInt::from(7));
        assert!(slinf_is_trivial(&w("c_5 c_6 c_1")).unwrap().0);
        assert!(slinf_is_trivial(&w("x")).is_err());
    }
}
