//! Exact integer linear algebra: dense matrices, Smith normal form with
//! unimodular witnesses, and the homology invariants read off a
//! presentation's relation matrix.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::FinitePresentation;
use crate::scalar::IntScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix has {rows}x{cols} shape but {got} entries")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("entry `{0}` is not an integer")]
    Entry(String),
    #[error("rows have unequal length")]
    Ragged,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("second Betti number via 2-chains needs an explicit asphericity assertion")]
    AsphericityNotAsserted,
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// JSON form: `{rows, cols, entries}` with entries as decimal strings, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape { rows, cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::Ragged);
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, MatrixError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::of(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::<T>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &T) {
        for j in 0..self.cols {
            let v = self.get(src, j);
            if !v.is_zero() {
                let add = k.clone() * v.clone();
                let idx = dst * self.cols + j;
                self.data[idx] = self.data[idx].clone() + add;
            }
        }
    }

    /// col[dst] += k · col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &T) {
        for i in 0..self.rows {
            let v = self.get(i, src);
            if !v.is_zero() {
                let add = k.clone() * v.clone();
                let idx = i * self.cols + dst;
                self.data[idx] = self.data[idx].clone() + add;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { rows: self.rows, cols: self.cols, entries: self.data.iter().map(ToString::to_string).collect() }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self, MatrixError> {
        let data = json
            .entries
            .iter()
            .map(|s| s.trim().parse::<T>().map_err(|_| MatrixError::Entry(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_vec(json.rows, json.cols, data)
    }
}

impl<T: IntScalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// every `dᵢ ≥ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntScalar> Smith<T> {
    /// The nonzero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the smallest nonzero absolute value in rows, cols ≥ `t`.
fn smallest_pivot<T: IntScalar>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let v = d.get(i, j);
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < d.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form by repeated Euclidean reduction around the smallest
/// pivot. The decomposition is re-checked by multiplication before returning.
///
/// Entries of `U` and `V` grow quickly (about 70 bits for 5x5 inputs with
/// entries up to 12), so `i64` is only safe for tiny matrices.
pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> Smith<T> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = Matrix::<T>::identity(rows);
    let mut v = Matrix::<T>::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_pivot(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut residue = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t).clone() / d.get(t, t).clone());
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                residue |= !d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j).clone() / d.get(t, t).clone());
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                residue |= !d.get(t, j).is_zero();
            }
            if residue {
                // A remainder is smaller than the pivot: bring the smallest
                // entry of row/column t into the corner and repeat.
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = d.get(i, t);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = d.get(t, j);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(d.get(i, j).clone() % pivot.clone()).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    assert!(u.mul(m).mul(&v) == d, "Smith decomposition failed to verify");
    assert!(d.is_diagonal(), "Smith form is not diagonal");
    Smith { u, d, v }
}

/// Row `j` is the exponent-sum vector of relator `j`.
pub fn relation_matrix<T: IntScalar>(p: &FinitePresentation) -> Matrix<T> {
    let mut m = Matrix::<T>::zeros(p.relators().len(), p.rank());
    for (i, r) in p.relators().iter().enumerate() {
        for l in r.letters() {
            let j = p.position(&l.gen).expect("relators use declared generators");
            let cur = m.get(i, j).clone();
            m.set(i, j, cur + T::of(l.sign()));
        }
    }
    m
}

/// Betti number and torsion coefficients of an abelian group.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HomologySummary {
    pub betti: usize,
    #[serde(with = "decimal_list")]
    pub torsion: Vec<BigInt>,
}

impl HomologySummary {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "b1={}, torsion=[{}]", self.betti, t.join(", "))
    }
}

mod decimal_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

/// `H₁` of the presented group: `ℤ^betti ⊕ ⊕ ℤ/dᵢ`.
pub fn first_homology(p: &FinitePresentation) -> HomologySummary {
    let snf = smith_normal_form(&relation_matrix::<BigInt>(p));
    let factors = snf.invariant_factors();
    HomologySummary { betti: p.rank() - factors.len(), torsion: factors.into_iter().filter(|d| !d.is_one()).collect() }
}

/// Rank of `ker ∂₂`, i.e. `|R| − rank(relation matrix)`. This equals `b₂` of
/// the group only when the presentation is aspherical, which the caller must
/// assert: asphericity cannot be decided in general.
pub fn second_betti_aspherical(p: &FinitePresentation, asserted_aspherical: bool) -> Result<usize, HomologyError> {
    if !asserted_aspherical {
        return Err(HomologyError::AsphericityNotAsserted);
    }
    let rank = smith_normal_form(&relation_matrix::<BigInt>(p)).rank();
    Ok(p.relators().len() - rank)
}

/// `|R| > |X|`: with an aspherical presentation of a nontrivial group this
/// forces `H₂` to be infinite.
pub fn relators_exceed_generators(p: &FinitePresentation) -> bool {
    p.relators().len() > p.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    type M = Matrix<BigInt>;

    fn diag(s: &Smith<BigInt>) -> Vec<i64> {
        s.d.diagonal().iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        let m = M::from_i64_rows(&[&[2, 4], &[6, 8]]).unwrap();
        assert_eq!(diag(&smith_normal_form(&m)), vec![2, 4]);
        let z = M::zeros(3, 2);
        let s = smith_normal_form(&z);
        assert_eq!(s.d, z);
        let id = M::identity(4);
        assert_eq!(smith_normal_form(&id).d, id);
    }

    #[test]
    fn snf_generic_over_machine_integers() {
        let m = Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3], &[5, 5]]).unwrap();
        assert_eq!(smith_normal_form(&m).d.diagonal(), vec![1, 1]);
        let m = Matrix::<i128>::from_i64_rows(&[&[4, 6]]).unwrap();
        assert_eq!(smith_normal_form(&m).d.diagonal(), vec![2]);
    }

    #[test]
    fn relation_matrices() {
        let p = parse_presentation("<a,b | a^2, b^3, (a b)^5>").unwrap();
        assert_eq!(relation_matrix::<BigInt>(&p), M::from_i64_rows(&[&[2, 0], &[0, 3], &[5, 5]]).unwrap());
        let p = parse_presentation("<x,y | [x,y]>").unwrap();
        assert_eq!(relation_matrix::<BigInt>(&p), M::from_i64_rows(&[&[0, 0]]).unwrap());
        let p = parse_presentation("<x | >").unwrap();
        let m = relation_matrix::<BigInt>(&p);
        assert_eq!((m.rows(), m.cols()), (0, 1));
    }

    #[test]
    fn first_homology_examples() {
        let h = first_homology(&parse_presentation("<x,y | [x,y]>").unwrap());
        assert_eq!((h.betti, h.torsion.len()), (2, 0));
        let h = first_homology(&parse_presentation("<a,b | a^2, b^3, (a b)^5>").unwrap());
        assert!(h.is_trivial());
        assert_eq!(h.to_string(), "b1=0, torsion=[]");
        let h = first_homology(&parse_presentation("<x | x^6>").unwrap());
        assert_eq!(h.to_string(), "b1=0, torsion=[6]");
    }

    #[test]
    fn second_betti_examples() {
        let genus2 = parse_presentation("<a,b,c,d | [a,b][c,d]>").unwrap();
        assert_eq!(second_betti_aspherical(&genus2, true), Ok(1));
        assert_eq!(second_betti_aspherical(&parse_presentation("<x,y | >").unwrap(), true), Ok(0));
        assert_eq!(second_betti_aspherical(&parse_presentation("<x | x>").unwrap(), true), Ok(0));
        assert_eq!(second_betti_aspherical(&genus2, false), Err(HomologyError::AsphericityNotAsserted));
        assert!(!relators_exceed_generators(&genus2));
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = M::from_i64_rows(&[&[1, -2], &[3, 4]]).unwrap();
        let mut big = m.clone();
        big.set(0, 0, "123456789012345678901234567890".parse().unwrap());
        let json = big.to_json();
        assert_eq!(json.entries[0], "123456789012345678901234567890");
        assert_eq!(M::from_json(&json).unwrap(), big);
        let bad = MatrixJson { rows: 2, cols: 2, entries: vec!["1".into()] };
        assert!(M::from_json(&bad).is_err());
    }
}
