//! Brute-force references the corpus compares the library against. None of
//! them shares code with the routines under test.

use fiberforge::words::{Word, C_FAMILY};
use fiberforge::BigInt;
use num_traits::{One, Signed, Zero};

pub type Dense = Vec<Vec<BigInt>>;

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &Dense) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Dense = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * determinant(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// The gcd of all `k × k` minors, the `k`-th determinantal divisor.
pub fn determinantal_divisor(m: &Dense, k: usize) -> BigInt {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let minor: Dense = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            g = gcd(&g, &determinant(&minor));
        }
    }
    g
}

/// `k = 2^i 3^j` with `i, j ≥ 1`, `i ≠ j`, found by trial multiplication.
fn elementary_by_search(k: u64) -> Option<(usize, usize)> {
    let mut p2 = 2u64;
    for i in 1..64usize {
        let mut p = p2;
        for j in 1..64usize {
            p = match p.checked_mul(3) {
                Some(p) if p <= k => p,
                _ => break,
            };
            if p == k && i != j {
                return Some((i, j));
            }
        }
        p2 = match p2.checked_mul(2) {
            Some(p) if p <= k => p,
            _ => break,
        };
    }
    None
}

/// Multiplies the word out as dense matrices of the smallest size that holds
/// every index involved.
pub fn dense_slinf_is_trivial(w: &Word) -> bool {
    let ops: Vec<(usize, usize, bool)> = w
        .letters()
        .iter()
        .filter_map(|l| {
            assert_eq!(l.gen.family(), C_FAMILY, "dense oracle takes words in the c_k");
            elementary_by_search(l.gen.index().expect("indexed")).map(|(i, j)| (i, j, l.inverse))
        })
        .collect();
    let n = ops.iter().map(|&(i, j, _)| i.max(j)).max().unwrap_or(0);
    let identity: Dense =
        (0..n).map(|r| (0..n).map(|c| if r == c { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut acc = identity.clone();
    for (i, j, inverse) in ops {
        let mut e = identity.clone();
        e[i - 1][j - 1] = if inverse { -BigInt::one() } else { BigInt::one() };
        acc = (0..n).map(|r| (0..n).map(|c| (0..n).map(|t| &acc[r][t] * &e[t][c]).sum()).collect()).collect();
    }
    acc == identity
}

#[cfg(test)]
mod tests {
    use super::*;
    use fiberforge::presentations::parse_word;

    fn d(rows: &[&[i64]]) -> Dense {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&d(&[&[2, 1], &[1, 1]])), BigInt::from(1));
        assert_eq!(determinant(&d(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
    }

    #[test]
    fn divisors() {
        let m = d(&[&[2, 0], &[0, 3], &[5, 5]]);
        assert_eq!(determinantal_divisor(&m, 1), BigInt::from(1));
        assert_eq!(determinantal_divisor(&m, 2), BigInt::from(1));
        let m = d(&[&[2, 0], &[0, 4]]);
        assert_eq!(determinantal_divisor(&m, 2), BigInt::from(8));
    }

    #[test]
    fn dense_matrices() {
        assert_eq!(elementary_by_search(12), Some((2, 1)));
        assert_eq!(elementary_by_search(6), None);
        assert!(dense_slinf_is_trivial(&parse_word("c_18^-1 c_108^-1 c_18 c_108 c_54^-1", None).unwrap()));
        assert!(!dense_slinf_is_trivial(&parse_word("c_12^3", None).unwrap()));
    }
}
