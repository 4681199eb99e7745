//! Word-problem oracles.
//!
//! Several constructions only need "a means of checking equalities" in some
//! group. They take a [`WordOracle`], and the concrete deciders live next to
//! the machinery they wrap: coset tables in `subgroups`, Dehn's algorithm in
//! `smallcanc`, the elementary-matrix solver in `wordproblem`.

use thiserror::Error;

use crate::words::{Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("generator `{0}` is unknown to the oracle")]
    UnknownGenerator(String),
    #[error("oracle cannot decide: {0}")]
    Undecided(String),
}

/// Decides whether a word represents the identity. Implementations must
/// answer consistently and be safe to share between threads.
pub trait WordOracle: Send + Sync {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError>;

    /// Short tag describing the decision procedure and its cost class.
    fn describe(&self) -> String;

    fn equal(&self, u: &Word, v: &Word) -> Result<bool, OracleError> {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Images of `gens` under a faithful permutation representation, when
    /// the oracle is backed by one.
    fn permutation_images(&self, _gens: &[Generator]) -> Option<Vec<Permutation>> {
        None
    }
}

impl<T: WordOracle + ?Sized> WordOracle for &T {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        (**self).is_trivial(w)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn permutation_images(&self, gens: &[Generator]) -> Option<Vec<Permutation>> {
        (**self).permutation_images(gens)
    }
}

impl<T: WordOracle + ?Sized> WordOracle for Box<T> {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        (**self).is_trivial(w)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn permutation_images(&self, gens: &[Generator]) -> Option<Vec<Permutation>> {
        (**self).permutation_images(gens)
    }
}

/// The free group on any alphabet: a word is trivial iff it reduces to empty.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeGroupOracle;

impl WordOracle for FreeGroupOracle {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(w.is_identity())
    }

    fn describe(&self) -> String {
        "free group (linear time)".into()
    }
}

/// A permutation of `{0, …, n-1}`, acting on the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    /// Builds a permutation from its image list; `None` unless it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Self(images))
    }

    /// Builds a permutation of `{0, …, n-1}` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cyc in cycles {
            for (k, &p) in cyc.iter().enumerate() {
                *images.get_mut(p as usize)? = cyc[(k + 1) % cyc.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&p| other.0[p as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }
}

/// A permutation representation: generator `i` acts as `images[i]`. Decides
/// the word problem of the represented group when the representation is
/// faithful.
#[derive(Debug, Clone)]
pub struct PermutationOracle {
    generators: Vec<Generator>,
    images: Vec<Permutation>,
}

impl PermutationOracle {
    pub fn new(generators: Vec<Generator>, images: Vec<Permutation>) -> Self {
        assert_eq!(generators.len(), images.len(), "one permutation per generator");
        Self { generators, images }
    }

    pub fn evaluate(&self, w: &Word) -> Result<Permutation, OracleError> {
        let degree = self.images.first().map_or(0, Permutation::degree);
        let mut acc = Permutation::identity(degree);
        for l in w.letters() {
            let i = self
                .generators
                .iter()
                .position(|g| *g == l.gen)
                .ok_or_else(|| OracleError::UnknownGenerator(l.gen.to_string()))?;
            acc = if l.inverse { acc.then(&self.images[i].inverse()) } else { acc.then(&self.images[i]) };
        }
        Ok(acc)
    }
}

impl WordOracle for PermutationOracle {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(self.evaluate(w)?.is_identity())
    }

    fn describe(&self) -> String {
        format!("permutation representation of degree {}", self.images.first().map_or(0, Permutation::degree))
    }

    fn permutation_images(&self, gens: &[Generator]) -> Option<Vec<Permutation>> {
        gens.iter().map(|g| self.generators.iter().position(|h| h == g).map(|i| self.images[i].clone())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_algebra() {
        let p = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let q = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert!(p.then(&p).is_identity());
        assert!(q.then(&q).then(&q).is_identity());
        assert!(q.then(&q.inverse()).is_identity());
        assert_eq!(p.then(&q).apply(0), 2);
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }

    #[test]
    fn permutation_oracle_on_s3() {
        let (a, b) = (Generator::new("a"), Generator::new("b"));
        let oracle = PermutationOracle::new(
            vec![a.clone(), b.clone()],
            vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1]]).unwrap()],
        );
        assert!(oracle.is_trivial(&a.word().pow(3)).unwrap());
        assert!(!oracle.is_trivial(&a.word()).unwrap());
        let conj = a.word().conjugate_by(&b.word());
        assert!(oracle.equal(&conj, &a.word().inverse()).unwrap());
        assert!(oracle.is_trivial(&Generator::new("z").word()).is_err());
    }
}
