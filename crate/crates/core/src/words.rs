//! Free-group words over named or indexed generators.
//!
//! A [`Word`] is always freely reduced; every constructor cancels adjacent
//! inverse pairs eagerly. The ν-encoding maps the infinite alphabet
//! `{c_0, c_1, …, x, s, t}` into the finite alphabet `{a, b, x, s, t}` via
//! `c_n ↦ bⁿ a b⁻ⁿ`, and [`nu_decode`] inverts it in linear time.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Family name of the indexed generators `c_0, c_1, …`.
pub const C_FAMILY: &str = "c";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word is not in the image of the encoding: {0}")]
    NotInImage(String),
    #[error("unexpected generator `{0}` for this alphabet")]
    UnexpectedGenerator(String),
}

/// A generator: either a plain symbol (`x`, `a1`) or a member of an indexed
/// family (`c_12`). Two generators are equal iff family and index agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Generator {
    family: Arc<str>,
    index: Option<u64>,
}

impl Generator {
    /// Builds a generator from its textual identifier. A trailing `_<digits>`
    /// marks an indexed generator, so `c_12` is member 12 of family `c`.
    pub fn new(ident: &str) -> Self {
        if let Some(pos) = ident.rfind('_') {
            let (family, digits) = (&ident[..pos], &ident[pos + 1..]);
            if !family.is_empty() && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(index) = digits.parse() {
                    return Self::indexed(family, index);
                }
            }
        }
        Self { family: Arc::from(ident), index: None }
    }

    pub fn indexed(family: &str, index: u64) -> Self {
        Self { family: Arc::from(family), index: Some(index) }
    }

    /// The generator `c_i` of the infinite alphabet.
    pub fn c(index: u64) -> Self {
        Self::indexed(C_FAMILY, index)
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn index(&self) -> Option<u64> {
        self.index
    }

    fn is_symbol(&self, name: &str) -> bool {
        self.index.is_none() && &*self.family == name
    }

    pub fn letter(&self) -> Letter {
        Letter { gen: self.clone(), inverse: false }
    }

    pub fn inverse_letter(&self) -> Letter {
        Letter { gen: self.clone(), inverse: true }
    }

    pub fn word(&self) -> Word {
        Word { letters: vec![self.letter()] }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}_{}", self.family, i),
            None => f.write_str(&self.family),
        }
    }
}

/// A generator together with a sign.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Generator, inverse: bool) -> Self {
        Self { gen, inverse }
    }

    pub fn inv(&self) -> Letter {
        Letter { gen: self.gen.clone(), inverse: !self.inverse }
    }

    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduces a sequence of letters.
pub fn freely_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|last| last.cancels(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

/// Returns the cyclically reduced conjugate obtained by stripping matching
/// inverse letters from both ends.
pub fn cyclically_reduce(w: &Word) -> Word {
    let l = &w.letters;
    let (mut i, mut j) = (0usize, l.len());
    while j >= i + 2 && l[i].cancels(&l[j - 1]) {
        i += 1;
        j -= 1;
    }
    Word { letters: l[i..j].to_vec() }
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        freely_reduce(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inv).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        freely_reduce(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * n);
        for _ in 0..n {
            letters.extend(base.letters.iter().cloned());
        }
        freely_reduce(letters)
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    /// `v⁻¹ u v`.
    pub fn conjugate_by(&self, v: &Word) -> Word {
        v.inverse().concat(self).concat(v)
    }

    pub fn exponent_sum(&self, gen: &Generator) -> i64 {
        self.letters.iter().filter(|l| &l.gen == gen).map(Letter::sign).sum()
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.letters.iter().map(|l| l.gen.clone()).collect()
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) if self.letters.len() > 1 => !f.cancels(l),
            _ => true,
        }
    }

    /// Applies a substitution letter by letter and reduces.
    pub fn substitute<F: FnMut(&Generator) -> Word>(&self, mut image: F) -> Word {
        let mut out = Vec::new();
        for l in &self.letters {
            let w = image(&l.gen);
            if l.inverse {
                out.extend(w.inverse().letters);
            } else {
                out.extend(w.letters);
            }
        }
        freely_reduce(out)
    }

    /// Largest index among letters of the `c` family, if any.
    pub fn max_c_index(&self) -> Option<u64> {
        self.letters.iter().filter(|l| l.gen.family() == C_FAMILY).filter_map(|l| l.gen.index()).max()
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word { letters: vec![l] }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        freely_reduce(iter)
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl fmt::Display for Word {
    /// Renders runs of equal letters as powers: `a^2 b^-1 c_12`. The identity
    /// renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == *l {
                j += 1;
            }
            let exp = (j - i) as i64 * l.sign();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, exp)?;
            }
            i = j;
        }
        Ok(())
    }
}

fn sym(name: &str) -> Generator {
    Generator::new(name)
}

fn encode_c(index: u64, inverse: bool, out: &mut Vec<Letter>) {
    let b = sym("b");
    out.extend(std::iter::repeat_n(b.letter(), index as usize));
    out.push(Letter::new(sym("a"), inverse));
    out.extend(std::iter::repeat_n(b.inverse_letter(), index as usize));
}

/// ν: `c_n^{±1} ↦ bⁿ a^{±1} b⁻ⁿ`, identity on `x`, `s`, `t`.
pub fn nu_encode(w: &Word) -> Result<Word, WordError> {
    let mut out = Vec::new();
    for l in w.letters() {
        match (l.gen.family(), l.gen.index()) {
            (C_FAMILY, Some(n)) => encode_c(n, l.inverse, &mut out),
            ("x" | "s" | "t", None) => out.push(l.clone()),
            _ => return Err(WordError::UnexpectedGenerator(l.gen.to_string())),
        }
    }
    Ok(freely_reduce(out))
}

/// Reduced length of the ν-image, written l̂ in the analysis of the HNN solver.
pub fn encoded_length(w: &Word) -> Result<usize, WordError> {
    nu_encode(w).map(|e| e.len())
}

/// Inverts [`nu_encode`]: each maximal `{a, b}`-syllable is decoded by the
/// running `b`-exponent sum at every `a^{±1}`, then checked by re-encoding.
pub fn nu_decode(encoded: &Word) -> Result<Word, WordError> {
    let mut out: Vec<Letter> = Vec::new();
    let mut syllable: Vec<Letter> = Vec::new();
    for l in encoded.letters() {
        if l.gen.is_symbol("a") || l.gen.is_symbol("b") {
            syllable.push(l.clone());
        } else if l.gen.is_symbol("x") || l.gen.is_symbol("s") || l.gen.is_symbol("t") {
            decode_syllable(&syllable, &mut out)?;
            syllable.clear();
            out.push(l.clone());
        } else {
            return Err(WordError::UnexpectedGenerator(l.gen.to_string()));
        }
    }
    decode_syllable(&syllable, &mut out)?;
    Ok(freely_reduce(out))
}

fn decode_syllable(syllable: &[Letter], out: &mut Vec<Letter>) -> Result<(), WordError> {
    if syllable.is_empty() {
        return Ok(());
    }
    let mut beta: i64 = 0;
    let mut decoded = Vec::new();
    for l in syllable {
        if l.gen.is_symbol("b") {
            beta += l.sign();
        } else {
            if beta < 0 {
                return Err(WordError::NotInImage(render(syllable)));
            }
            decoded.push(Letter::new(Generator::c(beta as u64), l.inverse));
        }
    }
    let decoded = freely_reduce(decoded);
    let reencoded = nu_encode(&decoded)?;
    if reencoded.letters() != syllable {
        return Err(WordError::NotInImage(render(syllable)));
    }
    out.extend(decoded.into_letters());
    Ok(())
}

fn render(letters: &[Letter]) -> String {
    Word { letters: letters.to_vec() }.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Generator {
        Generator::new(s)
    }

    fn w(spec: &[(&str, i64)]) -> Word {
        let mut letters = Vec::new();
        for (name, e) in spec {
            let l = Letter::new(g(name), *e < 0);
            for _ in 0..e.unsigned_abs() {
                letters.push(l.clone());
            }
        }
        freely_reduce(letters)
    }

    #[test]
    fn identifier_splitting() {
        assert_eq!(g("c_12"), Generator::c(12));
        assert_eq!(g("x").index(), None);
        assert_eq!(g("x_").index(), None);
        assert_eq!(g("c_3_1").family(), "c_3");
        assert_eq!(g("c_3_1").to_string(), "c_3_1");
    }

    #[test]
    fn free_reduction_examples() {
        let x = g("x");
        let y = g("y");
        let r = freely_reduce(vec![x.letter(), x.inverse_letter(), y.letter()]);
        assert_eq!(r, y.word());
        assert!(freely_reduce(Vec::new()).is_identity());
        let (a, b) = (g("a"), g("b"));
        let r = freely_reduce(vec![a.letter(), b.letter(), b.inverse_letter(), a.inverse_letter()]);
        assert!(r.is_identity());
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(cyclically_reduce(&w(&[("x", 1), ("y", 1), ("x", -1)])), w(&[("y", 1)]));
        assert_eq!(cyclically_reduce(&w(&[("y", 1)])), w(&[("y", 1)]));
        let xyxy = w(&[("x", 1), ("y", 1), ("x", 1), ("y", 1)]);
        assert_eq!(cyclically_reduce(&xyxy), xyxy);
    }

    #[test]
    fn encode_examples() {
        let c2 = Generator::c(2).word();
        let e = nu_encode(&c2).unwrap();
        assert_eq!(e, w(&[("b", 2), ("a", 1), ("b", -2)]));
        assert_eq!(e.len(), 5);
        assert!(e.len() <= (2 * 2 + 1) * c2.len());
        assert_eq!(nu_encode(&g("s").word()).unwrap(), g("s").word());
        assert!(matches!(nu_encode(&g("q").word()), Err(WordError::UnexpectedGenerator(_))));
    }

    #[test]
    fn decode_examples() {
        let bab_a = w(&[("b", 1), ("a", 1), ("b", -1), ("a", 1)]);
        let expected = Word::from_letters(vec![Generator::c(1).letter(), Generator::c(0).letter()]);
        assert_eq!(nu_decode(&bab_a).unwrap(), expected);
        // b a² b⁻¹ = ν(c_1²): the residual product reduces to empty.
        let square = w(&[("b", 1), ("a", 2), ("b", -1)]);
        assert_eq!(nu_decode(&square).unwrap(), Generator::c(1).word().pow(2));
        let bad = w(&[("b", 1), ("a", 1)]);
        assert!(matches!(nu_decode(&bad), Err(WordError::NotInImage(_))));
        assert!(nu_decode(&Word::identity()).unwrap().is_identity());
        let negative = w(&[("b", -1), ("a", 1), ("b", 1)]);
        assert!(matches!(nu_decode(&negative), Err(WordError::NotInImage(_))));
        let dangling = w(&[("a", 1), ("b", 1)]);
        assert!(nu_decode(&dangling).is_err());
    }

    #[test]
    fn display_collapses_powers() {
        assert_eq!(w(&[("a", 2), ("b", -1), ("c_12", 1)]).to_string(), "a^2 b^-1 c_12");
        assert_eq!(Word::identity().to_string(), "1");
    }

    #[test]
    fn commutator_convention() {
        let (x, y) = (g("x").word(), g("y").word());
        let c = Word::commutator(&x, &y);
        assert_eq!(c, w(&[("x", -1), ("y", -1), ("x", 1), ("y", 1)]));
    }
}
