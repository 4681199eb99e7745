use super::{FinitePresentation, PresentationError};
use crate::oracle::{OracleError, Permutation, WordOracle};
use crate::words::{Generator, Letter, Word};

/// Default cap on the length of the σ and α words searched for by
/// [`extension_presentation`].
pub const DEFAULT_EXTENSION_SEARCH_CAP: usize = 12;

/// Renames generator `g` of factor `side` (1 or 2) of a direct product.
fn product_name(g: &Generator, side: u64) -> Generator {
    Generator::indexed(&g.to_string(), side)
}

/// `P × P′` with generators `g_1` (left) and `g_2` (right), both relator
/// sets and every cross-commutator `[g_1, h_2]`.
pub fn direct_product(left: &FinitePresentation, right: &FinitePresentation) -> FinitePresentation {
    let lg: Vec<Generator> = left.generators().iter().map(|g| product_name(g, 1)).collect();
    let rg: Vec<Generator> = right.generators().iter().map(|g| product_name(g, 2)).collect();
    let mut relators: Vec<Word> = left.relators().iter().map(|r| r.substitute(|g| product_name(g, 1).word())).collect();
    relators.extend(right.relators().iter().map(|r| r.substitute(|g| product_name(g, 2).word())));
    for a in &lg {
        for b in &rg {
            relators.push(Word::commutator(&a.word(), &b.word()));
        }
    }
    let generators = lg.into_iter().chain(rg).collect();
    FinitePresentation::new(generators, relators).expect("product generators are distinct")
}

/// Maps a word over a factor into the product presentation.
pub fn embed_in_factor(w: &Word, side: u64) -> Word {
    w.substitute(|g| product_name(g, side).word())
}

/// Adds a generator `ζ` with relators `ζⁿ` and `ζ`. The group is unchanged.
pub fn recursify(p: &FinitePresentation, n: u64) -> Result<FinitePresentation, PresentationError> {
    if n == 0 {
        return Err(PresentationError::Invalid("recursify needs n >= 1".into()));
    }
    let mut name = String::from("zeta");
    while p.generators().contains(&Generator::new(&name)) {
        name.push('z');
    }
    let zeta = Generator::new(&name);
    let mut generators = p.generators().to_vec();
    generators.push(zeta.clone());
    let mut relators = p.relators().to_vec();
    relators.push(zeta.word().pow(n as i64));
    relators.push(zeta.word());
    FinitePresentation::new(generators, relators)
}

/// A group in which products and equalities can be computed.
pub trait AmbientGroup {
    type Element: Clone;

    fn identity(&self) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert(&self, a: &Self::Element) -> Self::Element;
    fn equal(&self, a: &Self::Element, b: &Self::Element) -> Result<bool, OracleError>;

    /// Evaluates `w` with generator `gens[i]` sent to `images[i]`.
    fn evaluate(&self, w: &Word, gens: &[Generator], images: &[Self::Element]) -> Self::Element {
        let mut acc = self.identity();
        for l in w.letters() {
            let i = gens.iter().position(|g| *g == l.gen).expect("word over the given generators");
            let e = if l.inverse { self.invert(&images[i]) } else { images[i].clone() };
            acc = self.multiply(&acc, &e);
        }
        acc
    }
}

/// Permutations of a fixed degree under composition.
#[derive(Debug, Clone, Copy)]
pub struct PermutationGroup {
    pub degree: usize,
}

impl AmbientGroup for PermutationGroup {
    type Element = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }
    fn multiply(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.then(b)
    }
    fn invert(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }
    fn equal(&self, a: &Permutation, b: &Permutation) -> Result<bool, OracleError> {
        Ok(a == b)
    }
}

/// Elements are words; equality is decided by a word-problem oracle (a coset
/// table, Dehn's algorithm, …).
pub struct WordGroup<O: WordOracle> {
    pub oracle: O,
}

impl<O: WordOracle> AmbientGroup for WordGroup<O> {
    type Element = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }
    fn multiply(&self, a: &Word, b: &Word) -> Word {
        a.concat(b)
    }
    fn invert(&self, a: &Word) -> Word {
        a.inverse()
    }
    fn equal(&self, a: &Word, b: &Word) -> Result<bool, OracleError> {
        self.oracle.equal(a, b)
    }
}

/// Input for presenting an extension `1 → N → G → Q → 1`.
pub struct ExtensionData<G: AmbientGroup> {
    /// `N = ⟨a⃗ | r⃗⟩`.
    pub normal: FinitePresentation,
    /// `Q = ⟨b⃗ | s⃗⟩`.
    pub quotient: FinitePresentation,
    /// The elements of `G` represented by the generators `a⃗`.
    pub normal_images: Vec<G::Element>,
    /// One lift `β_k ∈ G` per quotient generator.
    pub lifts: Vec<G::Element>,
    pub group: G,
}

/// Reduced words over an alphabet in shortlex order (generator order, positive
/// letter before its inverse), up to a length cap.
pub(crate) struct ShortlexIter {
    letters: Vec<Letter>,
    cap: usize,
    level: Vec<Vec<Letter>>,
    pos: usize,
    len: usize,
}

impl ShortlexIter {
    pub(crate) fn new(alphabet: &[Generator], cap: usize) -> Self {
        let letters = alphabet.iter().flat_map(|g| [g.letter(), g.inverse_letter()]).collect();
        Self { letters, cap, level: vec![Vec::new()], pos: 0, len: 0 }
    }
}

impl Iterator for ShortlexIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if self.pos < self.level.len() {
                self.pos += 1;
                return Some(Word::from_letters(self.level[self.pos - 1].clone()));
            }
            if self.len >= self.cap || self.level.is_empty() {
                return None;
            }
            let mut next = Vec::new();
            for w in &self.level {
                for l in &self.letters {
                    if w.last().is_some_and(|last| last.cancels(l)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l.clone());
                    next.push(v);
                }
            }
            self.level = next;
            self.pos = 0;
            self.len += 1;
        }
    }
}

/// Presents `G` as `⟨a⃗, b⃗ | r⃗, s⃗(b⃗) = σ⃗(a⃗), a⃗^{b⃗} = α⃗(a⃗)⟩`, finding the
/// words σ and α by a shortlex search over `a⃗` checked in the ambient group.
pub fn extension_presentation<G: AmbientGroup>(
    data: &ExtensionData<G>,
    search_cap: usize,
) -> Result<FinitePresentation, PresentationError> {
    let a = data.normal.generators();
    let b = data.quotient.generators();
    if data.lifts.len() != b.len() {
        return Err(PresentationError::ImageCount { expected: b.len(), got: data.lifts.len() });
    }
    if data.normal_images.len() != a.len() {
        return Err(PresentationError::ImageCount { expected: a.len(), got: data.normal_images.len() });
    }
    if let Some(g) = a.iter().find(|g| b.contains(g)) {
        return Err(PresentationError::DuplicateGenerator(g.to_string()));
    }
    let group = &data.group;

    // Targets: s_l(β⃗) for each quotient relator, then β_k⁻¹ a_i β_k.
    let mut targets: Vec<(String, G::Element)> = Vec::new();
    for s in data.quotient.relators() {
        targets.push((format!("{s}"), group.evaluate(s, b, &data.lifts)));
    }
    for (i, gi) in a.iter().enumerate() {
        for (k, bk) in b.iter().enumerate() {
            let conj =
                group.multiply(&group.multiply(&group.invert(&data.lifts[k]), &data.normal_images[i]), &data.lifts[k]);
            targets.push((format!("{gi}^{bk}"), conj));
        }
    }
    let mut found: Vec<Option<Word>> = vec![None; targets.len()];
    let mut remaining = targets.len();
    if remaining > 0 {
        for candidate in ShortlexIter::new(a, search_cap) {
            let value = group.evaluate(&candidate, a, &data.normal_images);
            for (slot, (_, t)) in found.iter_mut().zip(&targets) {
                if slot.is_none() && group.equal(&value, t)? {
                    *slot = Some(candidate.clone());
                    remaining -= 1;
                }
            }
            if remaining == 0 {
                break;
            }
        }
    }
    if let Some(idx) = found.iter().position(Option::is_none) {
        return Err(PresentationError::SearchBudgetExceeded { target: targets[idx].0.clone(), cap: search_cap });
    }
    let found: Vec<Word> = found.into_iter().map(Option::unwrap).collect();

    let mut generators = a.to_vec();
    generators.extend(b.iter().cloned());
    let mut relators = data.normal.relators().to_vec();
    let m = data.quotient.relators().len();
    for (s, sigma) in data.quotient.relators().iter().zip(&found[..m]) {
        relators.push(s.concat(&sigma.inverse()));
    }
    let mut alpha = found[m..].iter();
    for gi in a {
        for bk in b {
            let alpha_ik = alpha.next().expect("one α per pair");
            relators.push(gi.word().conjugate_by(&bk.word()).concat(&alpha_ik.inverse()));
        }
    }
    FinitePresentation::new(generators, relators)
}
