//! Seeded random inputs.

use fiberforge::intlin::first_homology;
use fiberforge::presentations::{parse_presentation, FinitePresentation};
use fiberforge::subgroups::todd_coxeter;
use fiberforge::words::{Generator, Letter, Word};
use rand::Rng;

pub fn a5() -> FinitePresentation {
    parse_presentation("<a, b | a^2, b^3, (a b)^5>").expect("valid presentation")
}

/// A uniformly chosen reduced word of exactly `len` letters.
pub fn random_word<R: Rng>(rng: &mut R, gens: &[Generator], len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = gens[rng.gen_range(0..gens.len())].clone();
        let l = Letter::new(g, rng.gen_bool(0.5));
        if letters.last().is_some_and(|p| p.cancels(&l)) {
            continue;
        }
        letters.push(l);
    }
    Word::from_letters(letters)
}

fn generators(n: usize) -> Vec<Generator> {
    ["x", "y", "z", "w"].iter().take(n).map(|s| Generator::new(s)).collect()
}

/// A presentation of `A5` padded with conjugates of its relators, `3 ≤ m ≤ max_rels`.
pub fn a5_variant<R: Rng>(rng: &mut R, max_rels: usize) -> FinitePresentation {
    let base = a5();
    let m = rng.gen_range(3..=max_rels.max(3));
    let mut relators = base.relators().to_vec();
    while relators.len() < m {
        let r = &base.relators()[rng.gen_range(0..3)];
        let len = rng.gen_range(1..=3);
        relators.push(r.conjugate_by(&random_word(rng, base.generators(), len)));
    }
    FinitePresentation::new(base.generators().to_vec(), relators).expect("same generators")
}

/// A random presentation with trivial first homology whose coset enumeration
/// finishes within `max_cosets` (in practice the trivial group or a small
/// perfect group).
pub fn random_perfect<R: Rng>(rng: &mut R, max_gens: usize, max_rels: usize, max_cosets: usize) -> FinitePresentation {
    loop {
        let n = rng.gen_range(1..=max_gens);
        let m = rng.gen_range(n..=max_rels.max(n));
        let gens = generators(n);
        let relators: Vec<Word> = (0..m)
            .map(|_| {
                let len = rng.gen_range(1..=6);
                random_word(rng, &gens, len)
            })
            .collect();
        let p = FinitePresentation::new(gens, relators).expect("declared generators");
        if first_homology(&p).is_trivial() && todd_coxeter(&p, &[], max_cosets).is_ok() {
            return p;
        }
    }
}

/// Alternates `A5` variants and random perfect presentations.
pub fn perfect_inputs<R: Rng>(rng: &mut R, count: usize, max_gens: usize, max_rels: usize) -> Vec<FinitePresentation> {
    (0..count)
        .map(|i| if i % 2 == 0 { a5_variant(rng, max_rels) } else { random_perfect(rng, max_gens, max_rels, 2000) })
        .collect()
}
