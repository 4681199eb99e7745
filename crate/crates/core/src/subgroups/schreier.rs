//! Reidemeister–Schreier rewriting and the Tietze clean-up pass applied to
//! its output.

use std::collections::HashSet;

use super::action::tree_edges;
use super::{CosetTable, SubgroupError};
use crate::presentations::FinitePresentation;
use crate::words::{cyclically_reduce, Generator, Letter, Word};

pub const SCHREIER_FAMILY: &str = "y";
pub const MAX_SIMPLIFY_ROUNDS: usize = 10;

/// Unsimplified Reidemeister–Schreier output together with the ambient word
/// `t(c)·x·t(c·x)⁻¹` that each Schreier generator stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierPresentation {
    pub presentation: FinitePresentation,
    pub generator_words: Vec<Word>,
}

/// Schreier generators `y_1, y_2, …` for the non-tree edges `(coset, generator)`
/// in coset-major order, and the rewrite of every relator at every coset.
pub fn schreier_presentation(
    table: &CosetTable,
    p: &FinitePresentation,
) -> Result<SchreierPresentation, SubgroupError> {
    table.verify(p)?;
    let rows = table.rows();
    let tree = tree_edges(rows);
    let reps = table.transversal();
    let mut label = vec![vec![None; p.rank()]; rows.len()];
    let mut generators = Vec::new();
    let mut generator_words = Vec::new();
    for c in 0..rows.len() {
        for i in 0..p.rank() {
            if !tree[c][i] {
                let d = rows[c][2 * i].expect("complete table");
                let y = Generator::indexed(SCHREIER_FAMILY, generators.len() as u64 + 1);
                label[c][i] = Some(y.clone());
                generators.push(y);
                generator_words.push(reps[c].concat(&p.generators()[i].word()).concat(&reps[d].inverse()));
            }
        }
    }
    let mut relators = Vec::with_capacity(rows.len() * p.relators().len());
    for c in 0..rows.len() {
        for r in p.relators() {
            let mut coset = c;
            let mut out = Vec::new();
            for l in r.letters() {
                let i = p.position(&l.gen).expect("relators use declared generators");
                if l.inverse {
                    let prev = rows[coset][2 * i + 1].expect("complete table");
                    if let Some(y) = &label[prev][i] {
                        out.push(Letter::new(y.clone(), true));
                    }
                    coset = prev;
                } else {
                    if let Some(y) = &label[coset][i] {
                        out.push(Letter::new(y.clone(), false));
                    }
                    coset = rows[coset][2 * i].expect("complete table");
                }
            }
            relators.push(Word::from_letters(out));
        }
    }
    let presentation = FinitePresentation::new(generators, relators).expect("Schreier generators are distinct");
    Ok(SchreierPresentation { presentation, generator_words })
}

/// Presentation of the subgroup recorded in `table`, on Schreier generators,
/// after [`simplify_presentation`].
pub fn reidemeister_schreier(table: &CosetTable, p: &FinitePresentation) -> Result<FinitePresentation, SubgroupError> {
    Ok(simplify_presentation(&schreier_presentation(table, p)?.presentation))
}

/// Eliminates generators that a relator of length at most two expresses in
/// terms of another generator (or the identity), then removes trivial and
/// duplicate relators, where duplicates are taken up to cyclic permutation
/// and inversion. Stops after [`MAX_SIMPLIFY_ROUNDS`] rounds.
pub fn simplify_presentation(p: &FinitePresentation) -> FinitePresentation {
    let mut gens: Vec<Generator> = p.generators().to_vec();
    let mut rels: Vec<Word> = p.relators().to_vec();
    for _ in 0..MAX_SIMPLIFY_ROUNDS {
        let mut changed = false;
        while let Some((g, image)) = rels.iter().find_map(|r| elimination(r, &gens)) {
            rels = rels
                .iter()
                .map(|r| cyclically_reduce(&r.substitute(|h| if *h == g { image.clone() } else { h.word() })))
                .filter(|r| !r.is_identity())
                .collect();
            gens.retain(|h| *h != g);
            changed = true;
        }
        let before = rels.len();
        let mut seen = HashSet::new();
        rels.retain(|r| !r.is_identity() && seen.insert(cyclic_key(r, &gens)));
        changed |= rels.len() != before;
        if !changed {
            break;
        }
    }
    FinitePresentation::new(gens, rels).expect("elimination keeps relators over the remaining generators")
}

/// A generator that `r` lets us delete, and its replacement.
fn elimination(r: &Word, gens: &[Generator]) -> Option<(Generator, Word)> {
    let pos = |g: &Generator| gens.iter().position(|h| h == g);
    match r.letters() {
        [l] => Some((l.gen.clone(), Word::identity())),
        [a, b] if a.gen != b.gen => {
            // a·b = 1: drop the later generator.
            let (keep, drop) = if pos(&a.gen) < pos(&b.gen) { (a, b) } else { (b, a) };
            let image = Word::from(keep.clone()).inverse();
            Some((drop.gen.clone(), if drop.inverse { image.inverse() } else { image }))
        }
        _ => None,
    }
}

/// Lexicographically least letter sequence among the rotations of `r` and
/// of its inverse.
fn cyclic_key(r: &Word, gens: &[Generator]) -> Vec<usize> {
    let code =
        |l: &Letter| 2 * gens.iter().position(|g| *g == l.gen).unwrap_or(usize::MAX / 2) + usize::from(l.inverse);
    let fwd: Vec<usize> = r.letters().iter().map(code).collect();
    let inv: Vec<usize> = r.inverse().letters().iter().map(code).collect();
    let n = fwd.len();
    let mut best: Option<Vec<usize>> = None;
    for s in [&fwd, &inv] {
        for k in 0..n {
            let rot: Vec<usize> = s[k..].iter().chain(&s[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}
