//! Presentations of universal central extensions of perfect groups.

use std::collections::{HashMap, VecDeque};

use serde_json::json;

use super::ConstructionError;
use crate::intlin::first_homology;
use crate::oracle::{Permutation, WordOracle};
use crate::presentations::FinitePresentation;
use crate::words::{cyclically_reduce, Generator, Letter, Word};

/// Default length cap for the search of the commutator corrections. In `A₅`
/// the generator of order 2 already needs length 18.
pub const DEFAULT_SEARCH_CAP: usize = 24;

/// `Q̃ = ⟨X | xᵢcᵢ, [xᵢ, r_j]⟩` for a perfect `Q = ⟨X | R⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcePresentation {
    pub presentation: FinitePresentation,
    /// The original relators read in `Q̃`; they generate the central kernel.
    pub h2_generators: Vec<Word>,
    /// `cᵢ ∈ [F, F]` with `xᵢcᵢ = 1` in `Q`, one per generator.
    pub c_words: Vec<Word>,
}

impl UcePresentation {
    /// True iff the relators are exactly `xᵢcᵢ` for every `i` followed by
    /// `[xᵢ, r_j]` for every `i` (outer) and `j` (inner), up to cyclic
    /// reduction, with every `cᵢ` of zero exponent sum.
    pub fn has_expected_shape(&self, original: &FinitePresentation) -> bool {
        let gens = original.generators();
        if self.presentation.generators() != gens || self.c_words.len() != gens.len() {
            return false;
        }
        if self.c_words.iter().any(|c| gens.iter().any(|g| c.exponent_sum(g) != 0)) {
            return false;
        }
        let mut expected: Vec<Word> =
            gens.iter().zip(&self.c_words).map(|(x, c)| cyclically_reduce(&x.word().concat(c))).collect();
        for x in gens {
            for r in original.relators() {
                expected.push(cyclically_reduce(&Word::commutator(&x.word(), r)));
            }
        }
        self.presentation.relators() == expected.as_slice() && self.h2_generators == original.relators()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "presentation": self.presentation.to_json(),
            "h2_generators": self.h2_generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "c_words": self.c_words.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// Depth-first shortlex search over reduced words of one fixed length whose
/// exponent sums all vanish.
struct BalancedSearch<'a, O: ?Sized> {
    letters: Vec<Letter>,
    target: Word,
    oracle: &'a O,
    prefix: Vec<Letter>,
    sums: Vec<i64>,
}

impl<O: WordOracle + ?Sized> BalancedSearch<'_, O> {
    fn run(&mut self, remaining: usize) -> Result<Option<Word>, ConstructionError> {
        if remaining == 0 {
            let c = Word::from_letters(self.prefix.iter().cloned());
            return Ok(self.oracle.is_trivial(&self.target.concat(&c))?.then_some(c));
        }
        for idx in 0..self.letters.len() {
            let l = self.letters[idx].clone();
            if self.prefix.last().is_some_and(|p| p.cancels(&l)) {
                continue;
            }
            let g = idx / 2;
            self.sums[g] += l.sign();
            let imbalance: i64 = self.sums.iter().map(|s| s.abs()).sum();
            if (imbalance as usize) < remaining {
                self.prefix.push(l);
                let found = self.run(remaining - 1)?;
                self.prefix.pop();
                if found.is_some() {
                    self.sums[g] -= self.letters[idx].sign();
                    return Ok(found);
                }
            }
            self.sums[g] -= self.letters[idx].sign();
        }
        Ok(None)
    }
}

/// A permutation and the exponent sums of the word that reached it.
type State = (Permutation, Vec<i64>);

/// Breadth-first search over states (group element, exponent sums) of a
/// permutation group. Letters are tried in shortlex order and each state is
/// kept with its first path, so the path found is shortlex-least.
fn balanced_search_by_states(x: usize, letters: &[Letter], images: &[Permutation], search_cap: usize) -> Option<Word> {
    let ngens = images.len();
    let steps: Vec<(Permutation, usize, i64)> = letters
        .iter()
        .enumerate()
        .map(|(i, l)| (if l.inverse { images[i / 2].inverse() } else { images[i / 2].clone() }, i / 2, l.sign()))
        .collect();
    let start = (Permutation::identity(images.first().map_or(0, Permutation::degree)), vec![0i64; ngens]);
    let goal = (images[x].inverse(), vec![0i64; ngens]);
    let mut parent: HashMap<State, Option<(usize, usize)>> = HashMap::new();
    let mut states = vec![start.clone()];
    parent.insert(start, None);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((id, depth)) = queue.pop_front() {
        if states[id] == goal {
            let mut path = Vec::new();
            let mut cur = id;
            while let Some((prev, letter)) = parent[&states[cur]] {
                path.push(letters[letter].clone());
                cur = prev;
            }
            path.reverse();
            return Some(Word::from_letters(path));
        }
        if depth == search_cap {
            continue;
        }
        for (li, (perm, g, sign)) in steps.iter().enumerate() {
            let (elem, sums) = &states[id];
            let mut next_sums = sums.clone();
            next_sums[*g] += sign;
            let imbalance: i64 = next_sums.iter().map(|s| s.abs()).sum();
            if imbalance as usize > search_cap - depth - 1 {
                continue;
            }
            let next = (elem.then(perm), next_sums);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((id, li)));
                states.push(next);
                queue.push_back((states.len() - 1, depth + 1));
            }
        }
    }
    None
}

/// The shortlex-least word `c` with zero exponent sum on every generator and
/// `x·c = 1` in the group decided by `oracle`, of length at most
/// `search_cap`. Oracles backed by a permutation representation are searched
/// by states; others by enumerating candidate words.
pub fn find_commutator_correction<O: WordOracle + ?Sized>(
    x: &Generator,
    alphabet: &[Generator],
    oracle: &O,
    search_cap: usize,
) -> Result<Word, ConstructionError> {
    let letters: Vec<Letter> = alphabet.iter().flat_map(|g| [g.letter(), g.inverse_letter()]).collect();
    let exhausted = || ConstructionError::SearchBudgetExceeded { generator: x.to_string(), cap: search_cap };
    if let (Some(images), Some(xi)) = (oracle.permutation_images(alphabet), alphabet.iter().position(|g| g == x)) {
        return balanced_search_by_states(xi, &letters, &images, search_cap).ok_or_else(exhausted);
    }
    let mut search =
        BalancedSearch { letters, target: x.word(), oracle, prefix: Vec::new(), sums: vec![0; alphabet.len()] };
    for length in (0..=search_cap).step_by(2) {
        if let Some(c) = search.run(length)? {
            return Ok(c);
        }
    }
    Err(exhausted())
}

/// Builds `Q̃` for a perfect `Q = ⟨X | R⟩`; `oracle` decides the word
/// problem of `Q`.
pub fn universal_central_extension<O: WordOracle + ?Sized>(
    p: &FinitePresentation,
    oracle: &O,
    search_cap: usize,
) -> Result<UcePresentation, ConstructionError> {
    let h1 = first_homology(p);
    if !h1.is_trivial() {
        return Err(ConstructionError::NotPerfect(h1));
    }
    let gens = p.generators();
    let c_words =
        gens.iter().map(|x| find_commutator_correction(x, gens, oracle, search_cap)).collect::<Result<Vec<_>, _>>()?;
    let mut relators: Vec<Word> = gens.iter().zip(&c_words).map(|(x, c)| x.word().concat(c)).collect();
    for x in gens {
        for r in p.relators() {
            relators.push(Word::commutator(&x.word(), r));
        }
    }
    let presentation = FinitePresentation::new(gens.to_vec(), relators)?;
    let uce = UcePresentation { presentation, h2_generators: p.relators().to_vec(), c_words };
    let h1 = first_homology(&uce.presentation);
    if !h1.is_trivial() {
        return Err(ConstructionError::Inconsistent(format!("extension has nontrivial H1 ({h1})")));
    }
    Ok(uce)
}
