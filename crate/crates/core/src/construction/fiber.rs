//! Generating sets of fibre products `Λ = {(γ₁, γ₂) | η(γ₁) = η(γ₂)}`.

use serde_json::json;

use super::rips::RipsOutput;
use super::ConstructionError;
use crate::intlin::first_homology;
use crate::presentations::{direct_product, embed_in_factor, FinitePresentation};
use crate::words::{Generator, Word};

/// `b₁(Λ) = 2·b₁(Γ) + b₂(Q)`.
pub fn predicted_first_betti(b1_gamma: usize, b2_q: usize) -> usize {
    2 * b1_gamma + b2_q
}

/// `{(a, 1), (1, a) | a ∈ A} ∪ {(x, x) | x ∈ X}`: generates `Λ` whenever
/// `A` normally generates the kernel and `A ∪ X` generates the ambient group.
pub fn fiber_generators(kernel_set: &[Word], diagonal: &[Generator]) -> Vec<(Word, Word)> {
    let left = kernel_set.iter().map(|a| (a.clone(), Word::identity()));
    let right = kernel_set.iter().map(|a| (Word::identity(), a.clone()));
    let diag = diagonal.iter().map(|x| (x.word(), x.word()));
    left.chain(right).chain(diag).collect()
}

/// Pair `(u, v)` as the word `u₁·v₂` of the product presentation.
pub fn embed_pair((u, v): &(Word, Word)) -> Word {
    embed_in_factor(u, 1).concat(&embed_in_factor(v, 2))
}

#[derive(Debug, Clone)]
pub struct FiberSpec {
    /// `Γ × Γ`.
    pub ambient: FinitePresentation,
    pub pairs: Vec<(Word, Word)>,
    /// The pairs as words in `ambient`.
    pub fiber_generators: Vec<Word>,
    /// `{a₁, a₂, a₃} ∪ R(X)`, generating the kernel of `Γ → Q`.
    pub l_generators: Vec<Word>,
    pub diagonal: Vec<Generator>,
    pub b1_gamma: usize,
    pub b2_q: Option<usize>,
    pub predicted_b1: Option<usize>,
}

impl FiberSpec {
    pub fn set_b2(&mut self, b2_q: usize) {
        self.b2_q = Some(b2_q);
        self.predicted_b1 = Some(predicted_first_betti(self.b1_gamma, b2_q));
    }

    /// `2·|A| + |X|`.
    pub fn expected_size(&self) -> usize {
        2 * self.l_generators.len() + self.diagonal.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "ambient": self.ambient.to_json(),
            "fiber_generators": self.fiber_generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "l_generators": self.l_generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "b1_gamma": self.b1_gamma,
            "b2_q": self.b2_q,
            "predicted_b1": self.predicted_b1,
        })
    }
}

/// The generating set for `Λ ⊆ Γ × Γ` with `A = {a₁, a₂, a₃} ∪ R(X)`, where
/// `original_relators` are the relators of `Q` read in `Γ`.
pub fn fiber_product_spec(rips: &RipsOutput, original_relators: &[Word]) -> Result<FiberSpec, ConstructionError> {
    let gamma = &rips.presentation;
    for r in original_relators {
        gamma.check_word(r)?;
    }
    let l_generators: Vec<Word> =
        rips.kernel_generators.iter().map(Generator::word).chain(original_relators.iter().cloned()).collect();
    let diagonal: Vec<Generator> =
        gamma.generators().iter().filter(|g| !rips.kernel_generators.contains(g)).cloned().collect();
    let pairs = fiber_generators(&l_generators, &diagonal);
    let fiber_generators = pairs.iter().map(embed_pair).collect();
    Ok(FiberSpec {
        ambient: direct_product(gamma, gamma),
        pairs,
        fiber_generators,
        l_generators,
        diagonal,
        b1_gamma: first_homology(gamma).betti,
        b2_q: None,
        predicted_b1: None,
    })
}
