//! The Rips construction: a `C′(1/6)` group `Γ` mapping onto `Q` with kernel
//! generated by three elements.

use serde_json::json;

use super::ConstructionError;
use crate::presentations::{FinitePresentation, MarkedHomomorphism};
use crate::smallcanc::{check_metric_condition, one_sixth, PieceReport};
use crate::words::{Generator, Word};

/// First safety factor tried when sizing the right-hand words; `6` is the
/// bare `C′(1/6)` requirement.
const FIRST_MARGIN: usize = 6;
const MAX_ATTEMPTS: usize = 8;

/// `Γ = ⟨a₁, a₂, a₃, X | Σ⟩` together with `η: Γ → Q`.
#[derive(Debug, Clone)]
pub struct RipsOutput {
    pub presentation: FinitePresentation,
    /// `a₁, a₂, a₃`; they generate the kernel of `η` as a subgroup.
    pub kernel_generators: Vec<Generator>,
    /// Identity on `X`, trivial on the kernel generators.
    pub quotient_map: MarkedHomomorphism,
    /// Piece report of `Σ` at `λ = 1/6`.
    pub certificate: PieceReport,
}

impl RipsOutput {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "presentation": self.presentation.to_json(),
            "kernel_generators": self.kernel_generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "quotient_images": self.quotient_map.images().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "small_cancellation": self.certificate.to_json(),
        })
    }
}

/// `a1, a2, a3`, with extra leading `a`s until no name clashes with `x`.
pub fn kernel_generator_names(x: &[Generator]) -> Vec<Generator> {
    let mut prefix = String::from("a");
    loop {
        let names: Vec<Generator> = (1..=3).map(|k| Generator::new(&format!("{prefix}{k}"))).collect();
        if names.iter().all(|n| !x.contains(n)) {
            return names;
        }
        prefix.push('a');
    }
}

/// Exponent pairs `(p, q)` with `p, q ≥ 1`, by increasing `p + q` then `p`.
struct TokenPairs {
    sum: u64,
    p: u64,
}

impl Iterator for TokenPairs {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.p >= self.sum {
            self.sum += 1;
            self.p = 1;
        }
        let pair = (self.p, self.sum - self.p);
        self.p += 1;
        Some(pair)
    }
}

fn token_pairs() -> TokenPairs {
    TokenPairs { sum: 2, p: 1 }
}

fn token_length((p, q): (u64, u64)) -> usize {
    (p + q + 1) as usize
}

/// Splits the stream of distinct tokens `a₁a₂^p a₃^q` among the relators so
/// that each relator exceeds `margin` times the longest possible piece: its
/// own left-hand part plus two tokens on either side.
fn allocate_tokens(prefix_lengths: &[usize], margin: usize) -> Vec<Vec<(u64, u64)>> {
    let mut longest = token_length((1, 1));
    loop {
        let mut tokens = token_pairs();
        let mut used = 0;
        let blocks: Vec<Vec<(u64, u64)>> = prefix_lengths
            .iter()
            .map(|&left| {
                let bound = margin * (left + 2 * longest + 3);
                let mut block = Vec::new();
                let mut total = left;
                while total <= bound {
                    let t = tokens.next().expect("token stream is infinite");
                    total += token_length(t);
                    used = used.max(token_length(t));
                    block.push(t);
                }
                block
            })
            .collect();
        if used <= longest {
            return blocks;
        }
        longest = used;
    }
}

fn block_word(kernel: &[Generator], block: &[(u64, u64)]) -> Word {
    let (a1, a2, a3) = (kernel[0].word(), kernel[1].word(), kernel[2].word());
    block.iter().fold(Word::identity(), |w, &(p, q)| w.concat(&a1).concat(&a2.pow(p as i64)).concat(&a3.pow(q as i64)))
}

/// Left-hand parts of `Σ`: the relators `r_j`, then `xᵢ⁻¹a_kxᵢ` and
/// `xᵢa_kxᵢ⁻¹` for each `i` (outer) and `k`.
fn left_parts(p: &FinitePresentation, kernel: &[Generator]) -> Vec<Word> {
    let mut out = p.relators().to_vec();
    for x in p.generators() {
        for a in kernel {
            out.push(a.word().conjugate_by(&x.word()));
            out.push(a.word().conjugate_by(&x.word().inverse()));
        }
    }
    out
}

/// Runs the construction on `⟨X | R⟩`. The right-hand words are built from
/// pairwise distinct tokens and the result is certified by the piece checker;
/// the words are lengthened until the certificate holds.
pub fn rips_construct(p: &FinitePresentation) -> Result<RipsOutput, ConstructionError> {
    let kernel = kernel_generator_names(p.generators());
    let lefts = left_parts(p, &kernel);
    let generators: Vec<Generator> = kernel.iter().chain(p.generators()).cloned().collect();
    let lengths: Vec<usize> = lefts.iter().map(Word::len).collect();
    for attempt in 0..MAX_ATTEMPTS {
        let blocks = allocate_tokens(&lengths, FIRST_MARGIN + attempt);
        let relators: Vec<Word> =
            lefts.iter().zip(&blocks).map(|(l, b)| l.concat(&block_word(&kernel, b).inverse())).collect();
        let presentation = FinitePresentation::new(generators.clone(), relators)?;
        let certificate = check_metric_condition(&presentation, one_sixth()).expect("1/6 is a valid ratio");
        if certificate.satisfied {
            let images = kernel.iter().map(|_| Word::identity()).chain(p.generators().iter().map(Generator::word));
            let quotient_map = MarkedHomomorphism::new(presentation.clone(), p.clone(), images.collect())?;
            return Ok(RipsOutput { presentation, kernel_generators: kernel, quotient_map, certificate });
        }
    }
    Err(ConstructionError::Uncertified(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_are_distinct_and_ordered() {
        let first: Vec<(u64, u64)> = token_pairs().take(6).collect();
        assert_eq!(first, vec![(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]);
    }

    #[test]
    fn allocation_meets_its_own_bound() {
        let lengths = [3, 3, 10, 22];
        let blocks = allocate_tokens(&lengths, 6);
        let longest = blocks.iter().flatten().map(|&t| token_length(t)).max().unwrap();
        for (left, block) in lengths.iter().zip(&blocks) {
            let total: usize = left + block.iter().map(|&t| token_length(t)).sum::<usize>();
            assert!(total > 6 * (left + 2 * longest + 3));
        }
    }

    #[test]
    fn name_clash_gets_a_longer_prefix() {
        let x = vec![Generator::new("a1"), Generator::new("b")];
        let names: Vec<String> = kernel_generator_names(&x).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["aa1", "aa2", "aa3"]);
    }
}
