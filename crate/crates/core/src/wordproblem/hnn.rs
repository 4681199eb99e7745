//! The four-generator HNN embedding of a group `Γ = ⟨c_0, c_1, …⟩`.
//!
//! Inside `Γ * ⟨x⟩ * ⟨s⟩` the elements `s_i = s^{i+1}·c_i·x·s^{-i-1}` freely
//! generate `H_0 = ⟨s_i : i ≥ 0⟩` and `H_1 = ⟨s_i : i ≥ 1⟩`, and the stable
//! letter `t` conjugates `s_i` to `s_{i+1}`. Words are given in the finite
//! alphabet `{a, b, x, s, t}` through the encoding `c_n ↦ bⁿ a b⁻ⁿ`, decoded
//! once and then processed over the `c_i`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::oracle::{OracleError, WordOracle};
use crate::words::{encoded_length, freely_reduce, nu_decode, nu_encode, Generator, Letter, Word, WordError, C_FAMILY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnnError {
    #[error(transparent)]
    Decode(#[from] WordError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("malformed input: {0}")]
    Malformed(String),
}

fn sym(name: &str) -> Generator {
    Generator::new(name)
}

fn is(l: &Letter, name: &str) -> bool {
    l.gen.index().is_none() && l.gen.family() == name
}

fn is_c(l: &Letter) -> bool {
    l.gen.family() == C_FAMILY && l.gen.index().is_some()
}

/// `s_i = s^{i+1}·c_i·x·s^{-i-1}` as a word over `c, x, s`.
pub fn hnn_generator(i: u64) -> Word {
    let s = sym("s").word().pow(i as i64 + 1);
    s.concat(&Generator::c(i).word()).concat(&sym("x").word()).concat(&s.inverse())
}

/// Decides triviality in `Γ * F` for a free group `F` on the non-`c` letters,
/// given an oracle for `Γ`: maximal `c`-syllables that are trivial in `Γ` are
/// deleted and the word freely reduced until nothing changes.
#[derive(Debug, Clone, Copy)]
pub struct FreeProductOracle<O> {
    pub factor: O,
}

impl<O: WordOracle> FreeProductOracle<O> {
    pub fn new(factor: O) -> Self {
        Self { factor }
    }

    /// A reduced form: no `c`-syllable is trivial in `Γ`.
    pub fn normalize(&self, w: &Word) -> Result<Word, OracleError> {
        let mut cur = w.clone();
        loop {
            let letters = cur.letters();
            let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
            let mut changed = false;
            let mut i = 0;
            while i < letters.len() {
                if !is_c(&letters[i]) {
                    out.push(letters[i].clone());
                    i += 1;
                    continue;
                }
                let j = i + letters[i..].iter().take_while(|l| is_c(l)).count();
                let syllable = Word::from_letters(letters[i..j].iter().cloned());
                if self.factor.is_trivial(&syllable)? {
                    changed = true;
                } else {
                    out.extend(letters[i..j].iter().cloned());
                }
                i = j;
            }
            let next = freely_reduce(out);
            if !changed {
                return Ok(next);
            }
            cur = next;
        }
    }
}

impl<O: WordOracle> WordOracle for FreeProductOracle<O> {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(self.normalize(w)?.is_identity())
    }

    fn describe(&self) -> String {
        format!("free product with {}", self.factor.describe())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HLevel {
    H0,
    H1,
}

/// `w = ∏ s^{r_j}·v_j·s^{-r_j}` with each `v_j = (c_{r_j-1}·x)^{ξ_j}` in
/// `Γ * ⟨x⟩`; `(r_j, ξ_j)` per factor, so `w = ∏ s_{r_j-1}^{ξ_j}`.
pub type HFactors = Vec<(i64, i64)>;

/// Writes a `t`-free word over `c, x, s` as a product of the free generators
/// of `H_0`, if it lies in `H_0`.
pub fn h0_factors<O: WordOracle>(w: &Word, oracle: &O) -> Result<Option<HFactors>, HnnError> {
    let fp = FreeProductOracle::new(oracle);
    let mut syllables: Vec<(i64, Vec<Letter>)> = Vec::new();
    let mut r = 0i64;
    for l in w.letters() {
        if is(l, "s") {
            r += l.sign();
        } else if is(l, "x") || is_c(l) {
            match syllables.last_mut() {
                Some((last, v)) if *last == r => v.push(l.clone()),
                _ => syllables.push((r, vec![l.clone()])),
            }
        } else {
            return Err(HnnError::Malformed(format!("unexpected letter {l} in a subgroup test")));
        }
    }
    if r != 0 {
        return Ok(None);
    }
    // Trivial syllables would split one generator power into pieces; drop
    // them and merge neighbours at the same level until stable.
    let mut parts: Vec<(i64, Word)> = syllables.into_iter().map(|(r, v)| (r, Word::from_letters(v))).collect();
    loop {
        let mut merged: Vec<(i64, Word)> = Vec::with_capacity(parts.len());
        let mut changed = false;
        for (r, v) in parts {
            if fp.is_trivial(&v)? {
                changed = true;
                continue;
            }
            match merged.last_mut() {
                Some((last, u)) if *last == r => {
                    *u = u.concat(&v);
                    changed = true;
                }
                _ => merged.push((r, v)),
            }
        }
        parts = merged;
        if !changed {
            break;
        }
    }
    let x = sym("x");
    let mut factors = Vec::with_capacity(parts.len());
    for (r, v) in parts {
        if r < 1 {
            return Ok(None);
        }
        let xi = v.exponent_sum(&x);
        let base = Generator::c(r as u64 - 1).word().concat(&x.word());
        if !fp.is_trivial(&v.concat(&base.pow(-xi)))? {
            return Ok(None);
        }
        factors.push((r, xi));
    }
    Ok(Some(factors))
}

/// Membership of a `t`-free decoded word in `H_0` or `H_1`.
pub fn h_membership_decoded<O: WordOracle>(w: &Word, level: HLevel, oracle: &O) -> Result<bool, HnnError> {
    Ok(match h0_factors(w, oracle)? {
        None => false,
        Some(f) => level == HLevel::H0 || f.iter().all(|&(r, _)| r >= 2),
    })
}

/// Membership of `ν⁻¹(W)` in `H_0` or `H_1`, for `W` over `a, b, x, s`.
pub fn hnn_h_membership<O: WordOracle>(encoded: &Word, level: HLevel, oracle: &O) -> Result<bool, HnnError> {
    if let Some(l) = encoded.letters().iter().find(|l| is(l, "t")) {
        return Err(HnnError::Malformed(format!("stable letter {l} in a subgroup test")));
    }
    h_membership_decoded(&nu_decode(encoded)?, level, oracle)
}

fn shifted(factors: &HFactors, shift: i64) -> Word {
    let x = sym("x").word();
    let s = sym("s").word();
    factors.iter().fold(Word::identity(), |acc, &(r, xi)| {
        let level = r + shift;
        let gen = Generator::c(level as u64 - 1).word().concat(&x).pow(xi);
        acc.concat(&gen.conjugate_by(&s.pow(-level)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HnnAction {
    PinchRemoved,
    #[serde(rename = "rejected-by-Britton")]
    RejectedByBritton,
    ReducedToOracle,
}

impl fmt::Display for HnnAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HnnAction::PinchRemoved => "pinch-removed",
            HnnAction::RejectedByBritton => "rejected-by-Britton",
            HnnAction::ReducedToOracle => "reduced-to-oracle",
        })
    }
}

/// One word `W_n` of the run and what was done with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnnStep {
    pub word: String,
    pub action: HnnAction,
    /// Reduced length of `W_n`.
    pub encoded_length: usize,
    /// Number of maximal `s^k` subwords of `W_n`.
    pub s_components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnnTrace {
    pub steps: Vec<HnnStep>,
    /// Occurrences of `t^{±1}` in the input.
    pub stable_letters: usize,
}

impl HnnTrace {
    pub fn pinches(&self) -> usize {
        self.steps.iter().filter(|s| s.action == HnnAction::PinchRemoved).count()
    }

    /// Checks the growth bounds of the analysis and returns the ones that
    /// fail. Checked: `σ_{n+1} ≤ σ_n`, `l̂(w_n) ≤ (4n+1)·l̂(w_0)`, at most one
    /// pinch per pair of stable letters, and `l̂(w_{n+1}) ≤ l̂(w_n) + 4σ_n`.
    /// The last one does not hold in general (a pinch around `s·(c_0x)^k·s⁻¹`
    /// grows by about `2k`), so callers may want [`Self::core_violations`].
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.core_violations();
        for (n, pair) in self.steps.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            if b.encoded_length > a.encoded_length + 4 * a.s_components {
                out.push(format!(
                    "step {n}: length {} exceeds {} + 4*{}",
                    b.encoded_length, a.encoded_length, a.s_components
                ));
            }
        }
        out
    }

    /// The bounds that hold for every run.
    pub fn core_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let Some(first) = self.steps.first() else { return out };
        for (n, step) in self.steps.iter().enumerate() {
            if step.encoded_length > (4 * n + 1) * first.encoded_length {
                out.push(format!("step {n}: length {} exceeds (4n+1)*{}", step.encoded_length, first.encoded_length));
            }
        }
        for (n, pair) in self.steps.windows(2).enumerate() {
            if pair[1].s_components > pair[0].s_components {
                out.push(format!(
                    "step {n}: s-components grew from {} to {}",
                    pair[0].s_components, pair[1].s_components
                ));
            }
        }
        if self.pinches() > self.stable_letters / 2 {
            out.push(format!("{} pinches for {} stable letters", self.pinches(), self.stable_letters));
        }
        out
    }
}

fn s_components(w: &Word) -> usize {
    let l = w.letters();
    (0..l.len()).filter(|&i| is(&l[i], "s") && (i == 0 || !is(&l[i - 1], "s"))).count()
}

/// Outcome of [`hnn_is_trivial`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnnVerdict {
    pub trivial: bool,
    pub trace: HnnTrace,
}

/// Decides whether a word over `a, b, x, s, t` is trivial in the HNN
/// extension, removing the leftmost pinch `t·u·t⁻¹` (`u ∈ H_0`) or `t⁻¹·v·t`
/// (`v ∈ H_1`) each round. A word with `t` but no pinch is nontrivial by
/// Britton's lemma; a `t`-free word goes to the free-product oracle.
pub fn hnn_is_trivial<O: WordOracle>(encoded: &Word, oracle: &O) -> Result<HnnVerdict, HnnError> {
    if let Some(l) = encoded.letters().iter().find(|l| !["a", "b", "x", "s", "t"].iter().any(|n| is(l, n))) {
        return Err(HnnError::Malformed(format!("letter {l} outside a, b, x, s, t")));
    }
    let mut w = nu_decode(encoded)?;
    let stable_letters = w.letters().iter().filter(|l| is(l, "t")).count();
    let mut steps = Vec::new();
    let fp = FreeProductOracle::new(oracle);
    loop {
        let shown = nu_encode(&w)?;
        let mut step = HnnStep {
            word: shown.to_string(),
            action: HnnAction::ReducedToOracle,
            encoded_length: encoded_length(&w)?,
            s_components: s_components(&w),
        };
        let ts: Vec<usize> = w.letters().iter().enumerate().filter(|(_, l)| is(l, "t")).map(|(i, _)| i).collect();
        if ts.is_empty() {
            let trivial = fp.is_trivial(&w)?;
            steps.push(step);
            return Ok(HnnVerdict { trivial, trace: HnnTrace { steps, stable_letters } });
        }
        let mut rewritten = None;
        for pair in ts.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let (open, close) = (&w.letters()[p], &w.letters()[q]);
            if open.inverse == close.inverse {
                continue;
            }
            let inner = Word::from_letters(w.letters()[p + 1..q].iter().cloned());
            let Some(factors) = h0_factors(&inner, oracle)? else { continue };
            let replacement = if !open.inverse {
                shifted(&factors, 1)
            } else if factors.iter().all(|&(r, _)| r >= 2) {
                shifted(&factors, -1)
            } else {
                continue;
            };
            let mut letters: Vec<Letter> = w.letters()[..p].to_vec();
            letters.extend(replacement.into_letters());
            letters.extend_from_slice(&w.letters()[q + 1..]);
            rewritten = Some(freely_reduce(letters));
            break;
        }
        match rewritten {
            Some(next) => {
                step.action = HnnAction::PinchRemoved;
                steps.push(step);
                w = next;
            }
            None => {
                step.action = HnnAction::RejectedByBritton;
                steps.push(step);
                return Ok(HnnVerdict { trivial: false, trace: HnnTrace { steps, stable_letters } });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FreeGroupOracle;
    use crate::presentations::parse_word;
    use crate::wordproblem::SlinfOracle;

    fn w(s: &str) -> Word {
        parse_word(s, None).unwrap()
    }

    #[test]
    fn generators_encode_as_documented() {
        assert_eq!(nu_encode(&hnn_generator(2)).unwrap(), w("s^3 b^2 a b^-2 x s^-3"));
    }

    #[test]
    fn membership_examples() {
        let s2 = nu_encode(&hnn_generator(2)).unwrap();
        assert!(hnn_h_membership(&s2, HLevel::H0, &FreeGroupOracle).unwrap());
        assert!(hnn_h_membership(&s2, HLevel::H1, &FreeGroupOracle).unwrap());
        let s0 = nu_encode(&hnn_generator(0)).unwrap();
        assert!(hnn_h_membership(&s0, HLevel::H0, &FreeGroupOracle).unwrap());
        assert!(!hnn_h_membership(&s0, HLevel::H1, &FreeGroupOracle).unwrap());
        assert!(!hnn_h_membership(&w("a"), HLevel::H0, &FreeGroupOracle).unwrap());
        assert!(hnn_h_membership(&w("t"), HLevel::H0, &FreeGroupOracle).is_err());
        assert!(hnn_h_membership(&w("b a"), HLevel::H0, &FreeGroupOracle).is_err());
    }

    #[test]
    fn membership_needs_normalization() {
        // c_5 = 1 in SL_∞(ℤ) splits s·c_0·x·s⁻¹ into two syllables at level 1.
        let u = w("s c_0 s c_5 s^-1 x s^-1");
        assert!(h_membership_decoded(&u, HLevel::H0, &SlinfOracle).unwrap());
        assert!(!h_membership_decoded(&u, HLevel::H0, &FreeGroupOracle).unwrap());
    }

    #[test]
    fn hnn_examples() {
        let s0 = hnn_generator(0);
        let s1 = hnn_generator(1);
        let t = sym("t").word();
        let relation = t.concat(&s0).concat(&t.inverse()).concat(&s1.inverse());
        let v = hnn_is_trivial(&nu_encode(&relation).unwrap(), &FreeGroupOracle).unwrap();
        assert!(v.trivial);
        assert_eq!(v.trace.pinches(), 1);
        assert!(v.trace.violations().is_empty());

        let v = hnn_is_trivial(&w("t a t^-1"), &FreeGroupOracle).unwrap();
        assert!(!v.trivial);
        assert_eq!(v.trace.steps.last().unwrap().action, HnnAction::RejectedByBritton);

        let v = hnn_is_trivial(&Word::identity(), &FreeGroupOracle).unwrap();
        assert!(v.trivial);
        assert_eq!(v.trace.steps.len(), 1);
        assert!(hnn_is_trivial(&w("y"), &FreeGroupOracle).is_err());
    }

    #[test]
    fn inverse_pinch_lowers_levels() {
        let t = sym("t").word();
        let s1 = hnn_generator(1);
        let s0 = hnn_generator(0);
        let word = t.inverse().concat(&s1).concat(&t).concat(&s0.inverse());
        assert!(hnn_is_trivial(&nu_encode(&word).unwrap(), &FreeGroupOracle).unwrap().trivial);
        let word = t.inverse().concat(&s0).concat(&t);
        assert!(!hnn_is_trivial(&nu_encode(&word).unwrap(), &FreeGroupOracle).unwrap().trivial);
    }

    #[test]
    fn additive_growth_bound_can_fail() {
        let t = sym("t").word();
        let u = hnn_generator(0).pow(10);
        let word = t.concat(&u).concat(&t.inverse());
        let v = hnn_is_trivial(&nu_encode(&word).unwrap(), &FreeGroupOracle).unwrap();
        assert!(!v.trivial);
        assert!(v.trace.core_violations().is_empty());
        assert_eq!(v.trace.violations().len(), 1);
    }
}
