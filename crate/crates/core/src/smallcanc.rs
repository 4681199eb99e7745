//! Metric small cancellation: piece lengths over the symmetrized relator set,
//! the `C′(λ)` verdict, and Dehn's algorithm for `C′(1/6)` presentations.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::oracle::{OracleError, WordOracle};
use crate::presentations::{FinitePresentation, PresentationError};
use crate::words::Word;

/// `λ` for the metric condition, kept exact.
pub type Lambda = Ratio<u64>;

pub fn one_sixth() -> Lambda {
    Ratio::new(1, 6)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmallCancError {
    #[error("lambda must lie strictly between 0 and 1, got {0}")]
    InvalidLambda(Lambda),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// All cyclic permutations of the relators and their inverses, without
/// repeats, stored as `(base word, rotation)` and kept sorted
/// lexicographically for prefix queries.
#[derive(Debug, Clone)]
pub struct SymmetrizedRelatorSet {
    bases: Vec<Vec<usize>>,
    /// Relator each base came from.
    origin: Vec<usize>,
    elements: Vec<(usize, usize)>,
}

impl SymmetrizedRelatorSet {
    pub fn new(p: &FinitePresentation) -> Self {
        let mut bases = Vec::new();
        let mut origin = Vec::new();
        for (j, r) in p.relators().iter().enumerate() {
            if r.is_empty() {
                continue;
            }
            for w in [r.clone(), r.inverse()] {
                bases.push(p.encode(&w).expect("relators use declared generators"));
                origin.push(j);
            }
        }
        let mut s = Self { bases, origin, elements: Vec::new() };
        let mut elements: Vec<(usize, usize)> =
            (0..s.bases.len()).flat_map(|b| (0..s.bases[b].len()).map(move |k| (b, k))).collect();
        elements.sort_by(|&x, &y| s.compare(x, y).then(x.cmp(&y)));
        elements.dedup_by(|x, y| s.compare(*x, *y) == Ordering::Equal);
        s.elements = elements;
        s
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn letter(&self, (b, k): (usize, usize), i: usize) -> usize {
        let base = &self.bases[b];
        base[(k + i) % base.len()]
    }

    fn length(&self, (b, _): (usize, usize)) -> usize {
        self.bases[b].len()
    }

    fn compare(&self, x: (usize, usize), y: (usize, usize)) -> Ordering {
        let n = self.length(x).min(self.length(y));
        (0..n)
            .map(|i| self.letter(x, i).cmp(&self.letter(y, i)))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.length(x).cmp(&self.length(y)))
    }

    fn common_prefix(&self, x: (usize, usize), y: (usize, usize)) -> usize {
        let n = self.length(x).min(self.length(y));
        (0..n).take_while(|&i| self.letter(x, i) == self.letter(y, i)).count()
    }

    /// Longest common prefix of `w[from..]` with element `e`.
    fn match_len(&self, w: &[usize], from: usize, e: (usize, usize)) -> usize {
        let n = self.length(e).min(w.len() - from);
        (0..n).take_while(|&i| self.letter(e, i) == w[from + i]).count()
    }

    fn compare_with(&self, e: (usize, usize), w: &[usize]) -> Ordering {
        let n = self.length(e).min(w.len());
        (0..n).map(|i| self.letter(e, i).cmp(&w[i])).find(|o| o.is_ne()).unwrap_or_else(|| self.length(e).cmp(&w.len()))
    }

    /// Elements as letter codes, in sorted order.
    pub fn element_codes(&self) -> Vec<Vec<usize>> {
        self.elements.iter().map(|&e| (0..self.length(e)).map(|i| self.letter(e, i)).collect()).collect()
    }

    /// For every element, the longest piece it starts with: the maximum
    /// common prefix with any other element. In sorted order that maximum is
    /// attained at a neighbour.
    fn max_pieces(&self) -> Vec<usize> {
        let n = self.elements.len();
        let adjacent: Vec<usize> = (1..n).map(|i| self.common_prefix(self.elements[i - 1], self.elements[i])).collect();
        (0..n)
            .map(|i| {
                let before = if i > 0 { adjacent[i - 1] } else { 0 };
                let after = if i + 1 < n { adjacent[i] } else { 0 };
                before.max(after)
            })
            .collect()
    }
}

/// Longest piece and length of one relator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorPieces {
    pub relator: String,
    pub length: usize,
    pub max_piece: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    pub relators: Vec<RelatorPieces>,
    pub lambda: Lambda,
    /// Every piece `p` of every relator `r` has `|p| < λ·|r|`.
    pub satisfied: bool,
}

impl PieceReport {
    /// Largest `max_piece / length` over the relators.
    pub fn max_ratio(&self) -> Option<Lambda> {
        self.relators.iter().filter(|r| r.length > 0).map(|r| Ratio::new(r.max_piece as u64, r.length as u64)).max()
    }

    pub fn satisfies(&self, lambda: Lambda) -> bool {
        self.relators.iter().all(|r| strictly_below(r.max_piece, r.length, lambda))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda.to_string(),
            "satisfied": self.satisfied,
            "max_ratio": self.max_ratio().map(|r| r.to_string()),
            "relators": self.relators,
        })
    }
}

impl fmt::Display for PieceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.satisfied { "satisfied" } else { "violated" };
        write!(f, "C'({}) {verdict}", self.lambda)?;
        if let Some(r) = self.max_ratio() {
            write!(f, ", max piece/length = {r}")?;
        }
        Ok(())
    }
}

fn strictly_below(piece: usize, length: usize, lambda: Lambda) -> bool {
    (piece as u128) * u128::from(*lambda.denom()) < u128::from(*lambda.numer()) * (length as u128)
}

/// Computes the longest piece of every relator and the `C′(λ)` verdict.
pub fn check_metric_condition(p: &FinitePresentation, lambda: Lambda) -> Result<PieceReport, SmallCancError> {
    if *lambda.numer() == 0 || lambda >= Ratio::from_integer(1) {
        return Err(SmallCancError::InvalidLambda(lambda));
    }
    let set = SymmetrizedRelatorSet::new(p);
    Ok(report_from(p, &set, lambda))
}

fn report_from(p: &FinitePresentation, set: &SymmetrizedRelatorSet, lambda: Lambda) -> PieceReport {
    let mut best = vec![0; p.relators().len()];
    for (e, piece) in set.elements.iter().zip(set.max_pieces()) {
        let j = set.origin[e.0];
        best[j] = best[j].max(piece);
    }
    let relators: Vec<RelatorPieces> = p
        .relators()
        .iter()
        .zip(best)
        .filter(|(r, _)| !r.is_empty())
        .map(|(r, max_piece)| RelatorPieces { relator: r.to_string(), length: r.len(), max_piece })
        .collect();
    let satisfied = relators.iter().all(|r| strictly_below(r.max_piece, r.length, lambda));
    PieceReport { relators, lambda, satisfied }
}

/// Result of Dehn's algorithm: the final word and the length after each
/// replacement, starting with the input length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnRun {
    pub word: Word,
    pub lengths: Vec<usize>,
}

impl DehnRun {
    pub fn steps(&self) -> usize {
        self.lengths.len() - 1
    }
}

/// Dehn's algorithm over a fixed presentation. Emptiness of the reduced word
/// always proves triviality; a nonempty result proves nontriviality only when
/// the presentation was verified `C′(1/6)`.
#[derive(Debug, Clone)]
pub struct DehnSolver {
    presentation: FinitePresentation,
    set: SymmetrizedRelatorSet,
    report: PieceReport,
}

impl DehnSolver {
    pub fn new(p: &FinitePresentation) -> Self {
        let set = SymmetrizedRelatorSet::new(p);
        let report = report_from(p, &set, one_sixth());
        Self { presentation: p.clone(), set, report }
    }

    pub fn is_certified(&self) -> bool {
        self.report.satisfied
    }

    pub fn report(&self) -> &PieceReport {
        &self.report
    }

    pub fn presentation(&self) -> &FinitePresentation {
        &self.presentation
    }

    /// Replaces the leftmost, then longest, subword that is more than half of
    /// a symmetrized relator by the inverse of the rest of that relator, and
    /// repeats until no such subword remains.
    pub fn reduce(&self, w: &Word) -> Result<DehnRun, SmallCancError> {
        let mut code = self.presentation.encode(w)?;
        let mut lengths = vec![code.len()];
        let longest = self.set.bases.iter().map(Vec::len).max().unwrap_or(0);
        let shortest = self.set.bases.iter().map(Vec::len).min().unwrap_or(0);
        let threshold = shortest / 2 + 1;
        let mut start = 0;
        while let Some((i, k, e)) = self.find_replacement(&code, start, threshold) {
            let len = self.set.length(e);
            let complement: Vec<usize> = (k..len).rev().map(|t| self.set.letter(e, t) ^ 1).collect();
            let mut next: Vec<usize> = Vec::with_capacity(code.len());
            next.extend_from_slice(&code[..i]);
            let mut cancelled = 0;
            for &c in complement.iter().chain(&code[i + k..]) {
                if next.last() == Some(&(c ^ 1)) {
                    next.pop();
                    if next.len() < i {
                        cancelled = cancelled.max(i - next.len());
                    }
                } else {
                    next.push(c);
                }
            }
            assert!(next.len() < code.len(), "Dehn replacement must shorten the word");
            code = next;
            lengths.push(code.len());
            start = i.saturating_sub(cancelled + longest);
        }
        Ok(DehnRun { word: self.presentation.decode(&code), lengths })
    }

    /// Leftmost position from `start` holding a prefix of some element longer
    /// than half that element; the longest such prefix there.
    fn find_replacement(&self, w: &[usize], start: usize, threshold: usize) -> Option<(usize, usize, (usize, usize))> {
        if self.set.is_empty() {
            return None;
        }
        let elems = &self.set.elements;
        for i in start..w.len() {
            if w.len() - i < threshold {
                return None;
            }
            let suffix = &w[i..];
            let pos = elems.partition_point(|&e| self.set.compare_with(e, suffix) == Ordering::Less);
            let mut best: Option<(usize, (usize, usize))> = None;
            let mut consider = |e: (usize, usize)| -> bool {
                let k = self.set.match_len(w, i, e);
                if k < threshold {
                    return false;
                }
                if 2 * k > self.set.length(e) && best.is_none_or(|(bk, _)| k > bk) {
                    best = Some((k, e));
                }
                true
            };
            for &e in elems[pos..].iter() {
                if !consider(e) {
                    break;
                }
            }
            for &e in elems[..pos].iter().rev() {
                if !consider(e) {
                    break;
                }
            }
            if let Some((k, e)) = best {
                return Some((i, k, e));
            }
        }
        None
    }
}

impl WordOracle for DehnSolver {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        let run = self.reduce(w).map_err(|e| match e {
            SmallCancError::Presentation(PresentationError::UndeclaredGenerator(g)) => OracleError::UnknownGenerator(g),
            other => OracleError::Undecided(other.to_string()),
        })?;
        if run.word.is_empty() {
            Ok(true)
        } else if self.is_certified() {
            Ok(false)
        } else {
            Err(OracleError::Undecided(
                "presentation is not verified C'(1/6); nonempty Dehn reduction proves nothing".into(),
            ))
        }
    }

    fn describe(&self) -> String {
        format!("Dehn's algorithm over {} symmetrized relators", self.set.len())
    }
}

/// Dehn reduction of `w` over `p`.
pub fn dehn_reduce(p: &FinitePresentation, w: &Word) -> Result<Word, SmallCancError> {
    Ok(DehnSolver::new(p).reduce(w)?.word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{parse_presentation, parse_word};

    /// Longest common prefix over all pairs of distinct cyclic permutations.
    fn brute_force_pieces(p: &FinitePresentation) -> Vec<usize> {
        let mut elements: Vec<(usize, Vec<usize>)> = Vec::new();
        for (j, r) in p.relators().iter().enumerate() {
            for w in [r.clone(), r.inverse()] {
                let c = p.encode(&w).unwrap();
                for k in 0..c.len() {
                    let rot: Vec<usize> = c[k..].iter().chain(&c[..k]).copied().collect();
                    if !elements.iter().any(|(_, e)| *e == rot) {
                        elements.push((j, rot));
                    }
                }
            }
        }
        let mut best = vec![0; p.relators().len()];
        for (j, a) in &elements {
            for (_, b) in &elements {
                if a != b {
                    let l = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                    best[*j] = best[*j].max(l);
                }
            }
        }
        best
    }

    #[test]
    fn pieces_match_brute_force() {
        for text in [
            "<a,b | [a,b]>",
            "<a,b | a^2, b^3, (a b)^5>",
            "<a,b,c | a b c a^-1 b^-1 c^-1 a^2 b^3, b c^2 a^-1 c b^2>",
            "<x | x^7>",
            "<a,b | a b a b^2 a b^3 a b^4 a b^5 a b^6 a b^7>",
        ] {
            let p = parse_presentation(text).unwrap();
            let report = check_metric_condition(&p, one_sixth()).unwrap();
            let fast: Vec<usize> = report.relators.iter().map(|r| r.max_piece).collect();
            assert_eq!(fast, brute_force_pieces(&p), "{text}");
        }
    }

    #[test]
    fn metric_condition_examples() {
        let free = parse_presentation("<x, y | >").unwrap();
        assert!(check_metric_condition(&free, Ratio::new(1, 100)).unwrap().satisfied);
        let torus = parse_presentation("<a,b | [a,b]>").unwrap();
        let r = check_metric_condition(&torus, one_sixth()).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.relators[0].max_piece, 1);
        assert!(check_metric_condition(&torus, Ratio::new(1, 1)).is_err());
        assert!(check_metric_condition(&torus, Ratio::new(0, 1)).is_err());
        assert!(!strictly_below(1, 6, one_sixth()));
        assert!(strictly_below(1, 7, one_sixth()));
    }

    #[test]
    fn verdict_ignores_rotation_and_inversion() {
        let p = parse_presentation("<a,b | a b a b^2 a b^3 a b^4 a b^5 a b^6 a b^7>").unwrap();
        let q = parse_presentation("<a,b | (b^4 a b^5 a b^6 a b^7 a b a b^2 a b^3 a)^-1>").unwrap();
        let rp = check_metric_condition(&p, one_sixth()).unwrap();
        let rq = check_metric_condition(&q, one_sixth()).unwrap();
        assert_eq!(rp.satisfied, rq.satisfied);
        assert_eq!(rp.relators[0].max_piece, rq.relators[0].max_piece);
    }

    fn genus_four() -> FinitePresentation {
        parse_presentation("<a1,b1,a2,b2,a3,b3,a4,b4 | [a1,b1][a2,b2][a3,b3][a4,b4]>").unwrap()
    }

    #[test]
    fn dehn_examples() {
        let p = genus_four();
        let solver = DehnSolver::new(&p);
        assert!(solver.is_certified());
        let r = p.relators()[0].clone();
        assert!(solver.reduce(&r).unwrap().word.is_empty());
        let u = parse_word("a1^2 b3^-1 a2", None).unwrap();
        let conj = u.concat(&r).concat(&u.inverse());
        let run = solver.reduce(&conj).unwrap();
        assert!(run.word.is_empty());
        assert!(run.lengths.windows(2).all(|w| w[1] < w[0]));
        assert!(!solver.is_trivial(&parse_word("a1", None).unwrap()).unwrap());
        assert!(!solver.is_trivial(&parse_word("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1", None).unwrap()).unwrap());
        let half = parse_word("a1^-1 b1^-1 a1 b1 a2^-1 b2^-1 a2 b2 a3^-1", None).unwrap();
        let run = solver.reduce(&half).unwrap();
        assert_eq!(run.word.len(), 7);
    }

    #[test]
    fn dehn_without_relators_is_free_reduction() {
        let p = parse_presentation("<x, y | >").unwrap();
        let w = parse_word("x y y^-1 x", None).unwrap();
        assert_eq!(dehn_reduce(&p, &w).unwrap(), parse_word("x^2", None).unwrap());
    }

    #[test]
    fn uncertified_solver_refuses_nontriviality() {
        let torus = parse_presentation("<a,b | [a,b]>").unwrap();
        let solver = DehnSolver::new(&torus);
        assert!(!solver.is_certified());
        assert!(solver.is_trivial(&torus.relators()[0]).unwrap());
        assert!(matches!(solver.is_trivial(&parse_word("a", None).unwrap()), Err(OracleError::Undecided(_))));
    }
}
