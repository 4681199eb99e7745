use fiberforge::presentations::{parse_presentation, parse_word, FinitePresentation};
use fiberforge::words::{cyclically_reduce, encoded_length, nu_decode, nu_encode, Generator, Letter, Word};
use proptest::prelude::*;

fn letters(gens: Vec<Generator>, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..gens.len(), any::<bool>()), 0..max_len)
        .prop_map(move |v| v.into_iter().map(|(i, inv)| Letter::new(gens[i].clone(), inv)).collect())
}

fn named() -> Vec<Generator> {
    ["x", "y", "z"].iter().map(|s| Generator::new(s)).collect()
}

fn mixed() -> Vec<Generator> {
    let mut g: Vec<Generator> = (0..6).map(Generator::c).collect();
    g.extend(["x", "s", "t"].iter().map(|s| Generator::new(s)));
    g
}

/// Reduction by repeatedly deleting the first cancelling pair.
fn naive_reduce(mut l: Vec<Letter>) -> Vec<Letter> {
    while let Some(i) = (1..l.len()).find(|&i| l[i - 1].cancels(&l[i])) {
        l.drain(i - 1..=i);
    }
    l
}

proptest! {
    #[test]
    fn reduction_matches_naive(l in letters(named(), 30)) {
        prop_assert_eq!(Word::from_letters(l.clone()).into_letters(), naive_reduce(l));
    }

    #[test]
    fn inverse_is_an_anti_involution(u in letters(named(), 20), v in letters(named(), 20)) {
        let (u, v) = (Word::from_letters(u), Word::from_letters(v));
        prop_assert!(u.concat(&u.inverse()).is_identity());
        prop_assert_eq!(u.concat(&v).inverse(), v.inverse().concat(&u.inverse()));
        prop_assert_eq!(u.inverse().inverse(), u);
    }

    #[test]
    fn commutator_and_conjugate(u in letters(named(), 10), v in letters(named(), 10)) {
        let (u, v) = (Word::from_letters(u), Word::from_letters(v));
        let expected = u.inverse().concat(&v.inverse()).concat(&u).concat(&v);
        prop_assert_eq!(Word::commutator(&u, &v), expected);
        prop_assert_eq!(u.conjugate_by(&v), v.inverse().concat(&u).concat(&v));
        for g in named() {
            prop_assert_eq!(Word::commutator(&u, &v).exponent_sum(&g), 0);
        }
    }

    #[test]
    fn display_round_trips(l in letters(mixed(), 25)) {
        let w = Word::from_letters(l);
        prop_assert_eq!(parse_word(&w.to_string(), None).unwrap(), w);
    }

    #[test]
    fn encoding_round_trips(l in letters(mixed(), 25)) {
        let w = Word::from_letters(l);
        let e = nu_encode(&w).unwrap();
        prop_assert_eq!(nu_decode(&e).unwrap(), w.clone());
        prop_assert_eq!(encoded_length(&w).unwrap(), e.len());
        let n = w.max_c_index().unwrap_or(0) as usize;
        prop_assert!(w.len() <= e.len() && e.len() <= (2 * n + 1) * w.len());
    }

    #[test]
    fn cyclic_reduction_is_conjugate(l in letters(named(), 20)) {
        let w = Word::from_letters(l);
        let c = cyclically_reduce(&w);
        prop_assert!(c.is_cyclically_reduced());
        prop_assert!(c.len() <= w.len());
        for g in named() {
            prop_assert_eq!(c.exponent_sum(&g), w.exponent_sum(&g));
        }
    }

    #[test]
    fn presentations_round_trip(rels in prop::collection::vec(letters(named(), 8), 0..4)) {
        let rels: Vec<Word> = rels.into_iter().map(Word::from_letters).collect();
        let p = FinitePresentation::new(named(), rels).unwrap();
        prop_assert_eq!(parse_presentation(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(FinitePresentation::from_json(&p.to_json()).unwrap(), p.clone());
        let text = serde_json::to_string(&p.to_json()).unwrap();
        prop_assert_eq!(FinitePresentation::from_text(&text).unwrap(), p);
    }
}

#[test]
fn encoding_examples() {
    let c2 = Generator::c(2).word();
    assert_eq!(nu_encode(&c2).unwrap().to_string(), "b^2 a b^-2");
    assert_eq!(nu_encode(&Generator::c(0).word()).unwrap().to_string(), "a");
}
