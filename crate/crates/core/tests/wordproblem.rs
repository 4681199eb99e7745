use fiberforge::oracle::FreeGroupOracle;
use fiberforge::wordproblem::{hnn_generator, hnn_is_trivial, slinf_evaluate, HnnAction};
use fiberforge::words::{nu_encode, Generator, Letter, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `k = 2^i 3^j` with `i ≠ j`, both positive, found by division.
fn split(k: u64) -> Option<(usize, usize)> {
    let (mut m, mut i, mut j) = (k, 0, 0);
    while m > 0 && m % 2 == 0 {
        m /= 2;
        i += 1;
    }
    while m > 0 && m % 3 == 0 {
        m /= 3;
        j += 1;
    }
    (m == 1 && i > 0 && j > 0 && i != j).then_some((i, j))
}

fn dense_trivial(w: &Word) -> bool {
    let ops: Vec<(usize, usize, i128)> = w
        .letters()
        .iter()
        .filter_map(|l| split(l.gen.index().unwrap()).map(|(i, j)| (i - 1, j - 1, if l.inverse { -1 } else { 1 })))
        .collect();
    let n = ops.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
    let mut m: Vec<Vec<i128>> = (0..n).map(|r| (0..n).map(|c| i128::from(r == c)).collect()).collect();
    // Right multiplication by e_ij^±1 adds ± column i to column j.
    for (i, j, s) in ops {
        for row in m.iter_mut() {
            row[j] += s * row[i];
        }
    }
    m.iter().enumerate().all(|(r, row)| row.iter().enumerate().all(|(c, &v)| v == i128::from(r == c)))
}

fn c_word() -> impl Strategy<Value = Word> {
    let indices =
        prop_oneof![Just(12u64), Just(18), Just(24), Just(48), Just(54), Just(72), Just(6), Just(36), 1u64..200];
    prop::collection::vec((indices, any::<bool>()), 0..14)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(k, inv)| Letter::new(Generator::c(k), inv))))
}

proptest! {
    #[test]
    fn slinf_matches_dense_products(w in c_word()) {
        let run = slinf_evaluate(&w).unwrap();
        prop_assert_eq!(run.is_trivial(), dense_trivial(&w));
    }

    #[test]
    fn words_times_inverses_are_trivial(w in c_word(), v in c_word()) {
        let u = w.concat(&v).concat(&w.inverse()).concat(&v.inverse());
        prop_assert_eq!(slinf_evaluate(&u).unwrap().is_trivial(), dense_trivial(&u));
        prop_assert!(slinf_evaluate(&w.concat(&w.inverse())).unwrap().is_trivial());
    }
}

fn relation(i: u64) -> Word {
    let t = Generator::new("t").word();
    t.concat(&hnn_generator(i)).concat(&t.inverse()).concat(&hnn_generator(i + 1).inverse())
}

#[test]
fn hnn_traces_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut letters: Vec<Generator> = ["x", "s", "t"].iter().map(|s| Generator::new(s)).collect();
    letters.extend((0..3).map(Generator::c));
    let random = |rng: &mut ChaCha8Rng, len: usize| {
        Word::from_letters(
            (0..len).map(|_| Letter::new(letters[rng.gen_range(0..letters.len())].clone(), rng.gen_bool(0.5))),
        )
    };
    let t = Generator::new("t");
    for _ in 0..200 {
        let mut w = Word::identity();
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(0..=5);
            let r = relation(rng.gen_range(0..6)).pow(if rng.gen_bool(0.5) { 1 } else { -1 });
            w = w.concat(&r.conjugate_by(&random(&mut rng, len)));
        }
        let v = hnn_is_trivial(&nu_encode(&w).unwrap(), &FreeGroupOracle).unwrap();
        assert!(v.trivial, "{w}");
        assert!(v.trace.core_violations().is_empty(), "{:?}", v.trace.core_violations());

        // The exponent sum of t is a homomorphism to Z.
        let len = rng.gen_range(1..=10);
        let u = random(&mut rng, len);
        let v = hnn_is_trivial(&nu_encode(&u).unwrap(), &FreeGroupOracle).unwrap();
        if u.exponent_sum(&t) != 0 {
            assert!(!v.trivial, "{u}");
        }
        if !v.trivial && u.exponent_sum(&t) != 0 {
            let last = v.trace.steps.last().map(|s| s.action);
            assert!(matches!(last, Some(HnnAction::RejectedByBritton)), "{u}: {last:?}");
        }
        assert!(v.trace.core_violations().is_empty());
    }
}
