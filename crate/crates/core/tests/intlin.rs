use fiberforge::intlin::{first_homology, smith_normal_form, Matrix};
use fiberforge::presentations::parse_presentation;
use fiberforge::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

type Rows = Vec<Vec<i64>>;

fn det(m: &Rows) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Rows = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * i128::from(m[0][j]) * det(&minor)
        })
        .sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            combinations(last, k - 1).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn minors_gcd(m: &Rows, k: usize) -> i128 {
    let cols = m[0].len();
    let mut g = 0;
    for rs in combinations(m.len(), k) {
        for cs in combinations(cols, k) {
            let sub: Rows = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = gcd(g, det(&sub));
        }
    }
    g
}

fn matrix() -> impl Strategy<Value = Rows> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

proptest! {
    #[test]
    fn smith_agrees_with_minors(rows in matrix()) {
        let m = Matrix::<BigInt>::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        let d = s.d.diagonal();
        let mut product = BigInt::one();
        for (k, dk) in d.iter().enumerate() {
            prop_assert!(!dk.is_negative());
            if k > 0 && !d[k - 1].is_zero() {
                prop_assert!((dk % &d[k - 1]).is_zero());
            }
            product *= dk;
            prop_assert_eq!(product.clone(), BigInt::from(minors_gcd(&rows, k + 1)));
        }
    }

    #[test]
    fn scalar_types_agree(rows in matrix()) {
        // Fixed-width transforms overflow quickly; see `smith_normal_form`.
        let big = Matrix::<BigInt>::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()).unwrap();
        let big_d: Vec<String> = smith_normal_form(&big).d.diagonal().iter().map(ToString::to_string).collect();
        let wide = Matrix::<i128>::from_rows(rows.iter().map(|r| r.iter().map(|&v| i128::from(v)).collect()).collect()).unwrap();
        let wide_d: Vec<String> = smith_normal_form(&wide).d.diagonal().iter().map(ToString::to_string).collect();
        prop_assert_eq!(&big_d, &wide_d);
        if rows.len() <= 3 && rows[0].len() <= 3 {
            let small = Matrix::<i64>::from_rows(rows.clone()).unwrap();
            let small_d: Vec<String> = smith_normal_form(&small).d.diagonal().iter().map(ToString::to_string).collect();
            prop_assert_eq!(&big_d, &small_d);
        }
    }
}

#[test]
fn homology_of_small_groups() {
    let cases = [
        ("<a, b | a^2, b^3, (a b)^5>", 0, vec![]),
        ("<x, y | x^2, y^4>", 0, vec![2, 4]),
        ("<x, y | [x, y]>", 2, vec![]),
        ("<x, y | x^6 y^4>", 1, vec![2]),
        ("<a1, b1, a2, b2 | [a1, b1] [a2, b2]>", 4, vec![]),
    ];
    for (text, betti, torsion) in cases {
        let h = first_homology(&parse_presentation(text).unwrap());
        assert_eq!(h.betti, betti, "{text}");
        let expected: Vec<BigInt> = torsion.into_iter().map(BigInt::from).collect();
        assert_eq!(h.torsion, expected, "{text}");
    }
}
