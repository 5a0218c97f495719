use hecke_cert::demazure::{apply_demazure, intersection_vector, DemazureExpr, PAPER_GL15};
use hecke_cert::multipoly::MultiPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn one() -> BigInt {
    BigInt::from(1)
}

/// Random polynomial in `x_1..x_5`, degree <= 3 in each variable.
fn poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((proptest::collection::vec(0u32..=3, 5), -4i64..=4), 0..6).prop_map(
        |terms| {
            let mut p = MultiPoly::zero();
            for (mono, c) in terms {
                p.add_term(mono, &BigInt::from(c));
            }
            p
        },
    )
}

/// `d_i(x_i^a x_{i+1}^b)` for `a > b`: `-sum_{k=0}^{a-b-1} x_i^{b+k} x_{i+1}^{a-1-k}`,
/// and the antisymmetric counterpart for `a < b`.
fn monomial_oracle(i: usize, a: u32, b: u32) -> MultiPoly {
    let mono = |p: u32, q: u32| {
        let mut m = vec![0; i + 1];
        m[i - 1] = p;
        m[i] = q;
        m
    };
    let mut out = MultiPoly::zero();
    let (lo, hi, sign) = if a > b { (b, a, -1) } else { (a, b, 1) };
    for k in 0..hi.saturating_sub(lo) {
        let (p, q) = if a > b {
            (lo + k, hi - 1 - k)
        } else {
            (hi - 1 - k, lo + k)
        };
        out.add_term(mono(p, q), &BigInt::from(sign));
    }
    out
}

#[test]
fn demazure_on_monomials_matches_closed_form() {
    for i in 1..=3 {
        for a in 0..=5 {
            for b in 0..=5 {
                let mut m = vec![0; i + 1];
                m[i - 1] = a;
                m[i] = b;
                let f = MultiPoly::term(one(), m);
                assert_eq!(
                    apply_demazure(i, &f).unwrap(),
                    monomial_oracle(i, a, b),
                    "i={i} a={a} b={b}"
                );
            }
        }
    }
}

#[test]
fn published_expression_report() {
    let e = DemazureExpr::builtin(PAPER_GL15).unwrap();
    let r = intersection_vector(&e, 2).unwrap();
    assert_eq!(r.entries.len(), 12);
    assert_eq!((r.rank_over_q, r.rank_over_p), (1, 0));
    assert_eq!(intersection_vector(&e, 3).unwrap().rank_over_p, 1);
    assert!(e.eval().unwrap().is_zero());
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(
        json["entries"],
        serde_json::json!([-2, -2, 0, -2, -2, 0, -2, -2, 0, -2, 0, 0])
    );
}

proptest! {
    #[test]
    fn demazure_squares_to_zero(f in poly(), i in 1usize..=4) {
        let once = apply_demazure(i, &f).unwrap();
        prop_assert!(apply_demazure(i, &once).unwrap().is_zero());
    }

    #[test]
    fn braid_relation(f in poly(), i in 1usize..=3) {
        let d = |j, g: &MultiPoly| apply_demazure(j, g).unwrap();
        prop_assert_eq!(d(i, &d(i + 1, &d(i, &f))), d(i + 1, &d(i, &d(i + 1, &f))));
    }

    #[test]
    fn distant_operators_commute(f in poly()) {
        let d = |j, g: &MultiPoly| apply_demazure(j, g).unwrap();
        prop_assert_eq!(d(1, &d(3, &f)), d(3, &d(1, &f)));
    }

    #[test]
    fn twisted_leibniz(f in poly(), g in poly(), i in 1usize..=4) {
        let d = |h: &MultiPoly| apply_demazure(i, h).unwrap();
        let lhs = d(&f.mul(&g));
        let rhs = d(&f).mul(&g).add(&f.swap_vars(i).mul(&d(&g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lowers_degree_by_two(f in poly(), i in 1usize..=4) {
        let homogeneous_part = {
            let mut p = MultiPoly::zero();
            let top = f.terms().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0);
            for (m, c) in f.terms() {
                if m.iter().sum::<u32>() == top {
                    p.add_term(m.clone(), c);
                }
            }
            p
        };
        let out = apply_demazure(i, &homogeneous_part).unwrap();
        if let (Some(din), Some(dout)) = (homogeneous_part.graded_degree(), out.graded_degree()) {
            prop_assert_eq!(dout, din - 2);
        }
    }

    #[test]
    fn rational_coefficients_agree(f in poly(), i in 1usize..=4) {
        let fq = f.map_coeffs(|c| BigRational::from_integer(c.clone()));
        let via_q = apply_demazure(i, &fq).unwrap();
        let via_z = apply_demazure(i, &f).unwrap().map_coeffs(|c| BigRational::from_integer(c.clone()));
        prop_assert_eq!(via_q, via_z);
    }

    #[test]
    fn display_round_trips(f in poly(), g in poly(), i in 1usize..=4) {
        let e = DemazureExpr::Mul(f, Box::new(DemazureExpr::Op(i, Box::new(DemazureExpr::Const(g)))));
        let text = e.to_string();
        let back = DemazureExpr::parse(&text).unwrap();
        prop_assert_eq!(back.eval().unwrap(), e.eval().unwrap());
    }
}
