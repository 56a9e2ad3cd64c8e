use proptest::prelude::*;

use super::*;
use crate::scalar::{GaussRational, QScalar};
use crate::tensor::TensorCore;

fn exact(n: usize) -> Algebra<QScalar> {
    Algebra::new(ScalarContext::exact(n).unwrap())
}

fn pa_relation(alg: &Algebra<QScalar>, core: &TensorCore<QScalar>, i: i32, j: i32) -> AlgebraElement<QScalar> {
    let mut out = AlgebraElement::zero();
    for ((k, l), c) in core.pa.row(i, j) {
        out.add_scaled(&alg.mul(&alg.x(k), &alg.x(l)), c);
    }
    out
}

#[test]
fn x1_xm1_rewrite_odd() {
    let alg = exact(3);
    let ctx = alg.context();
    let lhs = alg.mul(&alg.x(1), &alg.x(-1));
    let expected = alg.mul(&alg.x(-1), &alg.x(1)).add(&alg.x_pow(0, 2).unwrap().scale(ctx.h()));
    assert_eq!(lhs, expected);
    assert_eq!(alg.text(&lhs), "(s - s^-1)*x(0)^2 + x(-1)*x(1)");
}

#[test]
fn x_lambda_and_kappa() {
    let alg = exact(3);
    let lhs = alg.mul(&alg.x(0), &alg.lambda_pow(1));
    let rhs = alg.mul(&alg.lambda_pow(1), &alg.x(0)).scale(&QScalar::q());
    assert_eq!(lhs, rhs);
    assert_eq!(alg.text(&lhs), "(s^2)*L*x(0)");

    let alg = exact(4);
    let k = alg.kappa_pow(1).unwrap();
    let lhs = alg.mul(&k, &alg.x(1));
    let rhs = alg.mul(&alg.x(1), &k).scale(&QScalar::q());
    assert_eq!(lhs, rhs);
    assert!(alg.commutator(&k, &alg.x(2)).is_empty());
    assert!(alg.commutator(&k, &alg.lambda_pow(1)).is_empty());
    assert_eq!(exact(3).kappa_pow(1), Err(AlgebraError::NoKappa));
}

#[test]
fn simple_commutators() {
    let alg = exact(3);
    assert!(alg.commutator(&alg.x(1), &alg.x(1)).is_empty());
    let alg = exact(4);
    assert!(alg.commutator(&alg.x(1), &alg.x(-1)).is_empty());
    assert!(!alg.commutator(&alg.x(2), &alg.x(-2)).is_empty());
}

#[test]
fn lambda0_commutator_oracle() {
    let alg = exact(3);
    let ctx = alg.context();
    let h = ctx.h().clone();
    let gamma0 = -QScalar::s_pow(-1).mul_ref(&h.inv().unwrap());
    let lambda0 = alg.mul(&alg.lambda_pow(1), &alg.x_pow(0, -1).unwrap()).scale(&gamma0);
    let e00 = alg.commutator(&lambda0, &alg.x(0));
    assert_eq!(e00, alg.lambda_pow(1));
}

#[test]
fn zero_test_examples() {
    let alg = exact(3);
    let core = TensorCore::new(alg.context().clone());
    let mut r2 = AlgebraElement::zero();
    for k in -1..=1 {
        for l in -1..=1 {
            let g = core.g_lower.get(k, l);
            r2.add_scaled(&alg.mul(&alg.x(k), &alg.x(l)), &g);
        }
    }
    let u = alg.r_pow(1, 2).unwrap().sub(&r2);
    assert!(!u.is_empty());
    assert!(alg.is_zero(&u));

    let v = alg.mul(&alg.x(1), &alg.x(-1)).sub(&alg.mul(&alg.x(-1), &alg.x(1)));
    assert!(!alg.is_zero(&v));

    let w = alg.mul(&alg.lambda_pow(1), &alg.lambda_pow(-1)).sub(&alg.one());
    assert!(alg.is_zero(&w));

    // r_1^{-1} r_1^2 − r_1 and a split-parity variant
    let r1 = alg.r_pow(1, 1).unwrap();
    let a = alg.mul(&alg.r_pow(1, -1).unwrap(), &r2).sub(&r1);
    assert!(alg.is_zero(&a));
    let b = alg.mul(&alg.r_pow(1, -2).unwrap(), &r2).sub(&alg.one());
    assert!(alg.is_zero(&b));
    let c = b.add(&r1);
    assert!(!alg.is_zero(&c));
}

#[test]
fn scale_check_examples() {
    let alg = exact(5);
    let u = alg.scale_check(&alg.x(2), 1, 1).unwrap();
    let expected = alg.mul(&alg.r_pow(1, 1).unwrap(), &alg.x(2)).scale(&QScalar::q().inv().unwrap());
    assert_eq!(u, expected);

    let alg3 = exact(3);
    let u = alg3.scale_check(&alg3.x(0), 1, 1).unwrap();
    assert_eq!(u, alg3.mul(&alg3.r_pow(1, 1).unwrap(), &alg3.x(0)));

    for n in 3..=6 {
        let alg = exact(n);
        let r = alg.r_pow(alg.rank() as i32, 1).unwrap();
        for &j in alg.context().indices() {
            assert!(alg.commutator(&alg.x(j), &r).is_empty(), "N={n} j={j}");
        }
    }
}

#[test]
fn r_squared_is_central_at_top() {
    for n in 3..=6 {
        let alg = exact(n);
        let r2 = alg.r_squared(alg.rank()).clone();
        for &j in alg.context().indices() {
            let c = alg.commutator(&alg.x(j), &r2);
            assert!(c.is_empty(), "N={n} j={j}: {}", alg.text(&c));
        }
    }
}

#[test]
fn r_squared_scales_like_r_squared() {
    // x^j r_i² = q^{±2} r_i² x^j outside the window, consistent with the r rules.
    for n in 3..=6 {
        let alg = exact(n);
        for i in 1..=alg.rank() {
            let r2 = alg.r_squared(i).clone();
            for &j in alg.context().indices() {
                let lhs = alg.mul(&alg.x(j), &r2);
                let via_r = alg.mul(&alg.x(j), &alg.r_pow(i as i32, 2).unwrap());
                let r_then = alg.zero_test_form(&via_r);
                assert_eq!(lhs, r_then, "N={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn pa_relations_hold() {
    for n in 3..=6 {
        let alg = exact(n);
        let core = TensorCore::new(alg.context().clone());
        for &i in alg.context().indices() {
            for &j in alg.context().indices() {
                let rel = pa_relation(&alg, &core, i, j);
                assert!(alg.is_zero(&rel), "N={n} ({i},{j}): {}", alg.text(&rel));
            }
        }
    }
}

#[test]
fn pa_relations_fail_with_h_in_place_of_k() {
    let ctx = ScalarContext::new(5, QScalar::s(), crate::KConvention::H).unwrap();
    let alg = Algebra::new(ctx.clone());
    let core = TensorCore::new(ScalarContext::exact(5).unwrap());
    let bad = ctx
        .indices()
        .iter()
        .flat_map(|&i| ctx.indices().iter().map(move |&j| (i, j)))
        .any(|(i, j)| !alg.is_zero(&pa_relation(&alg, &core, i, j)));
    assert!(bad);
}

#[test]
fn classical_limit_is_commutative() {
    for n in 3..=5 {
        let alg = exact(n);
        let idx = alg.context().indices().to_vec();
        for &i in &idx {
            for &j in &idx {
                let c = alg.commutator(&alg.x(i), &alg.x(j));
                for (_, v) in c.terms() {
                    assert_eq!(v.classical_limit().unwrap(), GaussRational::from_integer(0));
                }
            }
        }
    }
}

#[test]
fn sampled_tables_match_exact() {
    let point = GaussRational::ratio(3, 2);
    for n in 3..=6 {
        let alg = exact(n);
        let sampled = Algebra::new(ScalarContext::sampled(n, point.clone()).unwrap());
        for t in 1..=alg.rank() {
            let e = alg.commutator_table(t).map(|c| c.eval(&point).unwrap());
            assert_eq!(&e, sampled.commutator_table(t));
        }
    }
}

#[test]
fn invalid_generators() {
    let alg = exact(4);
    assert!(alg.x_pow(0, 1).is_err());
    assert_eq!(alg.x_pow(2, -1), Err(AlgebraError::NotInvertible(2)));
    assert!(alg.x_pow(1, -1).is_ok());
    assert!(alg.r_pow(3, 1).is_err());
    let alg = exact(3);
    assert_eq!(alg.r_pow(0, -1).unwrap(), alg.x_pow(0, -1).unwrap());
}

fn random_monomial(alg: &Algebra<QScalar>, picks: &[(u8, i8)]) -> AlgebraElement<QScalar> {
    let idx = alg.context().indices();
    let mut acc = alg.one();
    for &(slot, e) in picks {
        let f = match slot % 4 {
            0 => alg.lambda_pow((e % 2) as i32),
            1 => alg.r_pow(1 + (e.unsigned_abs() as i32 % alg.rank() as i32), if e < 0 { -1 } else { 1 }).unwrap(),
            2 if !alg.context().is_odd() => alg.kappa_pow((e % 2) as i32).unwrap(),
            _ => alg.x(idx[e.unsigned_abs() as usize % idx.len()]),
        };
        acc = alg.mul(&acc, &f);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity(
        n in 3usize..=5,
        a in prop::collection::vec((0u8..4, -6i8..6), 1..4),
        b in prop::collection::vec((0u8..4, -6i8..6), 1..4),
        c in prop::collection::vec((0u8..4, -6i8..6), 1..4),
    ) {
        let alg = exact(n);
        let (u, v, w) = (random_monomial(&alg, &a), random_monomial(&alg, &b), random_monomial(&alg, &c));
        let left = alg.mul(&alg.mul(&u, &v), &w);
        let right = alg.mul(&u, &alg.mul(&v, &w));
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn zero_test_sound_on_sandwiched_relations(
        a in prop::collection::vec((0u8..4, -6i8..6), 0..3),
        b in prop::collection::vec((0u8..4, -6i8..6), 0..3),
        i in 1i32..=2,
    ) {
        let alg = exact(5);
        let rel = alg.r_pow(i, 2).unwrap().sub(alg.r_squared(i as usize));
        prop_assert!(!rel.is_empty());
        let u = alg.mul(&alg.mul(&random_monomial(&alg, &a), &rel), &random_monomial(&alg, &b));
        prop_assert!(alg.is_zero(&u));
    }

    #[test]
    fn zero_test_complete_on_distinct_monomials(
        terms in prop::collection::btree_set(prop::collection::vec(0i16..3, 5), 1..5),
        coeffs in prop::collection::vec(1i64..5, 5),
    ) {
        let alg = exact(5);
        let mut u = AlgebraElement::zero();
        for (t, c) in terms.iter().zip(coeffs.iter()) {
            let mut m = Monomial::one();
            for (p, &e) in t.iter().enumerate() {
                m.add_x_at(alg.layout(), p, e as i32);
            }
            u.add_term(m, QScalar::from_integer(*c));
        }
        prop_assert!(!alg.is_zero(&u));
    }
}
