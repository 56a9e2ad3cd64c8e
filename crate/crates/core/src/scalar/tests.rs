use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;

fn gr(n: i64, d: i64) -> GaussRational {
    GaussRational::ratio(n, d)
}

fn ctx(n: usize) -> ScalarContext<QScalar> {
    ScalarContext::exact(n).unwrap()
}

#[test]
fn h_times_s_plus_inverse_is_q_minus_inverse() {
    let c = ctx(3);
    let lhs = c.h().mul_ref(&c.s_pow(1).add_ref(&c.s_pow(-1)));
    assert_eq!(lhs, c.q().sub_ref(&c.q_pow(-1)));
}

#[test]
fn field_inverse_of_h() {
    let c = ctx(3);
    let inv = c.h().inv().unwrap();
    assert!(c.h().mul_ref(&inv).is_one());
}

#[test]
fn gamma0_times_one_minus_q_is_one() {
    let c = ctx(3);
    let gamma0 = -c.s_pow(-1).mul_ref(&c.h().inv().unwrap());
    let one_minus_q = QScalar::one().sub_ref(&c.q());
    assert!(gamma0.mul_ref(&one_minus_q).is_one());
}

#[test]
fn division_by_zero_is_an_error() {
    assert_eq!(QScalar::one().checked_div(&QScalar::zero()), Err(ScalarError::DivisionByZero));
    assert!(QScalar::from_parts(HalfLaurent::one(), HalfLaurent::zero()).is_err());
}

#[test]
fn rho_for_three_and_four_dimensions() {
    let c3 = ctx(3);
    let rho3: Vec<_> = c3.indices().iter().map(|&i| c3.constant("rho", Some(i)).unwrap()).collect();
    assert_eq!(rho3, vec![QScalar::from_gauss(gr(1, 2)), QScalar::zero(), QScalar::from_gauss(gr(-1, 2))]);

    let c4 = ctx(4);
    assert_eq!(c4.indices(), &[-2, -1, 1, 2]);
    let rho4: Vec<_> = c4.indices().iter().map(|&i| c4.constant("rho", Some(i)).unwrap()).collect();
    assert_eq!(
        rho4,
        vec![QScalar::one(), QScalar::zero(), QScalar::zero(), QScalar::from_integer(-1)]
    );
}

#[test]
fn omega_zero_is_two_for_odd_dimensions() {
    for n in [3, 5, 7] {
        assert_eq!(ctx(n).constant("omega", Some(0)).unwrap(), QScalar::from_integer(2));
    }
}

#[test]
fn out_of_range_constant_index() {
    assert!(ctx(4).constant("omega", Some(0)).is_err());
    assert!(ctx(3).constant("rho", Some(2)).is_err());
}

#[test]
fn evaluation_examples() {
    let c = ctx(3);
    assert_eq!(c.h().eval(&gr(2, 1)).unwrap(), gr(3, 2));
    assert_eq!(c.q().eval(&gr(3, 1)).unwrap(), gr(9, 1));
    assert_eq!(c.k().eval(&gr(2, 1)).unwrap(), gr(15, 4));
}

#[test]
fn evaluation_at_a_pole() {
    let c = ctx(3);
    let hinv = c.h().inv().unwrap();
    assert_eq!(hinv.eval(&gr(1, 1)), Err(ScalarError::Pole));
    assert_eq!(hinv.eval(&gr(-1, 1)), Err(ScalarError::Pole));
}

#[test]
fn classical_limits() {
    let c = ctx(3);
    assert!(c.q().sub_ref(&QScalar::one()).classical_limit().unwrap().is_zero());
    assert_eq!(c.omega(1).classical_limit().unwrap(), gr(2, 1));
    let gamma0 = -c.s_pow(-1).mul_ref(&c.h().inv().unwrap());
    assert_eq!(gamma0.classical_limit(), Err(ScalarError::Pole));
}

#[test]
fn canonical_text_form() {
    let c = ctx(3);
    let gamma0 = -c.s_pow(-1).mul_ref(&c.h().inv().unwrap());
    assert_eq!(gamma0.to_string(), "(-1)/(s^2 - 1)");
    assert_eq!(c.h().to_string(), "s - s^-1");
    assert_eq!(QScalar::imag_unit().mul_ref(&c.q()).to_string(), "i*s^2");
}

#[test]
fn rho_antisymmetry_and_omega_symmetry() {
    for n in 3..=8 {
        let c = ctx(n);
        for &i in c.indices() {
            assert_eq!(c.rho2(-i), -c.rho2(i));
            assert_eq!(c.omega(i), c.omega(-i));
        }
    }
}

#[test]
fn k_convention_override() {
    let c = ScalarContext::new(5, QScalar::s(), KConvention::H).unwrap();
    assert_eq!(c.k(), c.h());
}

fn small_gauss() -> impl Strategy<Value = GaussRational> {
    (-4i64..=4, 1i64..=3, -1i64..=1).prop_map(|(n, d, im)| {
        let mut g = GaussRational::ratio(n, d);
        if im != 0 {
            g = g.add_ref(&GaussRational::i().mul_ref(&GaussRational::from_integer(im)));
        }
        g
    })
}

fn laurent() -> impl Strategy<Value = HalfLaurent> {
    prop::collection::vec((-3i32..=3, small_gauss()), 1..4).prop_map(HalfLaurent::from_terms)
}

fn qscalar() -> impl Strategy<Value = QScalar> {
    (laurent(), laurent()).prop_map(|(n, d)| {
        if d.is_zero() {
            QScalar::from_laurent(n)
        } else {
            QScalar::from_parts(n, d).unwrap()
        }
    })
}

fn sample_point() -> impl Strategy<Value = GaussRational> {
    (2i64..=9, 1i64..=7).prop_map(|(n, d)| GaussRational::ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn self_difference_is_structurally_zero(a in qscalar()) {
        prop_assert!(a.sub_ref(&a).is_zero());
        prop_assert_eq!(a.sub_ref(&a), QScalar::zero());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in qscalar(),
        b in qscalar(),
        points in prop::collection::vec(sample_point(), 3),
    ) {
        for p in &points {
            let (Ok(ea), Ok(eb)) = (a.eval(p), b.eval(p)) else { continue };
            prop_assert_eq!(a.add_ref(&b).eval(p).unwrap(), ea.add_ref(&eb));
            prop_assert_eq!(a.sub_ref(&b).eval(p).unwrap(), ea.sub_ref(&eb));
            prop_assert_eq!(a.mul_ref(&b).eval(p).unwrap(), ea.mul_ref(&eb));
            if !b.is_zero() && !eb.is_zero() {
                if let Ok(v) = a.checked_div(&b).unwrap().eval(p) {
                    prop_assert_eq!(v, ea.mul_ref(&eb.inv().unwrap()));
                }
            }
        }
    }

    #[test]
    fn field_axioms(a in qscalar(), b in qscalar(), c in qscalar()) {
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        if !a.is_zero() {
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }
    }
}
