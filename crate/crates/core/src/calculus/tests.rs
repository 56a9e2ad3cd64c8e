use super::*;
use crate::scalar::{GaussRational, QScalar};

fn space(n: usize) -> Space<QScalar> {
    Space::exact(n).unwrap()
}

#[test]
fn push_trivial_and_lambda() {
    let sp = space(3);
    for tag in CalculusTag::BOTH {
        let calc = Calculus::new(&sp, tag);
        let one = calc.push_coefficient(&sp.alg.one(), 1).unwrap();
        assert_eq!(one, BTreeMap::from([(1, sp.alg.one())]));
        let l = sp.alg.lambda_pow(1);
        assert_eq!(calc.push_coefficient(&l, 0).unwrap(), BTreeMap::from([(0, l.clone())]));
        assert_eq!(calc.xi_times(-1, &l).unwrap(), calc.left_mul(&l, &calc.xi(-1)));
    }
}

#[test]
fn push_coordinate_matches_rule() {
    let sp = space(3);
    let calc = Calculus::new(&sp, CalculusTag::Plain);
    let q = QScalar::q();
    for &i in sp.indices() {
        for &j in sp.indices() {
            let got = calc.push_coefficient(&sp.alg.x(i), j).unwrap();
            let mut want: BTreeMap<i32, AlgebraElement<QScalar>> = BTreeMap::new();
            for ((k, l), v) in sp.core.rhat.row(i, j) {
                want.entry(k).or_default().add_scaled(&sp.alg.x(l), &v.mul_ref(&q));
            }
            want.retain(|_, c| !c.is_empty());
            assert_eq!(got, want, "x({i}) xi({j})");
        }
    }
}

#[test]
fn push_then_pull_round_trip() {
    for n in [3, 4] {
        let sp = space(n);
        let alg = &sp.alg;
        let samples = [
            alg.x(1),
            alg.mul(&alg.x(-1), &alg.x(2 - (n as i32 % 2))),
            alg.mul(&alg.lambda_pow(-1), &alg.x(-1)),
        ];
        for tag in CalculusTag::BOTH {
            let calc = Calculus::new(&sp, tag);
            for f in &samples {
                for &j in sp.indices() {
                    let right = calc.push_coefficient(f, j).unwrap();
                    let mut back = OneForm::zero(tag);
                    for (k, g) in &right {
                        back.add_assign(&calc.xi_times(*k, g).unwrap());
                    }
                    let want = calc.left_mul(f, &calc.xi(j));
                    assert!(back.sub(&want).is_zero(alg), "N={n} {tag:?} j={j}");
                }
            }
        }
    }
}

#[test]
fn kappa_exchange() {
    let sp = space(4);
    let calc = Calculus::new(&sp, CalculusTag::Plain);
    let k = sp.alg.kappa_pow(1).unwrap();
    // K ξ^1 = q ξ^1 K
    let pushed = calc.push_coefficient(&k, 1).unwrap();
    assert_eq!(pushed, BTreeMap::from([(1, k.scale(&QScalar::q()))]));
    let pushed = calc.push_coefficient(&k, 2).unwrap();
    assert_eq!(pushed, BTreeMap::from([(2, k.clone())]));
    assert!(calc.d(&k).unwrap().is_empty());
}

#[test]
fn push_is_a_module_action() {
    let sp = space(3);
    let alg = &sp.alg;
    let calc = Calculus::new(&sp, CalculusTag::Barred);
    let (f, g) = (alg.x(1), alg.x(-1));
    for &j in sp.indices() {
        let direct = calc.push_coefficient(&alg.mul(&f, &g), j).unwrap();
        let mut staged: BTreeMap<i32, AlgebraElement<QScalar>> = BTreeMap::new();
        for (k, h) in calc.push_coefficient(&g, j).unwrap() {
            for (m, w) in calc.push_coefficient(&f, k).unwrap() {
                staged.entry(m).or_default().add_assign(&alg.mul(&w, &h));
            }
        }
        staged.retain(|_, c| !c.is_empty());
        assert_eq!(direct, staged);
    }
}

#[test]
fn exterior_derivative_basics() {
    let sp = space(3);
    let alg = &sp.alg;
    for tag in CalculusTag::BOTH {
        let calc = Calculus::new(&sp, tag);
        for &i in sp.indices() {
            assert_eq!(calc.d(&alg.x(i)).unwrap(), calc.xi(i));
        }
        assert!(calc.d(&alg.one()).unwrap().is_empty());
        let x1 = alg.x(1);
        let leibniz = calc.xi_times(1, &x1).unwrap().add(&calc.left_mul(&x1, &calc.xi(1)));
        assert_eq!(calc.d(&alg.mul(&x1, &x1)).unwrap(), leibniz);
        let lx = alg.mul(&alg.lambda_pow(1), &x1);
        let want = calc.left_mul(&alg.lambda_pow(1), &calc.xi(1)).scale(&QScalar::s_pow(-2));
        assert_eq!(calc.d(&lx).unwrap(), want);
        assert!(matches!(calc.d(&alg.r_pow(1, -1).unwrap()), Err(CalculusError::Unsupported(_))));
    }
}

#[test]
fn rule_tables_are_exchanged() {
    let sp = space(4);
    let plain = Calculus::new(&sp, CalculusTag::Plain);
    let barred = Calculus::new(&sp, CalculusTag::Barred);
    assert_eq!(plain.pull_rule(), barred.push_rule());
    assert_eq!(plain.push_rule(), barred.pull_rule());
}

#[test]
fn dirac_generates_d() {
    for n in [3, 4] {
        let sp = space(n);
        let alg = &sp.alg;
        for tag in CalculusTag::BOTH {
            let calc = Calculus::new(&sp, tag);
            let theta = calc.dirac_theta();
            for &i in sp.indices() {
                let xi = calc.commutator(&theta, &alg.x(i)).unwrap().scale(&-QScalar::from_integer(1));
                assert!(xi.sub(&calc.xi(i)).is_zero(alg), "N={n} {tag:?} i={i}");
            }
            if n == 3 {
                for &i in sp.indices() {
                    for &j in sp.indices() {
                        let f = alg.mul(&alg.x(i), &alg.x(j));
                        assert_eq!(calc.check_d_as_commutator(&theta, &f).unwrap(), None);
                    }
                }
                assert_eq!(calc.check_d_as_commutator(&theta, &alg.one()).unwrap(), None);
            }
        }
    }
}

#[test]
fn wedge_is_antisymmetric_projection() {
    let sp = space(3);
    let calc = Calculus::new(&sp, CalculusTag::Plain);
    let mut u = OneForm::zero(CalculusTag::Plain);
    for &i in sp.indices() {
        u.add_assign(&calc.xi(i));
    }
    let w = calc.wedge(&u, &u).unwrap();
    let sq = calc.tensor(&u, &u).unwrap();
    for kind in [&sp.core.ps, &sp.core.pt] {
        let mut t = TensorSquare::zero(CalculusTag::Plain);
        for (k, c) in w.components() {
            t.add_component(*k, c);
        }
        assert!(project_pa(kind, &t).is_empty());
    }
    assert_eq!(project_pa(&sp.core.pa, &sq), project_pa(&sp.core.pa, &{
        let mut t = TensorSquare::zero(CalculusTag::Plain);
        for (k, c) in w.components() {
            t.add_component(*k, c);
        }
        t
    }));
    // classical limit: ξ^1 ∧ ξ^1 vanishes, ξ^1 ∧ ξ^0 antisymmetrizes
    let e = calc.wedge(&calc.xi(1), &calc.xi(0)).unwrap();
    let lim = |k| e.component(k).as_scalar().unwrap().classical_limit().unwrap();
    assert_eq!(lim((1, 0)), GaussRational::ratio(1, 2));
    assert_eq!(lim((0, 1)), GaussRational::ratio(-1, 2));
    let e = calc.wedge(&calc.xi(1), &calc.xi(1)).unwrap();
    assert!(e.is_empty());
}

#[test]
fn d_squared_vanishes() {
    let sp = space(3);
    let alg = &sp.alg;
    for tag in CalculusTag::BOTH {
        let calc = Calculus::new(&sp, tag);
        for &i in sp.indices() {
            for &j in sp.indices() {
                let f = alg.mul(&alg.x(i), &alg.x(j));
                assert!(calc.d1(&calc.d(&f).unwrap()).unwrap().is_zero(alg), "{tag:?} ({i},{j})");
            }
        }
        let f = alg.x_word(&[1, 0, -1]);
        assert!(calc.d1(&calc.d(&f).unwrap()).unwrap().is_zero(alg));
    }
}

#[test]
fn radius_exchange() {
    // ξ^j r^2 = q^{-2} r^2 ξ^j (plain), q^2 (barred); agrees with the table-driven rule
    for n in [3, 4, 5] {
        let space = Space::exact(n).unwrap();
        let rank = space.ctx().rank();
        for tag in CalculusTag::BOTH {
            let calc = Calculus::new(&space, tag);
            let r2 = space.alg.r_squared(rank).clone();
            let r2gen = space.alg.r_pow(rank as i32, 2).unwrap();
            let rinv = space.alg.r_pow(rank as i32, -2).unwrap();
            let f = space.ctx().q_pow(-2 * tag.sign());
            for &j in space.indices() {
                let want = calc.left_mul(&r2.scale(&f), &calc.xi(j));
                assert!(calc.xi_times(j, &r2).unwrap().sub(&want).is_zero(&space.alg));
                let want = calc.left_mul(&r2gen.scale(&f), &calc.xi(j));
                assert!(calc.xi_times(j, &r2gen).unwrap().sub(&want).is_zero(&space.alg));
                let back = calc.xi_times(j, &rinv).unwrap();
                let round = calc.right_mul(&back, &r2gen).unwrap();
                assert!(round.sub(&calc.xi(j)).is_zero(&space.alg));
            }
            assert!(calc.xi_times(1, &space.alg.r_pow(rank as i32, 1).unwrap()).is_err());
        }
    }
}
