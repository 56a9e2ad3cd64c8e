use super::*;
use num_traits::{One, Zero};

fn core(n: usize) -> TensorCore<QScalar> {
    TensorCore::new(ScalarContext::exact(n).unwrap())
}

fn s(e: i32) -> QScalar {
    QScalar::s_pow(e)
}

fn limit(t: &SparseTensor4<QScalar>) -> SparseTensor4<GaussRational> {
    try_map4(t, |v| v.classical_limit()).unwrap()
}

/// Classical (symmetric-traceless, antisymmetric, trace) projectors for the
/// pairing `δ_{i,-j}`, built directly.
fn classical_projectors(idx: &[i32]) -> [SparseTensor4<GaussRational>; 3] {
    let n = idx.len() as i64;
    let half = GaussRational::ratio(1, 2);
    let inv_n = GaussRational::ratio(1, n);
    let mut ps = SparseTensor4::new();
    let mut pa = SparseTensor4::new();
    let mut pt = SparseTensor4::new();
    for &i in idx {
        for &j in idx {
            ps.add_to([i, j, i, j], &half);
            ps.add_to([i, j, j, i], &half);
            pa.add_to([i, j, i, j], &half);
            pa.add_to([i, j, j, i], &-half.clone());
            if i == -j {
                for &k in idx {
                    pt.add_to([i, j, k, -k], &inv_n);
                    ps.add_to([i, j, k, -k], &-inv_n.clone());
                }
            }
        }
    }
    [ps, pa, pt]
}

fn dense_inverse(mut m: Vec<Vec<QScalar>>) -> Vec<Vec<QScalar>> {
    let n = m.len();
    let mut inv: Vec<Vec<QScalar>> =
        (0..n).map(|r| (0..n).map(|c| if r == c { QScalar::one() } else { QScalar::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("singular");
        m.swap(c, p);
        inv.swap(c, p);
        let pivot = m[c][c].inv().unwrap();
        for cc in 0..n {
            m[c][cc] = m[c][cc].mul_ref(&pivot);
            inv[c][cc] = inv[c][cc].mul_ref(&pivot);
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for cc in 0..n {
                    m[r][cc] = m[r][cc].sub_ref(&f.mul_ref(&m[c][cc]));
                    inv[r][cc] = inv[r][cc].sub_ref(&f.mul_ref(&inv[c][cc]));
                }
            }
        }
    }
    inv
}

#[test]
fn metric_n3() {
    let c = core(3);
    assert_eq!(c.g_lower.get(-1, 1), s(-1));
    assert_eq!(c.g_lower.get(0, 0), QScalar::one());
    assert_eq!(c.g_lower.get(1, -1), s(1));
    assert_eq!(c.g_lower.len(), 3);
    assert_eq!(c.g_upper.len(), 3);
}

#[test]
fn metric_n4() {
    // g_ij = q^{-ρ_i} with ρ_{-2} = 1
    let c = core(4);
    assert_eq!(c.g_lower.get(-2, 2), s(-2));
    assert_eq!(c.g_lower.get(-1, 1), QScalar::one());
    assert_eq!(c.g_lower.get(1, -1), QScalar::one());
    assert_eq!(c.g_lower.get(2, -2), QScalar::q());
}

#[test]
fn metric_inverse_and_classical_limit() {
    for n in 3..=6 {
        let c = core(n);
        for &i in c.ctx.indices() {
            for &j in c.ctx.indices() {
                let mut acc = QScalar::zero();
                for &l in c.ctx.indices() {
                    acc = acc.add_ref(&c.g_lower.get(i, l).mul_ref(&c.g_upper.get(l, j)));
                }
                let delta = if i == j { QScalar::one() } else { QScalar::zero() };
                assert_eq!(acc, delta);
                let lim = c.g_lower.get(i, j).classical_limit().unwrap();
                let want = if i == -j { 1 } else { 0 };
                assert_eq!(lim, GaussRational::from_integer(want));
            }
        }
    }
}

#[test]
fn trace_normalizer_n3() {
    assert_eq!(core(3).trace_normalizer(), s(-2).add_ref(&QScalar::one()).add_ref(&s(2)));
}

#[test]
fn rhat_and_inverse_become_flip() {
    for n in 3..=5 {
        let c = core(n);
        let flip = SparseTensor4::flip(&c.ctx.map(|_| GaussRational::one()));
        assert_eq!(limit(&c.rhat), flip);
        assert_eq!(limit(&c.rhat_inv), flip);
    }
}

#[test]
fn ps_pa_orthogonal() {
    let c = core(3);
    assert!(c.ps.compose(&c.pa).is_empty());
}

#[test]
fn spectral_inverse_matches_linear_solve() {
    let c = core(3);
    let idx = c.ctx.indices().to_vec();
    let direct = dense_inverse(c.rhat.to_dense(&idx));
    assert_eq!(c.rhat_inv.to_dense(&idx), direct);
}

#[test]
fn rmatrix_checks_pass() {
    for n in 3..=6 {
        let report = verify_rmatrix(&core(n));
        assert!(report.all_pass(), "N={n}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn perturbed_rhat_fails_gtt() {
    let ctx = ScalarContext::exact(3).unwrap();
    let mut rhat = build_rhat(&ctx);
    let old = rhat.get(1, 1, 1, 1);
    rhat.insert([1, 1, 1, 1], old.add_ref(&QScalar::one()));
    let bad = TensorCore::with_rhat(ctx.clone(), rhat);
    let report = check_gtt(&bad);
    assert!(!report.all_pass());
    assert!(report.failures().all(|f| f.residual.is_some()));
    assert!(check_braid(&ctx, &bad.rhat).is_some());
}

#[test]
fn classical_ranks_match_direct_projectors() {
    for n in 3..=6 {
        let c = core(n);
        let [ps, pa, pt] = classical_projectors(c.ctx.indices());
        assert_eq!(limit(&c.ps), ps, "P_s N={n}");
        assert_eq!(limit(&c.pa), pa, "P_a N={n}");
        assert_eq!(limit(&c.pt), pt, "P_t N={n}");
        let idx = c.ctx.indices();
        let expect = (dense_rank(ps.to_dense(idx)), dense_rank(pa.to_dense(idx)), dense_rank(pt.to_dense(idx)));
        assert_eq!(classical_ranks(&c).unwrap(), expect);
        assert_eq!(expect, (n * (n + 1) / 2 - 1, n * (n - 1) / 2, 1));
    }
}

#[test]
fn sampled_mode_agrees() {
    for n in [3, 4] {
        let c = core(n);
        let exact = verify_rmatrix(&c);
        for p in [GaussRational::ratio(2, 1), GaussRational::ratio(-3, 5), GaussRational::ratio(7, 3)] {
            let sampled = verify_rmatrix(&c.evaluate(&p).unwrap());
            let a: Vec<_> = exact.checks.iter().map(|x| (&x.check_id, x.status)).collect();
            let b: Vec<_> = sampled.checks.iter().map(|x| (&x.check_id, x.status)).collect();
            assert_eq!(a, b);
        }
    }
}
