//! Generalized flip `σ`, metric, torsion and curvature of the torsion-free
//! covariant derivative `Dξ = −θ⊗ξ + σ(ξ⊗θ)`.
//!
//! Connection and curvature are computed in the frame basis, where `θ^a`
//! commutes with everything and `σ`, `g` act by constant tensors. The
//! Leibniz rules and metric bilinearity are checked in the `ξ` basis, where
//! they are not automatic.


use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::calculus::{Calculus, CalculusError, CalculusTag, OneForm, TensorSquare};
use crate::frame::FrameData;
use crate::report::{Status, VerificationReport, Witness};
use crate::scalar::Coefficient;
use crate::space::Space;
use crate::tensor::{check_braid, SparseTensor4, TensorCore};

type Elem<S> = AlgebraElement<S>;

/// The two solutions for `σ`: `S = qR̂` or `S = (qR̂)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaBranch {
    #[default]
    Plus,
    Minus,
}

impl SigmaBranch {
    pub const BOTH: [SigmaBranch; 2] = [SigmaBranch::Plus, SigmaBranch::Minus];

    pub fn name(self) -> &'static str {
        match self {
            SigmaBranch::Plus => "plus",
            SigmaBranch::Minus => "minus",
        }
    }
}

pub fn sigma_tensor<S: Coefficient>(core: &TensorCore<S>, branch: SigmaBranch) -> SparseTensor4<S> {
    match branch {
        SigmaBranch::Plus => core.rhat.scale(&core.ctx.q()),
        SigmaBranch::Minus => core.rhat_inv.scale(&core.ctx.q_pow(-1)),
    }
}

fn first_entry<S: Coefficient>(t: &SparseTensor4<S>) -> Option<String> {
    let count = t.len();
    t.iter().next().map(|(k, v)| {
        let more = if count > 1 { format!(" (+{} more)", count - 1) } else { String::new() };
        format!("{k:?}: {v}{more}")
    })
}

/// `π∘(σ+1)`: the `P_a` part of `S + 1`; `None` when it vanishes.
pub fn torsion_residual<S: Coefficient>(core: &TensorCore<S>, s: &SparseTensor4<S>) -> Option<String> {
    let shifted = s.add(&SparseTensor4::identity(&core.ctx));
    first_entry(&shifted.compose(&core.pa))
}

/// The factor `c` in `S^{ae}_{df} g^{fg} S^{cb}_{eg} = c g^{ac} δ^b_d`, or a
/// witness when the contraction is not proportional to `g δ`. The strict
/// compatibility condition is the same contraction (up to naming the free
/// indices) with `c = 1`.
pub fn conformal_factor<S: Coefficient>(core: &TensorCore<S>, s: &SparseTensor4<S>) -> Result<S, String> {
    let idx = core.ctx.indices();
    // L[a, c, b, d]
    let mut lhs: BTreeMap<[i32; 4], S> = BTreeMap::new();
    for (k1, v1) in s.iter() {
        let [a, e, d, f] = k1;
        let g = -f;
        let Some(gfg) = core.g_upper.get_ref(f, g) else { continue };
        let w = v1.mul_ref(gfg);
        for (k2, v2) in s.iter() {
            if k2[2] == e && k2[3] == g {
                lhs.entry([a, k2[0], k2[1], d]).or_insert_with(S::zero).add_assign_ref(&w.mul_ref(v2));
            }
        }
    }
    let mut factor: Option<S> = None;
    for &a in idx {
        for &c in idx {
            for &b in idx {
                for &d in idx {
                    let key = [a, c, b, d];
                    let l = lhs.get(&key).cloned().unwrap_or_else(S::zero);
                    let t = if b == d { core.g_upper.get(a, c) } else { S::zero() };
                    match &factor {
                        None if !t.is_zero() => factor = Some(l.checked_div(&t).ok_or("zero metric entry")?),
                        None if !l.is_zero() => return Err(format!("{key:?}: {l} where the target vanishes")),
                        None => {}
                        Some(c) if l != c.mul_ref(&t) => {
                            return Err(format!("{key:?}: {l} vs {}", c.mul_ref(&t)));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    factor.ok_or_else(|| "empty contraction".to_string())
}

fn suffix<S: Coefficient>(core: &TensorCore<S>, tag: CalculusTag, branch: SigmaBranch) -> String {
    format!("N{}.{}.{}", core.ctx.dim(), tag.name(), branch.name())
}

/// Torsion bilinearity, conformal compatibility and the braid relation for
/// one calculus, both branches.
pub fn verify_sigma<S: Coefficient>(core: &TensorCore<S>, tag: CalculusTag) -> VerificationReport {
    let mut report = VerificationReport::new();
    let q2 = core.ctx.q_pow(2);
    let qm2 = core.ctx.q_pow(-2);
    let mut factors = Vec::new();
    for branch in SigmaBranch::BOTH {
        let sfx = suffix(core, tag, branch);
        let s = sigma_tensor(core, branch);
        report.record(format!("geom.torsion.{sfx}"), torsion_residual(core, &s));
        report.record(format!("geom.braid.{sfx}"), check_braid(&core.ctx, &s));
        match conformal_factor(core, &s) {
            Ok(c) => {
                let status = if c == q2 || c == qm2 { Status::Pass } else { Status::Fail };
                report.push(format!("geom.compat.factor.{sfx}"), status, Some(c.to_string()));
                factors.push(Some(c));
            }
            Err(w) => {
                report.fail(format!("geom.compat.factor.{sfx}"), w);
                factors.push(None);
            }
        }
        // the strict condition (factor 1) must fail for these solutions
        let strict = match factors.last() {
            Some(Some(c)) if *c == S::one() => Some("strict compatibility holds".to_string()),
            Some(Some(_)) => None,
            _ => Some("no factor".to_string()),
        };
        report.record(format!("geom.compat.strict_fails.{sfx}"), strict);
    }
    let recip = match (&factors[0], &factors[1]) {
        (Some(a), Some(b)) if a.mul_ref(b) == S::one() => None,
        (Some(a), Some(b)) => Some(format!("{a} · {b} ≠ 1")),
        _ => Some("factor missing".to_string()),
    };
    report.record(format!("geom.compat.reciprocal.N{}.{}", core.ctx.dim(), tag.name()), recip);
    report
}

/// Frame-basis connection: `Dθ^a = ω^a_{ef} θ^e⊗θ^f` with
/// `ω^a_{ef} = λ_e δ^a_f − λ_b S^{ab}_{ef}`.
pub struct Connection<'a, S> {
    space: &'a Space<S>,
    frame: &'a FrameData<S>,
    s: SparseTensor4<S>,
    omega: BTreeMap<i32, BTreeMap<(i32, i32), Elem<S>>>,
}

impl<'a, S: Coefficient> Connection<'a, S> {
    pub fn new(space: &'a Space<S>, frame: &'a FrameData<S>, s: SparseTensor4<S>) -> Self {
        let mut omega: BTreeMap<i32, BTreeMap<(i32, i32), Elem<S>>> = BTreeMap::new();
        for &a in space.indices() {
            let row = omega.entry(a).or_default();
            for &e in space.indices() {
                row.entry((e, a)).or_default().add_assign(&frame.lambdas[&e]);
            }
            for &b in space.indices() {
                for ((e, f), v) in s.row(a, b) {
                    row.entry((e, f)).or_default().add_scaled(&frame.lambdas[&b].neg(), v);
                }
            }
            row.retain(|_, v| !v.is_empty());
        }
        Self { space, frame, s, omega }
    }

    pub fn omega(&self, a: i32) -> &BTreeMap<(i32, i32), Elem<S>> {
        &self.omega[&a]
    }

    /// `Curv(θ^a)` as coefficients of `θ^mθ^n⊗θ^d`, with the 2-form part in
    /// its `P_a`-canonical form.
    pub fn curvature(&self, a: i32) -> BTreeMap<[i32; 3], Elem<S>> {
        let alg = &self.space.alg;
        let lambdas = &self.frame.lambdas;
        // D₂ applied to ω^a_{cd} θ^c⊗θ^d, as T[b, c, d]
        let mut t: BTreeMap<[i32; 3], Elem<S>> = BTreeMap::new();
        for ((c, d), w) in self.omega(a) {
            for (&b, lam) in lambdas {
                t.entry([b, *c, *d]).or_default().add_assign(&alg.commutator(lam, w));
            }
            for ((e, f), wc) in self.omega(*c) {
                t.entry([*e, *f, *d]).or_default().add_assign(&alg.mul(w, wc));
            }
            for ((e, f), wd) in self.omega(*d) {
                let ww = alg.mul(w, wd);
                for ((g, h), sv) in self.s.row(*c, *e) {
                    t.entry([g, h, *f]).or_default().add_scaled(&ww, sv);
                }
            }
        }
        let mut out: BTreeMap<[i32; 3], Elem<S>> = BTreeMap::new();
        for ([b, c, d], v) in &t {
            for ((m, n), p) in self.space.core.pa.row(*b, *c) {
                out.entry([m, n, *d]).or_default().add_scaled(v, p);
            }
        }
        out.retain(|_, v| !alg.is_zero(v));
        out
    }

    /// First nonzero curvature component over all `a`.
    pub fn curvature_residual(&self) -> Option<String> {
        let alg = &self.space.alg;
        let found: Vec<(i32, [i32; 3], String)> = self
            .space
            .indices()
            .par_iter()
            .filter_map(|&a| self.curvature(a).into_iter().next().map(|(k, v)| (a, k, alg.text(&v))))
            .collect();
        found.into_iter().next().map(|(a, k, v)| format!("a={a} {k:?}: {v}"))
    }
}

/// `Curv(θ^a) = 0` for both branches.
pub fn verify_curvature<S: Coefficient>(space: &Space<S>, frame: &FrameData<S>) -> VerificationReport {
    let mut report = VerificationReport::new();
    for branch in SigmaBranch::BOTH {
        let conn = Connection::new(space, frame, sigma_tensor(&space.core, branch));
        let sfx = suffix(&space.core, frame.tag, branch);
        report.record(format!("geom.curvature.{sfx}"), conn.curvature_residual());
    }
    report
}

/// `σ` and `g` in the `ξ` basis, applied to left-coefficient tensors.
pub struct XiGeometry<'c, 'a, S> {
    calc: &'c Calculus<'a, S>,
    s: SparseTensor4<S>,
    theta: OneForm<S>,
}

impl<'c, 'a, S: Coefficient> XiGeometry<'c, 'a, S> {
    pub fn new(calc: &'c Calculus<'a, S>, branch: SigmaBranch) -> Self {
        let s = sigma_tensor(&calc.space().core, branch);
        Self { calc, s, theta: calc.dirac_theta() }
    }

    /// `σ(ξ^i⊗ξ^j) = S^{ij}_{hk} ξ^h⊗ξ^k`, extended by left linearity.
    pub fn sigma(&self, t: &TensorSquare<S>) -> TensorSquare<S> {
        let mut out = TensorSquare::zero(t.tag());
        for ((i, j), c) in t.components() {
            for ((h, k), v) in self.s.row(*i, *j) {
                out.add_component((h, k), &c.scale(v));
            }
        }
        out
    }

    /// `g(ξ^i⊗ξ^j) = g^{ij} Λ^{±2}`.
    pub fn metric(&self, t: &TensorSquare<S>) -> Elem<S> {
        let space = self.calc.space();
        let lam = space.alg.lambda_pow(2 * self.calc.tag().sign());
        let mut out = Elem::zero();
        for ((i, j), c) in t.components() {
            if let Some(g) = space.core.g_upper.get_ref(*i, *j) {
                out.add_scaled(&space.alg.mul(c, &lam), g);
            }
        }
        out
    }

    /// `t · f`.
    pub fn right_mul(&self, t: &TensorSquare<S>, f: &Elem<S>) -> Result<TensorSquare<S>, CalculusError> {
        let mut out = TensorSquare::zero(t.tag());
        for ((i, j), c) in t.components() {
            let left = self.calc.left_mul(c, &self.calc.xi(*i));
            let right = self.calc.right_mul(&self.calc.xi(*j), f)?;
            out.add_assign(&self.calc.tensor(&left, &right)?);
        }
        Ok(out)
    }

    /// `Du = −θ⊗u + σ(u⊗θ)`.
    pub fn cov_deriv(&self, u: &OneForm<S>) -> Result<TensorSquare<S>, CalculusError> {
        let first = self.calc.tensor(&self.theta, u)?;
        let second = self.sigma(&self.calc.tensor(u, &self.theta)?);
        Ok(second.sub(&first))
    }
}

/// Leibniz rules and right linearity of `σ` and `g` in the `ξ` basis, for
/// coordinate multipliers (left linearity holds by construction, since
/// tensors carry left coefficients).
pub fn verify_xi_basis<S: Coefficient>(space: &Space<S>, tag: CalculusTag, branch: SigmaBranch) -> Result<VerificationReport, CalculusError> {
    let alg = &space.alg;
    let calc = Calculus::new(space, tag);
    let geo = XiGeometry::new(&calc, branch);
    let idx = space.indices();
    let sfx = suffix(&space.core, tag, branch);
    let mut left = Witness::new();
    let mut right = Witness::new();
    let mut g_right = Witness::new();
    let mut sigma_right = Witness::new();
    for &i in idx {
        let xi = calc.xi(i);
        let dxi = geo.cov_deriv(&xi)?;
        for &k in idx {
            let f = alg.x(k);
            let df = calc.d(&f)?;
            // D(f ξ) = df⊗ξ + f Dξ
            let lhs = geo.cov_deriv(&calc.left_mul(&f, &xi))?;
            let mut rhs = calc.tensor(&df, &xi)?;
            for ((a, b), c) in dxi.components() {
                rhs.add_component((*a, *b), &alg.mul(&f, c));
            }
            left.offer_residual(lhs.sub(&rhs).residual(alg), || format!("x({k}) xi({i})"));
            // D(ξ f) = σ(ξ⊗df) + (Dξ) f
            let lhs = geo.cov_deriv(&calc.right_mul(&xi, &f)?)?;
            let rhs = geo.sigma(&calc.tensor(&xi, &df)?).add(&geo.right_mul(&dxi, &f)?);
            right.offer_residual(lhs.sub(&rhs).residual(alg), || format!("xi({i}) x({k})"));
            for &j in idx {
                let xj = calc.xi(j);
                let plain = calc.tensor(&xi, &xj)?;
                // g(u⊗(v f)) = g(u⊗v) f
                let lhs = geo.metric(&calc.tensor(&xi, &calc.right_mul(&xj, &f)?)?);
                let rhs = alg.mul(&geo.metric(&plain), &f);
                g_right.offer_residual(alg.residual(&lhs.sub(&rhs)), || format!("xi({i}) xi({j}) x({k})"));
                // σ(u⊗(v f)) = σ(u⊗v) f
                let lhs = geo.sigma(&calc.tensor(&xi, &calc.right_mul(&xj, &f)?)?);
                let rhs = geo.right_mul(&geo.sigma(&plain), &f)?;
                sigma_right.offer_residual(lhs.sub(&rhs).residual(alg), || format!("xi({i}) xi({j}) x({k})"));
            }
        }
    }
    let mut report = VerificationReport::new();
    report.record(format!("geom.leibniz.left.{sfx}"), left.into_residual());
    report.record(format!("geom.leibniz.right.{sfx}"), right.into_residual());
    report.record(format!("geom.sigma.right.{sfx}"), sigma_right.into_residual());
    report.record(format!("geom.metric.right.{sfx}"), g_right.into_residual());
    Ok(report)
}

/// The frame-basis constants reproduce the `ξ`-basis ones: `σ` by the same
/// `S` (`e^i_a e^j_b S^{ab}_{cd} = S^{ij}_{hk} e^h_c e^k_d`) and
/// `g(θ^a⊗θ^b) = g^{ab}` (`e^i_a e^j_b g^{ab} = g^{ij}Λ^{±2}`).
pub fn verify_frame_constants<S: Coefficient>(space: &Space<S>, frame: &FrameData<S>) -> VerificationReport {
    let mut report = VerificationReport::new();
    for branch in SigmaBranch::BOTH {
        let s = sigma_tensor(&space.core, branch);
        let sfx = suffix(&space.core, frame.tag, branch);
        report.record(format!("geom.sigma.frame.{sfx}"), sigma_frame_residual(space, frame, &s));
    }
    let alg = &space.alg;
    let idx = space.indices();
    let lam = alg.lambda_pow(2 * frame.tag.sign());
    let mut w = Witness::new();
    for &i in idx {
        for &j in idx {
            let mut acc = Elem::zero();
            for &a in idx {
                acc.add_scaled(&alg.mul(frame.e(i, a), frame.e(j, -a)), &space.core.g_upper.get(a, -a));
            }
            let want = lam.scale(&space.core.g_upper.get(i, j));
            w.offer_residual(alg.residual(&acc.sub(&want)), || format!("({i},{j})"));
        }
    }
    report.record(format!("geom.metric.frame.N{}.{}", space.dim(), frame.tag.name()), w.into_residual());
    report
}

fn sigma_frame_residual<S: Coefficient>(space: &Space<S>, frame: &FrameData<S>, s: &SparseTensor4<S>) -> Option<String> {
    let alg = &space.alg;
    let idx = space.indices();
    let cols = s.columns();
    let quads: Vec<[i32; 4]> = idx
        .iter()
        .flat_map(|&i| idx.iter().flat_map(move |&j| idx.iter().flat_map(move |&c| idx.iter().map(move |&d| [i, j, c, d]))))
        .collect();
    let found: Vec<String> = quads
        .par_iter()
        .filter_map(|&[i, j, c, d]| {
            let mut lhs = Elem::zero();
            for ((a, b), v) in cols.get(&(c, d)).into_iter().flatten() {
                lhs.add_scaled(&alg.mul(frame.e(i, *a), frame.e(j, *b)), v);
            }
            let mut rhs = Elem::zero();
            for ((h, k), v) in s.row(i, j) {
                rhs.add_scaled(&alg.mul(frame.e(h, c), frame.e(k, d)), v);
            }
            alg.residual(&lhs.sub(&rhs)).map(|r| format!("{:?}: {r}", [i, j, c, d]))
        })
        .collect();
    found.into_iter().next()
}
