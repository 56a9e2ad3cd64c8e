//! The two covariant first-order calculi over the coordinate algebra.
//!
//! Forms carry their algebra coefficients on the left: `Σ_i u_i ξ^i`.
//! Moving `ξ^k` to the right past `x^l` uses
//! `ξ^k x^l = M^{kl}_{ij} x^i ξ^j` with `M = q^{-1}R̂^{-1}` (plain) or
//! `M = qR̂` (barred), the inverted forms of the defining exchange rules.

mod forms;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forms::{OneForm, TensorSquare, TwoForm};

use crate::algebra::{AlgebraElement, AlgebraError, Monomial};
use crate::scalar::{Coefficient, Parity};
use crate::space::Space;
use crate::tensor::SparseTensor4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalculusTag {
    Plain,
    Barred,
}

impl CalculusTag {
    pub const BOTH: [CalculusTag; 2] = [CalculusTag::Plain, CalculusTag::Barred];

    pub fn name(self) -> &'static str {
        match self {
            CalculusTag::Plain => "plain",
            CalculusTag::Barred => "barred",
        }
    }

    /// `+1` for the plain calculus, `-1` for the barred one.
    pub fn sign(self) -> i32 {
        match self {
            CalculusTag::Plain => 1,
            CalculusTag::Barred => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("forms belong to different calculi")]
    TagMismatch,
}

pub struct Calculus<'a, S> {
    space: &'a Space<S>,
    tag: CalculusTag,
    /// `ξ^k x^l = pull^{kl}_{ij} x^i ξ^j`
    pull: SparseTensor4<S>,
    /// `x^i ξ^j = push^{ij}_{kl} ξ^k x^l`
    push: SparseTensor4<S>,
}

impl<'a, S: Coefficient> Calculus<'a, S> {
    pub fn new(space: &'a Space<S>, tag: CalculusTag) -> Self {
        let ctx = space.ctx();
        let core = &space.core;
        let (q, qinv) = (ctx.q(), ctx.q_pow(-1));
        let (pull, push) = match tag {
            CalculusTag::Plain => (core.rhat_inv.scale(&qinv), core.rhat.scale(&q)),
            CalculusTag::Barred => (core.rhat.scale(&q), core.rhat_inv.scale(&qinv)),
        };
        Self { space, tag, pull, push }
    }

    pub fn tag(&self) -> CalculusTag {
        self.tag
    }

    pub fn space(&self) -> &'a Space<S> {
        self.space
    }

    pub fn pull_rule(&self) -> &SparseTensor4<S> {
        &self.pull
    }

    pub fn push_rule(&self) -> &SparseTensor4<S> {
        &self.push
    }

    /// `ξ^i` (or `ξ̄^i`).
    pub fn xi(&self, i: i32) -> OneForm<S> {
        OneForm::basis(self.tag, i)
    }

    /// `q`-exponent of `ξ^j P = q^e P ξ^j` for a prefix `P = Λ^α K^β r_n^{2m}`;
    /// `ξ^j r_n^2 = q^{∓2} r_n^2 ξ^j`.
    fn prefix_exchange(&self, j: i32, prefix: &Monomial) -> i32 {
        let kappa = if self.space.ctx().parity() == Parity::Even && j.abs() == 1 {
            -prefix.kappa() * j.signum()
        } else {
            0
        };
        kappa - self.tag.sign() * prefix.r(self.space.alg.rank())
    }

    /// Splits a monomial into its `Λ K r_n^{2m}` prefix and x word; rejects
    /// other `r` powers and inverse coordinates, which the exchange rules do
    /// not cover.
    fn word(&self, m: &Monomial) -> Result<(Monomial, Vec<i32>), CalculusError> {
        let alg = &self.space.alg;
        let layout = alg.layout();
        let mut prefix = lambda_kappa(m);
        let rank = alg.rank();
        if (1..rank).any(|i| m.r(i) != 0) || m.r(rank) % 2 != 0 {
            return Err(CalculusError::Unsupported("r generators next to a form".into()));
        }
        prefix.set_r(rank, m.r(rank));
        let mut word = Vec::new();
        for &i in self.space.indices() {
            let e = m.x(layout, i);
            if e < 0 {
                return Err(CalculusError::Unsupported(format!("inverse of x({i}) next to a form")));
            }
            word.extend(std::iter::repeat_n(i, e as usize));
        }
        Ok((prefix, word))
    }

    /// `ξ^j · f` with left coefficients.
    pub fn xi_times(&self, j: i32, f: &AlgebraElement<S>) -> Result<OneForm<S>, CalculusError> {
        let alg = &self.space.alg;
        let ctx = self.space.ctx();
        let mut out = OneForm::zero(self.tag);
        for (m, c) in f.terms() {
            let (prefix, word) = self.word(m)?;
            let e = self.prefix_exchange(j, &prefix);
            let start = AlgebraElement::term(prefix, c.mul_ref(&ctx.q_pow(e)));
            let mut state: BTreeMap<i32, AlgebraElement<S>> = BTreeMap::from([(j, start)]);
            for &l in &word {
                let mut next: BTreeMap<i32, AlgebraElement<S>> = BTreeMap::new();
                for (k, coef) in &state {
                    for ((i, jj), v) in self.pull.row(*k, l) {
                        let term = alg.mul(coef, &alg.x(i));
                        next.entry(jj).or_default().add_scaled(&term, v);
                    }
                }
                state = next;
            }
            for (k, coef) in state {
                out.add_component(k, &coef);
            }
        }
        Ok(out)
    }

    /// `f · ξ^j` rewritten as `Σ_k ξ^k g_k`; returns the right coefficients `g_k`.
    pub fn push_coefficient(&self, f: &AlgebraElement<S>, j: i32) -> Result<BTreeMap<i32, AlgebraElement<S>>, CalculusError> {
        let alg = &self.space.alg;
        let ctx = self.space.ctx();
        let mut out: BTreeMap<i32, AlgebraElement<S>> = BTreeMap::new();
        for (m, c) in f.terms() {
            let (prefix, word) = self.word(m)?;
            let mut state: BTreeMap<i32, AlgebraElement<S>> = BTreeMap::from([(j, AlgebraElement::one())]);
            for &l in word.iter().rev() {
                let mut next: BTreeMap<i32, AlgebraElement<S>> = BTreeMap::new();
                for (k, g) in &state {
                    for ((kk, ll), v) in self.push.row(l, *k) {
                        let term = alg.mul(&alg.x(ll), g);
                        next.entry(kk).or_default().add_scaled(&term, v);
                    }
                }
                state = next;
            }
            let p = AlgebraElement::term(prefix, S::one());
            for (k, g) in state {
                // P ξ^k = q^{-e} ξ^k P with e from ξ^k P = q^e P ξ^k
                let e = -self.prefix_exchange(k, &prefix);
                let factor = c.mul_ref(&ctx.q_pow(e));
                out.entry(k).or_default().add_scaled(&alg.mul(&p, &g), &factor);
            }
        }
        out.retain(|_, g| !g.is_empty());
        Ok(out)
    }

    /// `u · f`.
    pub fn right_mul(&self, u: &OneForm<S>, f: &AlgebraElement<S>) -> Result<OneForm<S>, CalculusError> {
        let alg = &self.space.alg;
        let mut out = OneForm::zero(self.tag);
        for (j, c) in u.components() {
            let moved = self.xi_times(*j, f)?;
            for (k, w) in moved.components() {
                out.add_component(*k, &alg.mul(c, w));
            }
        }
        Ok(out)
    }

    /// `f · u`.
    pub fn left_mul(&self, f: &AlgebraElement<S>, u: &OneForm<S>) -> OneForm<S> {
        let alg = &self.space.alg;
        let mut out = OneForm::zero(u.tag());
        for (j, c) in u.components() {
            out.add_component(*j, &alg.mul(f, c));
        }
        out
    }

    /// `[u, f] = u f − f u`.
    pub fn commutator(&self, u: &OneForm<S>, f: &AlgebraElement<S>) -> Result<OneForm<S>, CalculusError> {
        Ok(self.right_mul(u, f)?.sub(&self.left_mul(f, u)))
    }

    /// Exterior derivative on `Λ^α K^β ·` (coordinate polynomials), with
    /// `d(Λ^α K^β u) = q^{-α} Λ^α K^β du` and `d x^i = ξ^i`.
    pub fn d(&self, f: &AlgebraElement<S>) -> Result<OneForm<S>, CalculusError> {
        let alg = &self.space.alg;
        let ctx = self.space.ctx();
        let mut out = OneForm::zero(self.tag);
        for (m, c) in f.terms() {
            let (prefix, word) = self.word(m)?;
            if prefix.has_r(alg.layout()) {
                return Err(CalculusError::Unsupported("d of r generators".into()));
            }
            let coeff = c.mul_ref(&ctx.q_pow(-prefix.lambda()));
            let mut left = AlgebraElement::term(prefix, coeff);
            for (p, &l) in word.iter().enumerate() {
                let rest = alg.x_word(&word[p + 1..]);
                let tail = self.xi_times(l, &rest)?;
                out.add_assign(&self.left_mul(&left, &tail));
                left = alg.mul(&left, &alg.x(l));
            }
        }
        Ok(out)
    }

    /// `Σ u_i ξ^i ⊗ Σ v_j ξ^j` with left coefficients.
    pub fn tensor(&self, u: &OneForm<S>, v: &OneForm<S>) -> Result<TensorSquare<S>, CalculusError> {
        if u.tag() != self.tag || v.tag() != self.tag {
            return Err(CalculusError::TagMismatch);
        }
        let alg = &self.space.alg;
        let mut out = TensorSquare::zero(self.tag);
        for (i, ui) in u.components() {
            for (j, vj) in v.components() {
                let moved = self.xi_times(*i, vj)?;
                for (k, w) in moved.components() {
                    out.add_component((*k, *j), &alg.mul(ui, w));
                }
            }
        }
        Ok(out)
    }

    /// Canonical 2-form representative: `P_a` applied on the form indices.
    pub fn project(&self, t: &TensorSquare<S>) -> TwoForm<S> {
        TwoForm::from_square(project_pa(&self.space.core.pa, t), self.tag)
    }

    pub fn wedge(&self, u: &OneForm<S>, v: &OneForm<S>) -> Result<TwoForm<S>, CalculusError> {
        Ok(self.project(&self.tensor(u, v)?))
    }

    /// `d(Σ u_j ξ^j) = Σ du_j ∧ ξ^j` (coordinate coefficients only).
    pub fn d1(&self, u: &OneForm<S>) -> Result<TwoForm<S>, CalculusError> {
        let mut acc = TensorSquare::zero(self.tag);
        for (j, c) in u.components() {
            acc.add_assign(&self.tensor(&self.d(c)?, &self.xi(*j))?);
        }
        Ok(self.project(&acc))
    }

    /// The Dirac one-form `θ = c r^{-2} g_{ij} x^i ξ^j` with
    /// `c = ω_n q^{N/2} k^{-1}` (plain) or `−ω_n q^{-N/2} k^{-1}` (barred).
    pub fn dirac_theta(&self) -> OneForm<S> {
        let space = self.space;
        let ctx = space.ctx();
        let n = ctx.dim() as i32;
        let alg = &space.alg;
        let kinv = ctx.k().checked_inv().expect("k is invertible");
        let c = ctx.omega(ctx.rank() as i32).mul_ref(&kinv);
        let c = match self.tag {
            CalculusTag::Plain => c.mul_ref(&ctx.s_pow(n)),
            CalculusTag::Barred => -c.mul_ref(&ctx.s_pow(-n)),
        };
        let r2inv = alg.r_pow(ctx.rank() as i32, -2).expect("r_n exists");
        let mut theta = OneForm::zero(self.tag);
        for &j in ctx.indices() {
            let g = space.core.g_lower.get(-j, j);
            let coef = alg.mul(&r2inv, &alg.x(-j)).scale(&g.mul_ref(&c));
            theta.add_component(j, &coef);
        }
        theta
    }

    /// `None` iff `df + [θ, f] = 0`; otherwise a witness.
    pub fn check_d_as_commutator(&self, theta: &OneForm<S>, f: &AlgebraElement<S>) -> Result<Option<String>, CalculusError> {
        let lhs = self.d(f)?.add(&self.commutator(theta, f)?);
        Ok(lhs.residual(&self.space.alg))
    }
}

fn lambda_kappa(m: &Monomial) -> Monomial {
    let mut p = Monomial::one();
    p.set_lambda(m.lambda());
    p.set_kappa(m.kappa());
    p
}

/// `C^{mn} = Σ_{kl} T^{kl} P^{kl}_{mn}`.
pub(crate) fn project_pa<S: Coefficient>(
    pa: &SparseTensor4<S>,
    t: &TensorSquare<S>,
) -> BTreeMap<(i32, i32), AlgebraElement<S>> {
    let mut out: BTreeMap<(i32, i32), AlgebraElement<S>> = BTreeMap::new();
    for ((k, l), c) in t.components() {
        for ((m, n), p) in pa.row(*k, *l) {
            out.entry((m, n)).or_default().add_scaled(c, p);
        }
    }
    out.retain(|_, c| !c.is_empty());
    out
}
