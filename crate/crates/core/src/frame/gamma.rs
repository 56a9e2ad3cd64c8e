use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FrameError;
use crate::calculus::CalculusTag;
use crate::scalar::{Coefficient, GaussRational, QScalar, Radical, ScalarContext};

/// How the free ratio `γ_a / γ_{-a}` is fixed once the product is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaChoice {
    /// `γ_{-a} = q γ_a`; needs square roots of `ω_a ω_{a-1}` for `a > 1`.
    #[default]
    RatioQ,
    /// A split of the product that stays inside the rational-function field.
    Rational,
}

/// Overall sign of the pairs `(γ_a, γ_{-a})`, `a ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaBranch {
    #[default]
    Plus,
    Minus,
}

/// Reading of the ratio condition in the gluing constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueReading {
    /// `γ_{-a} = q γ_a` for every `a ≥ 1`.
    #[default]
    Consistent,
    /// `γ_1 = q γ_{-1}` taken literally for `a = 1`.
    Literal,
}

pub type Gamma = Radical<QScalar>;

#[derive(Debug, Clone)]
pub struct GammaAssignment<S> {
    pub tag: CalculusTag,
    pub branch: GammaBranch,
    pub values: BTreeMap<i32, S>,
}

impl<S: Coefficient> GammaAssignment<S> {
    pub fn get(&self, a: i32) -> &S {
        &self.values[&a]
    }

    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> GammaAssignment<T> {
        GammaAssignment { tag: self.tag, branch: self.branch, values: self.values.iter().map(|(a, v)| (*a, f(v))).collect() }
    }

    pub fn try_map<T: Coefficient, E>(&self, f: impl Fn(&S) -> Result<T, E>) -> Result<GammaAssignment<T>, E> {
        let mut values = BTreeMap::new();
        for (a, v) in &self.values {
            values.insert(*a, f(v)?);
        }
        Ok(GammaAssignment { tag: self.tag, branch: self.branch, values })
    }
}

impl<F: Coefficient> GammaAssignment<Radical<F>> {
    /// The assignment in the base field, if no square root was needed.
    pub fn to_base(&self) -> Option<GammaAssignment<F>> {
        self.try_map(|v| v.as_base().ok_or(())).ok()
    }

    pub fn needs_radicals(&self) -> bool {
        self.values.values().any(|v| v.as_base().is_none())
    }
}

/// Radicands `ω_a ω_{a-1}` for `a = 2..=n`, stored at `a − 2`.
pub fn radicands(ctx: &ScalarContext<QScalar>) -> Arc<Vec<QScalar>> {
    let n = ctx.rank() as i32;
    Arc::new((2..=n).map(|a| ctx.omega(a).mul_ref(&ctx.omega(a - 1))).collect())
}

/// `γ_a γ_{-a}` required for the plain (`sign = 1`) or barred (`-1`) calculus.
pub fn gamma_product(ctx: &ScalarContext<QScalar>, tag: CalculusTag, a: i32) -> QScalar {
    let q = ctx.q_pow(-tag.sign());
    let h2 = ctx.h().mul_ref(ctx.h()).inv().expect("h ≠ 0");
    let k2 = ctx.k().mul_ref(ctx.k()).inv().expect("k ≠ 0");
    match (a, ctx.is_odd()) {
        (1, true) => -q.mul_ref(&h2),
        (1, false) => k2,
        _ => -q.mul_ref(&k2).mul_ref(&ctx.omega(a)).mul_ref(&ctx.omega(a - 1)),
    }
}

/// `γ_0` for odd `N`: `−q^{-1/2}h^{-1}` (plain), `q^{1/2}h^{-1}` (barred).
pub fn gamma_zero(ctx: &ScalarContext<QScalar>, tag: CalculusTag) -> QScalar {
    let hinv = ctx.h().inv().expect("h ≠ 0");
    match tag {
        CalculusTag::Plain => -ctx.s_pow(-1).mul_ref(&hinv),
        CalculusTag::Barred => ctx.s_pow(1).mul_ref(&hinv),
    }
}

pub fn build_gammas(
    ctx: &ScalarContext<QScalar>,
    tag: CalculusTag,
    choice: GammaChoice,
    branch: GammaBranch,
) -> GammaAssignment<Gamma> {
    let rads = radicands(ctx);
    let sign = match branch {
        GammaBranch::Plus => QScalar::from_integer(1),
        GammaBranch::Minus => QScalar::from_integer(-1),
    };
    let i = QScalar::from_gauss(GaussRational::i());
    let mut values = BTreeMap::new();
    if ctx.is_odd() {
        values.insert(0, Gamma::base(gamma_zero(ctx, tag)));
    }
    let q = ctx.q();
    let kinv = ctx.k().inv().expect("k ≠ 0");
    for a in 1..=ctx.rank() as i32 {
        let (plus, minus) = match (choice, a) {
            (_, 1) => {
                let g = match (ctx.is_odd(), choice, tag) {
                    (true, _, CalculusTag::Plain) => i.mul_ref(&ctx.q_pow(-1)).mul_ref(&ctx.h().inv().expect("h ≠ 0")),
                    (true, _, CalculusTag::Barred) => i.mul_ref(&ctx.h().inv().expect("h ≠ 0")),
                    (false, GammaChoice::RatioQ, _) => ctx.s_pow(-1).mul_ref(&kinv),
                    (false, GammaChoice::Rational, _) => kinv.clone(),
                };
                let other = gamma_product(ctx, tag, 1).mul_ref(&g.inv().expect("γ ≠ 0"));
                (Gamma::base(g), Gamma::base(other))
            }
            (GammaChoice::RatioQ, _) => {
                let scale = match tag {
                    CalculusTag::Plain => i.mul_ref(&ctx.q_pow(-1)).mul_ref(&kinv),
                    CalculusTag::Barred => i.mul_ref(&kinv),
                };
                let root = Gamma::root((a - 2) as usize, rads.clone());
                let g = root.mul_ref(&Gamma::base(scale));
                let other = g.mul_ref(&Gamma::base(q.clone()));
                (g, other)
            }
            (GammaChoice::Rational, _) => {
                let g = match tag {
                    CalculusTag::Plain => -ctx.q_pow(-1).mul_ref(&kinv).mul_ref(&ctx.omega(a)),
                    CalculusTag::Barred => -kinv.mul_ref(&ctx.omega(a)),
                };
                let other = gamma_product(ctx, tag, a).mul_ref(&g.inv().expect("γ ≠ 0"));
                (Gamma::base(g), Gamma::base(other))
            }
        };
        let s = Gamma::base(sign.clone());
        values.insert(a, plus.mul_ref(&s));
        values.insert(-a, minus.mul_ref(&s));
    }
    GammaAssignment { tag, branch, values }
}

/// Constants for gluing the two calculi (odd `N` only): plain constants with
/// the ratio fixed by `reading`, barred constants `γ̄_a = −q γ_a`.
pub fn glue_gammas(
    ctx: &ScalarContext<QScalar>,
    branch: GammaBranch,
    reading: GlueReading,
) -> Result<(GammaAssignment<Gamma>, GammaAssignment<Gamma>), FrameError> {
    if !ctx.is_odd() {
        return Err(FrameError::EvenGlue(ctx.dim()));
    }
    let mut plain = build_gammas(ctx, CalculusTag::Plain, GammaChoice::RatioQ, branch);
    if reading == GlueReading::Literal {
        let g1 = plain.values[&1].clone();
        plain.values.insert(-1, g1.mul_ref(&Gamma::base(ctx.q_pow(-1))));
    }
    let mq = Gamma::base(-ctx.q());
    let barred = GammaAssignment {
        tag: CalculusTag::Barred,
        branch,
        values: plain.values.iter().map(|(a, v)| (*a, v.mul_ref(&mq))).collect(),
    };
    Ok((plain, barred))
}
