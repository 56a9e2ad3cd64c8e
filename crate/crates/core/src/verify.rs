//! Check families bundled into reports, in exact or sampled mode.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::calculus::{Calculus, CalculusError, CalculusTag};
use crate::frame::{
    build_gammas, glue_gammas, verify_frame, verify_glue, verify_lambda_equation, verify_theorem2, FrameData,
    FrameError, GammaAssignment, GammaBranch, GammaChoice, GlueReading,
};
use crate::geometry::{verify_curvature, verify_frame_constants, verify_sigma, verify_xi_basis, SigmaBranch};
use crate::report::{VerificationReport, Witness};
use crate::scalar::{Coefficient, GaussRational, KConvention, QScalar, Radical, ScalarContext, ScalarError};
use crate::space::Space;
use crate::tensor::{classical_ranks, verify_rmatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rmatrix,
    Space,
    Calculus,
    /// Theorems 1–5: 1/3 the defining equation (plain/barred), 2/4 the
    /// identity families, 5 the gluing relations.
    Theorem(u8),
    Frame,
    Geometry,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Rmatrix,
        Family::Space,
        Family::Calculus,
        Family::Theorem(1),
        Family::Theorem(2),
        Family::Theorem(3),
        Family::Theorem(4),
        Family::Theorem(5),
        Family::Frame,
        Family::Geometry,
    ];

    pub fn name(self) -> String {
        match self {
            Family::Rmatrix => "rmatrix".into(),
            Family::Space => "space".into(),
            Family::Calculus => "calculus".into(),
            Family::Theorem(t) => format!("theorem{t}"),
            Family::Frame => "frame".into(),
            Family::Geometry => "geometry".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Evaluation at `q^{1/2} = point`.
    Sampled(GaussRational),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub dim: usize,
    pub families: Vec<Family>,
    pub tags: Vec<CalculusTag>,
    pub sigma: Vec<SigmaBranch>,
    pub k_convention: KConvention,
    pub gamma_choice: GammaChoice,
    pub gamma_branch: GammaBranch,
    pub glue_reading: GlueReading,
    /// Seed for the random triples of the confluence check.
    pub seed: u64,
    pub confluence_samples: usize,
    /// Curvature is run for `N ≤ curvature_max_dim` only.
    pub curvature_max_dim: usize,
    /// `d` on degree-2 monomials is checked for `N ≤ quadratic_max_dim`.
    pub quadratic_max_dim: usize,
    pub timings: bool,
}

impl VerifyOptions {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            families: Family::ALL.to_vec(),
            tags: CalculusTag::BOTH.to_vec(),
            sigma: SigmaBranch::BOTH.to_vec(),
            k_convention: KConvention::Standard,
            gamma_choice: GammaChoice::default(),
            gamma_branch: GammaBranch::default(),
            glue_reading: GlueReading::default(),
            seed: 0,
            confluence_samples: 200,
            curvature_max_dim: 3,
            quadratic_max_dim: 4,
            timings: false,
        }
    }

    pub fn families(mut self, families: impl Into<Vec<Family>>) -> Self {
        self.families = families.into();
        self
    }

    pub fn tags(mut self, tags: impl Into<Vec<CalculusTag>>) -> Self {
        self.tags = tags.into();
        self
    }
}

pub fn verify(opts: &VerifyOptions, mode: &Mode) -> Result<VerificationReport, VerifyError> {
    match mode {
        Mode::Exact => {
            let ctx = ScalarContext::new(opts.dim, QScalar::s(), opts.k_convention)?;
            Runner::new(opts, ctx, |c: &QScalar| Ok(c.clone()), true)?.run()
        }
        Mode::Sampled(point) => {
            let ctx = ScalarContext::new(opts.dim, point.clone(), opts.k_convention)?;
            let p = point.clone();
            Runner::new(opts, ctx, move |c: &QScalar| c.eval(&p), false)?.run()
        }
    }
}

struct Runner<'o, F, L> {
    opts: &'o VerifyOptions,
    exact_ctx: ScalarContext<QScalar>,
    space: Space<F>,
    radical: Space<Radical<F>>,
    lift: L,
    exact: bool,
}

impl<'o, F, L> Runner<'o, F, L>
where
    F: Coefficient,
    L: Fn(&QScalar) -> Result<F, ScalarError> + Sync,
{
    fn new(opts: &'o VerifyOptions, ctx: ScalarContext<F>, lift: L, exact: bool) -> Result<Self, VerifyError> {
        let exact_ctx = ScalarContext::new(opts.dim, QScalar::s(), opts.k_convention)?;
        let radical = Space::new(ctx.map(|c| Radical::base(c.clone())));
        Ok(Self { opts, exact_ctx, space: Space::new(ctx), radical, lift, exact })
    }

    fn run(&self) -> Result<VerificationReport, VerifyError> {
        let mut report = VerificationReport::new();
        let mut families = self.opts.families.clone();
        families.sort();
        families.dedup();
        for family in families {
            let start = Instant::now();
            let mut part = self.family(family)?;
            if self.opts.timings {
                let ms = start.elapsed().as_millis() as u64;
                for c in &mut part.checks {
                    c.timing_ms = Some(ms);
                }
            }
            report.extend(part);
        }
        Ok(report)
    }

    fn has(&self, tag: CalculusTag) -> bool {
        self.opts.tags.contains(&tag)
    }

    fn family(&self, family: Family) -> Result<VerificationReport, VerifyError> {
        let n = self.opts.dim;
        let mut report = VerificationReport::new();
        match family {
            Family::Rmatrix => {
                report.extend(verify_rmatrix(&self.space.core));
                if self.exact {
                    let expect = (n * (n + 1) / 2 - 1, n * (n - 1) / 2, 1);
                    let got = classical_ranks(&self.exact_ctx_core())?;
                    let w = (got != expect).then(|| format!("ranks {got:?}, expected {expect:?}"));
                    report.record(format!("rmatrix.ranks.N{n}"), w);
                }
            }
            Family::Space => report.extend(self.space_checks()),
            Family::Calculus => {
                for tag in CalculusTag::BOTH.into_iter().filter(|t| self.has(*t)) {
                    report.extend(self.calculus_checks(tag)?);
                }
            }
            Family::Theorem(t @ 1..=4) => {
                let tag = if t <= 2 { CalculusTag::Plain } else { CalculusTag::Barred };
                let data = self.frame(tag, self.opts.gamma_branch)?;
                if t % 2 == 1 {
                    report.extend(verify_lambda_equation(&self.radical, &data));
                } else {
                    report.extend(verify_theorem2(&self.radical, &data));
                }
            }
            Family::Theorem(5) => match glue_gammas(&self.exact_ctx, self.opts.gamma_branch, self.opts.glue_reading) {
                Err(FrameError::EvenGlue(_)) => {
                    report.fail(
                        format!("thm5.N{n}"),
                        "not possible for even N: no gluing constants exist for the x^{±1} frame (rejected before computation)",
                    );
                }
                Err(e) => return Err(e.into()),
                Ok((p, b)) => {
                    let pd = FrameData::build(&self.radical, CalculusTag::Plain, &self.lift_gammas(&p)?)?;
                    let bd = FrameData::build(&self.radical, CalculusTag::Barred, &self.lift_gammas(&b)?)?;
                    report.extend(verify_glue(&self.radical, &pd, &bd));
                }
            },
            Family::Theorem(t) => report.fail(format!("thm{t}"), "no such theorem"),
            Family::Frame => {
                for tag in CalculusTag::BOTH.into_iter().filter(|t| self.has(*t)) {
                    let data = self.frame(tag, self.opts.gamma_branch)?;
                    report.extend(verify_frame(&self.radical, &data, n <= self.opts.quadratic_max_dim)?);
                    report.info(
                        format!("frame.star.N{n}.{}", tag.name()),
                        "the frame does not preserve the star structure (stated, not checked)",
                    );
                }
            }
            Family::Geometry => {
                for tag in CalculusTag::BOTH.into_iter().filter(|t| self.has(*t)) {
                    let mut r = verify_sigma(&self.space.core, tag);
                    r.checks.retain(|c| self.opts.sigma.iter().any(|b| c.check_id.ends_with(b.name())) || c.check_id.contains("reciprocal"));
                    report.extend(r);
                    for &b in &self.opts.sigma {
                        report.extend(verify_xi_basis(&self.space, tag, b)?);
                    }
                    let data = self.frame(tag, self.opts.gamma_branch)?;
                    let mut r = verify_frame_constants(&self.radical, &data);
                    if n <= self.opts.curvature_max_dim {
                        r.extend(verify_curvature(&self.radical, &data));
                    }
                    r.checks.retain(|c| {
                        !c.check_id.contains("plus") && !c.check_id.contains("minus")
                            || self.opts.sigma.iter().any(|b| c.check_id.ends_with(b.name()))
                    });
                    report.extend(r);
                }
            }
        }
        Ok(report)
    }

    fn exact_ctx_core(&self) -> crate::tensor::TensorCore<QScalar> {
        crate::tensor::TensorCore::new(self.exact_ctx.clone())
    }

    fn lift_gammas(&self, g: &GammaAssignment<Radical<QScalar>>) -> Result<std::collections::BTreeMap<i32, Radical<F>>, VerifyError> {
        Ok(g.try_map(|v| v.try_map(&self.lift))?.values)
    }

    fn frame(&self, tag: CalculusTag, branch: GammaBranch) -> Result<FrameData<Radical<F>>, VerifyError> {
        let g = build_gammas(&self.exact_ctx, tag, self.opts.gamma_choice, branch);
        Ok(FrameData::build(&self.radical, tag, &self.lift_gammas(&g)?)?)
    }

    fn space_checks(&self) -> VerificationReport {
        let n = self.opts.dim;
        let space = &self.space;
        let alg = &space.alg;
        let idx = space.indices();
        let mut report = VerificationReport::new();
        let mut w = Witness::new();
        for &i in idx {
            for &j in idx {
                w.offer_residual(alg.residual(&space.quadratic(&space.core.pa, i, j)), || format!("({i},{j})"));
            }
        }
        report.record(format!("space.xrel.N{n}"), w.into_residual());

        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let mut w = Witness::new();
        for t in 0..self.opts.confluence_samples {
            let [a, b, c] = [0; 3].map(|_| random_element(space, &mut rng));
            let lhs = alg.mul(&alg.mul(&a, &b), &c);
            let rhs = alg.mul(&a, &alg.mul(&b, &c));
            w.offer_residual(alg.residual(&lhs.sub(&rhs)), || format!("triple {t}"));
        }
        report.record(format!("space.confluence.N{n}"), w.into_residual());

        let rn = alg.r_pow(space.ctx().rank() as i32, 1).expect("r_n exists");
        let mut w = Witness::new();
        for &i in idx {
            w.offer_residual(alg.residual(&alg.commutator(&rn, &alg.x(i))), || format!("x({i})"));
        }
        report.record(format!("space.radius_central.N{n}"), w.into_residual());
        report
    }

    fn calculus_checks(&self, tag: CalculusTag) -> Result<VerificationReport, VerifyError> {
        let n = self.opts.dim;
        let space = &self.space;
        let alg = &space.alg;
        let calc = Calculus::new(space, tag);
        let sfx = format!("N{n}.{}", tag.name());
        let idx = space.indices();
        let mut report = VerificationReport::new();

        let pull = calc.pull_rule().compose(calc.push_rule());
        let ident = crate::tensor::SparseTensor4::identity(space.ctx());
        let w = pull.first_difference(&ident).map(|(k, v)| format!("{k:?}: {v}"));
        report.record(format!("calc.rules.inverse.{sfx}"), w);

        let theta = calc.dirac_theta();
        let mut w = Witness::new();
        let mut d2 = Witness::new();
        for &i in idx {
            w.offer_residual(calc.check_d_as_commutator(&theta, &alg.x(i))?, || format!("x({i})"));
        }
        report.record(format!("calc.dirac.coordinates.{sfx}"), w.into_residual());
        if n <= self.opts.quadratic_max_dim {
            let mut w = Witness::new();
            for &i in idx {
                for &j in idx {
                    let f = alg.mul(&alg.x(i), &alg.x(j));
                    w.offer_residual(calc.check_d_as_commutator(&theta, &f)?, || format!("x({i})x({j})"));
                    d2.offer_residual(calc.d1(&calc.d(&f)?)?.residual(alg), || format!("x({i})x({j})"));
                }
            }
            report.record(format!("calc.dirac.quadratic.{sfx}"), w.into_residual());
            report.record(format!("calc.d_squared.{sfx}"), d2.into_residual());
        }
        Ok(report)
    }
}

/// A product of 1–3 random generators (coordinates, their inverses, `Λ^{±1}`,
/// `K^{±1}` for even `N`, `r_i^{±1}`) with a small integer coefficient.
fn random_element<S: Coefficient>(space: &Space<S>, rng: &mut impl Rng) -> AlgebraElement<S> {
    let alg = &space.alg;
    let idx = space.indices();
    let rank = space.ctx().rank() as i32;
    let len = rng.gen_range(1..=3);
    let mut out = alg.one();
    for _ in 0..len {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let g = match rng.gen_range(0..10) {
            0 => alg.lambda_pow(sign),
            1 if !space.ctx().is_odd() => alg.kappa_pow(sign).expect("K exists for even N"),
            2 => alg.r_pow(rng.gen_range(1..=rank), sign).expect("valid r index"),
            3 => {
                let i = if space.ctx().is_odd() { 0 } else { sign };
                alg.x_pow(i, -1).expect("diagonal coordinate is invertible")
            }
            _ => alg.x(idx[rng.gen_range(0..idx.len())]),
        };
        out = alg.mul(&out, &g);
    }
    let c = S::from_i64(rng.gen_range(1..=5));
    let mut sum = out.scale(&c);
    if rng.gen_bool(0.3) {
        sum.add_assign(&alg.x(idx[rng.gen_range(0..idx.len())]));
    }
    sum
}
