//! Everything that depends only on `N` and the coefficient field: braid
//! matrix, metric, projectors and the algebra tables.

use crate::algebra::{Algebra, AlgebraElement};
use crate::scalar::{Coefficient, GaussRational, KConvention, QScalar, Radical, ScalarContext, ScalarError};
use crate::tensor::TensorCore;

pub struct Space<S> {
    pub core: TensorCore<S>,
    pub alg: Algebra<S>,
}

impl<S: Coefficient> Space<S> {
    pub fn new(ctx: ScalarContext<S>) -> Self {
        let core = TensorCore::new(ctx.clone());
        let alg = Algebra::new(ctx);
        Self { core, alg }
    }

    pub fn ctx(&self) -> &ScalarContext<S> {
        self.alg.context()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn indices(&self) -> &[i32] {
        self.alg.context().indices()
    }

    /// `Σ_{kl} T^{ij}_{kl} x^k x^l` for a 4-tensor `T`.
    pub fn quadratic(&self, t: &crate::SparseTensor4<S>, i: i32, j: i32) -> AlgebraElement<S> {
        let mut out = AlgebraElement::zero();
        for ((k, l), c) in t.row(i, j) {
            out.add_scaled(&self.alg.mul(&self.alg.x(k), &self.alg.x(l)), c);
        }
        out
    }
}

impl Space<QScalar> {
    pub fn exact(dim: usize) -> Result<Self, ScalarError> {
        Ok(Self::new(ScalarContext::exact(dim)?))
    }

    pub fn with_convention(dim: usize, k: KConvention) -> Result<Self, ScalarError> {
        Ok(Self::new(ScalarContext::new(dim, QScalar::s(), k)?))
    }
}

impl Space<Radical<QScalar>> {
    /// Exact space whose coefficients may carry square roots.
    pub fn radical(dim: usize, k: KConvention) -> Result<Self, ScalarError> {
        Ok(Self::new(ScalarContext::new(dim, Radical::base(QScalar::s()), k)?))
    }
}

impl Space<Radical<GaussRational>> {
    pub fn radical_sampled(dim: usize, point: GaussRational) -> Result<Self, ScalarError> {
        Ok(Self::new(ScalarContext::new(dim, Radical::base(point), KConvention::Standard)?))
    }
}

impl Space<GaussRational> {
    pub fn sampled(dim: usize, point: GaussRational) -> Result<Self, ScalarError> {
        Ok(Self::new(ScalarContext::sampled(dim, point)?))
    }
}
