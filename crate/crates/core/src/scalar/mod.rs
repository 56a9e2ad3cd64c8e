//! Coefficient fields.
//!
//! Everything above this module is generic over [`Coefficient`]. The exact
//! field is [`QScalar`] (rational functions in `s = q^{1/2}`); evaluating at
//! a rational point gives [`GaussRational`]; [`Radical`] adjoins square roots
//! to either of them.

mod context;
mod gauss;
mod laurent;
mod qscalar;
mod radical;
mod rational;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

pub use context::{KConvention, Parity, ScalarContext};
pub use gauss::GaussRational;
pub use laurent::HalfLaurent;
pub use qscalar::QScalar;
pub use radical::Radical;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the evaluation point")]
    Pole,
    #[error("index {index} out of range for N = {dim}")]
    IndexOutOfRange { index: i32, dim: usize },
    #[error("dimension N = {0} is not supported (need 3 <= N <= {max})", max = crate::MAX_DIM)]
    UnsupportedDimension(usize),
}

/// A commutative field of coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn checked_inv(&self) -> Option<Self>;
    fn from_gauss(value: &GaussRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_gauss(&GaussRational::from_integer(n))
    }

    fn imag_unit() -> Self {
        Self::from_gauss(&GaussRational::i())
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.checked_inv().map(|inv| self.mul_ref(&inv))
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }

    fn powi(&self, e: i32) -> Option<Self> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut result = Self::one();
        let mut acc = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_ref(&acc);
            }
            n >>= 1;
            if n > 0 {
                acc = acc.mul_ref(&acc);
            }
        }
        Some(result)
    }
}

impl Coefficient for QScalar {
    fn add_ref(&self, other: &Self) -> Self {
        QScalar::add_ref(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        QScalar::sub_ref(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        QScalar::mul_ref(self, other)
    }
    fn checked_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn from_gauss(value: &GaussRational) -> Self {
        QScalar::from_gauss(value.clone())
    }
}

impl Coefficient for GaussRational {
    fn add_ref(&self, other: &Self) -> Self {
        GaussRational::add_ref(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        GaussRational::sub_ref(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        GaussRational::mul_ref(self, other)
    }
    fn checked_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn from_gauss(value: &GaussRational) -> Self {
        value.clone()
    }
}

#[cfg(test)]
mod tests;
