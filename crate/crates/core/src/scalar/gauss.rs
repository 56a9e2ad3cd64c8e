//! Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRational {
    re: Rat,
    im: Rat,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re: Rat::from_big(re), im: Rat::from_big(im) }
    }

    pub fn from_integer(n: i64) -> Self {
        Self { re: Rat::from_integer(n), im: Rat::default() }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re: Rat::from_big(re), im: Rat::default() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        Self { re: Rat::default(), im: Rat::from_integer(1) }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).to_big()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.im.is_zero() {
            return Some(Self { re: self.re.recip()?, im: Rat::default() });
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im)).recip()?;
        Some(Self { re: self.re.mul(&n), im: self.im.mul(&n).neg() })
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        Self { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        Self { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => Self { re: self.re.mul(&o.re), im: Rat::default() },
            (true, false) => Self { re: self.re.mul(&o.re), im: self.re.mul(&o.im) },
            (false, true) => Self { re: self.re.mul(&o.re), im: self.im.mul(&o.re) },
            (false, false) => Self {
                re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
                im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
            },
        }
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_minus_one(&self) -> bool {
        self.im.is_zero() && self.re.is_minus_one()
    }

    /// Leading sign used when printing sums: negative real part, or purely
    /// imaginary with negative imaginary part.
    pub(crate) fn is_negative_looking(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.re.is_negative() && self.im.is_zero()
        }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let imag = if self.im.is_one() {
            "i".to_string()
        } else if self.im.is_minus_one() {
            "-i".to_string()
        } else {
            format!("{}*i", self.im)
        };
        if self.re.is_zero() {
            write!(f, "{imag}")
        } else if self.im.is_negative() {
            write!(f, "({}{})", self.re, imag)
        } else {
            write!(f, "({}+{})", self.re, imag)
        }
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl Div for GaussRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.mul_ref(&o.inv().expect("division by zero Gaussian rational"))
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_gaussian() {
        let z = GaussRational::new(BigRational::from_integer(3.into()), BigRational::from_integer(4.into()));
        let w = z.inv().unwrap();
        assert_eq!(z.mul_ref(&w), GaussRational::one());
        assert_eq!(w.to_string(), "(3/25-4/25*i)");
    }

    #[test]
    fn i_squared() {
        let i = GaussRational::i();
        assert_eq!(i.mul_ref(&i), GaussRational::from_integer(-1));
        assert!(GaussRational::zero().inv().is_none());
    }
}
