//! Rational functions in `s = q^{1/2}` over the Gaussian rationals.
//!
//! Canonical form: `num / den` where `den` is a polynomial with nonzero
//! constant term and leading coefficient 1, and `gcd(num, den) = 1`. Powers
//! of `s` are units and always live in `num`, so equality is structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::laurent::{gcd, HalfLaurent};
use super::{GaussRational, ScalarError};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    num: HalfLaurent,
    den: HalfLaurent,
}

impl QScalar {
    /// The formal variable `s = q^{1/2}`.
    pub fn s() -> Self {
        Self::s_pow(1)
    }

    /// `q = s²`.
    pub fn q() -> Self {
        Self::s_pow(2)
    }

    pub fn s_pow(e: i32) -> Self {
        Self::from_laurent(HalfLaurent::monomial(GaussRational::one(), e))
    }

    pub fn from_gauss(c: GaussRational) -> Self {
        Self::from_laurent(HalfLaurent::constant(c))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_gauss(GaussRational::from_integer(n))
    }

    pub fn from_laurent(num: HalfLaurent) -> Self {
        Self { num, den: HalfLaurent::one() }
    }

    /// Builds `num / den` and reduces to canonical form.
    pub fn from_parts(num: HalfLaurent, den: HalfLaurent) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn numerator(&self) -> &HalfLaurent {
        &self.num
    }

    pub fn denominator(&self) -> &HalfLaurent {
        &self.den
    }

    /// True when the value is a Laurent polynomial in `s`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn canonical(num: HalfLaurent, den: HalfLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // move the power of s out of the denominator
        let num = num.shift(-den.low());
        let den = den.strip_low();
        if den.as_monomial().is_some() {
            let inv = den.leading().inv().unwrap();
            return Self { num: num.scale(&inv), den: HalfLaurent::one() };
        }
        let shift = num.low();
        let poly = num.strip_low();
        let g = gcd(&poly, &den);
        let (poly, den) = if g.is_one() {
            (poly, den)
        } else {
            (poly.div_exact(&g), den.div_exact(&g))
        };
        let lead = den.leading().clone();
        if lead.is_one() {
            Self { num: poly.shift(shift), den }
        } else {
            let inv = lead.inv().unwrap();
            Self { num: poly.scale(&inv).shift(shift), den: den.scale(&inv) }
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Self::from_laurent(self.num.add_ref(&o.num));
            }
            return Self::canonical(self.num.add_ref(&o.num), self.den.clone());
        }
        self.cross(o, false)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Self::from_laurent(self.num.sub_ref(&o.num));
            }
            return Self::canonical(self.num.sub_ref(&o.num), self.den.clone());
        }
        self.cross(o, true)
    }

    fn cross(&self, o: &Self, subtract: bool) -> Self {
        // a/b ± c/d = (a·(d/g) ± c·(b/g)) / (b·d/g), g = gcd(b, d)
        let g = gcd(&self.den, &o.den);
        let (bg, dg) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (self.den.div_exact(&g), o.den.div_exact(&g))
        };
        let left = self.num.mul_ref(&dg);
        let right = o.num.mul_ref(&bg);
        let num = if subtract { left.sub_ref(&right) } else { left.add_ref(&right) };
        Self::canonical(num, self.den.mul_ref(&dg))
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_laurent(self.num.mul_ref(&o.num));
        }
        // monomial factors cannot cancel anything
        if o.num.as_monomial().is_some() && o.den.is_one() {
            return Self { num: self.num.mul_ref(&o.num), den: self.den.clone() };
        }
        if self.num.as_monomial().is_some() && self.den.is_one() {
            return Self { num: o.num.mul_ref(&self.num), den: o.den.clone() };
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = if g1.is_one() { self.num.clone() } else { self.num.strip_low().div_exact(&g1).shift(self.num.low()) };
        let d = if g1.is_one() { o.den.clone() } else { o.den.div_exact(&g1) };
        let c = if g2.is_one() { o.num.clone() } else { o.num.strip_low().div_exact(&g2).shift(o.num.low()) };
        let b = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2) };
        let num = a.mul_ref(&c);
        let den = b.mul_ref(&d);
        let lead = den.leading().clone();
        if lead.is_one() {
            Self { num, den }
        } else {
            let inv = lead.inv().unwrap();
            Self { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        let inv = o.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self.mul_ref(&inv))
    }

    /// Multiplies by `s^e` without any gcd work.
    pub fn mul_s_pow(&self, e: i32) -> Self {
        Self { num: self.num.shift(e), den: self.den.clone() }
    }

    /// Exact evaluation at `s = point`.
    pub fn eval(&self, point: &GaussRational) -> Result<GaussRational, ScalarError> {
        let d = self.den.eval(point).ok_or(ScalarError::Pole)?;
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        let n = self.num.eval(point).ok_or(ScalarError::Pole)?;
        Ok(n.mul_ref(&d.inv().unwrap()))
    }

    /// Value at `q = 1` (that is `s = 1`); poles there are reported.
    pub fn classical_limit(&self) -> Result<GaussRational, ScalarError> {
        self.eval(&GaussRational::one())
    }
}

impl Zero for QScalar {
    fn zero() -> Self {
        Self { num: HalfLaurent::zero(), den: HalfLaurent::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for QScalar {
    fn one() -> Self {
        Self::from_laurent(HalfLaurent::one())
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl Add for QScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl Sub for QScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl Mul for QScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl Div for QScalar {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.checked_div(&o).expect("division by zero QScalar")
    }
}

impl Neg for QScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: self.num.neg(), den: self.den }
    }
}

impl fmt::Display for QScalar {
    /// `p(s)` for Laurent polynomials, `(p(s))/(r(s))` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
