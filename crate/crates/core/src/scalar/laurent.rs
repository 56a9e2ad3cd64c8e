//! Laurent polynomials in `s = q^{1/2}` with Gaussian-rational coefficients.
//!
//! Stored densely from the lowest nonzero exponent; the zero polynomial is
//! the empty coefficient vector.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::GaussRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct HalfLaurent {
    low: i32,
    coeffs: Vec<GaussRational>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · s^e`.
    pub fn monomial(c: GaussRational, e: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { low: e, coeffs: vec![c] }
        }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i32, GaussRational)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let low = terms.iter().map(|t| t.0).min().unwrap();
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![GaussRational::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - low) as usize];
            *slot = slot.add_ref(&c);
        }
        Self::normalized(low, coeffs)
    }

    fn normalized(mut low: i32, mut coeffs: Vec<GaussRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        if lead > 0 {
            coeffs.drain(..lead);
            low += lead as i32;
        }
        Self { low, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Single-term polynomial `c·s^e`.
    pub fn as_monomial(&self) -> Option<(i32, &GaussRational)> {
        (self.coeffs.len() == 1).then(|| (self.low, &self.coeffs[0]))
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn leading(&self) -> &GaussRational {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn coeff(&self, e: i32) -> GaussRational {
        let idx = e - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            GaussRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &GaussRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { low: self.low, coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, subtract: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { o.neg() } else { o.clone() };
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut coeffs = vec![GaussRational::zero(); (high - low + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + k] = c.clone();
        }
        for (k, c) in o.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(o.low - low) as usize + k];
            *slot = if subtract { slot.sub_ref(c) } else { slot.add_ref(c) };
        }
        Self::normalized(low, coeffs)
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some((e, c)) = o.as_monomial() {
            let mut r = self.scale(c);
            r.low += e;
            return r;
        }
        if let Some((e, c)) = self.as_monomial() {
            let mut r = o.scale(c);
            r.low += e;
            return r;
        }
        let mut coeffs = vec![GaussRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let slot = &mut coeffs[i + j];
                *slot = slot.add_ref(&a.mul_ref(b));
            }
        }
        Self::normalized(self.low + o.low, coeffs)
    }

    /// Exact evaluation at `s = point`; `None` when a negative power meets `s = 0`.
    pub fn eval(&self, point: &GaussRational) -> Option<GaussRational> {
        if self.is_zero() {
            return Some(GaussRational::zero());
        }
        let mut acc = GaussRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(point).add_ref(c);
        }
        let base = pow_gauss(point, self.low)?;
        Some(acc.mul_ref(&base))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.leading().inv().unwrap();
        self.scale(&inv)
    }

    /// The polynomial part `self · s^{-low}` (nonzero constant term).
    pub fn strip_low(&self) -> Self {
        self.shift(-self.low)
    }

    /// Exact quotient when `d` divides `self` as polynomials; both must have
    /// `low == 0` apart from a common shift.
    pub(crate) fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = div_rem(self, d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

/// Euclidean division of polynomials in `s` treating both arguments as
/// ordinary polynomials shifted to start at their own `low` exponent.
pub(crate) fn div_rem(a: &HalfLaurent, d: &HalfLaurent) -> (HalfLaurent, HalfLaurent) {
    assert!(!d.is_zero(), "polynomial division by zero");
    if a.is_zero() {
        return (HalfLaurent::zero(), HalfLaurent::zero());
    }
    let shift = d.low;
    if d.coeffs.len() == 1 {
        let inv = d.coeffs[0].inv().unwrap();
        return (a.scale(&inv).shift(-shift), HalfLaurent::zero());
    }
    // Work on dense vectors indexed from a.low.
    let mut rem: Vec<GaussRational> = a.coeffs.clone();
    let dl = d.coeffs.len();
    if rem.len() < dl {
        return (HalfLaurent::zero(), a.clone());
    }
    let lead_inv = d.leading().inv().unwrap();
    let mut quot = vec![GaussRational::zero(); rem.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + dl - 1];
        if top.is_zero() {
            continue;
        }
        let factor = top.mul_ref(&lead_inv);
        for (j, dc) in d.coeffs.iter().enumerate() {
            if dc.is_zero() {
                continue;
            }
            rem[k + j] = rem[k + j].sub_ref(&factor.mul_ref(dc));
        }
        quot[k] = factor;
    }
    rem.truncate(dl - 1);
    (HalfLaurent::normalized(a.low - shift, quot), HalfLaurent::normalized(a.low, rem))
}

/// Monic gcd of the polynomial parts (powers of `s` are units and dropped).
pub(crate) fn gcd(a: &HalfLaurent, b: &HalfLaurent) -> HalfLaurent {
    if a.is_zero() {
        return b.strip_low().monic();
    }
    if b.is_zero() {
        return a.strip_low().monic();
    }
    let mut x = a.strip_low();
    let mut y = b.strip_low();
    if x.coeffs.len() < y.coeffs.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        if y.coeffs.len() == 1 {
            return HalfLaurent::one();
        }
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r.strip_low().monic();
    }
    x.monic()
}

pub(crate) fn pow_gauss(base: &GaussRational, e: i32) -> Option<GaussRational> {
    let b = match e.cmp(&0) {
        Ordering::Less => base.inv()?,
        _ => base.clone(),
    };
    let mut result = GaussRational::one();
    let mut acc = b;
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            result = result.mul_ref(&acc);
        }
        acc = acc.mul_ref(&acc);
        n >>= 1;
    }
    Some(result)
}

impl fmt::Display for HalfLaurent {
    /// Terms by decreasing exponent, e.g. `s^2 - 1 + 1/2*s^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().rev() {
            let negative = c.is_negative_looking();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (e, magnitude.is_one()) {
                (0, _) => write!(f, "{magnitude}")?,
                (1, true) => write!(f, "s")?,
                (_, true) => write!(f, "s^{e}")?,
                (1, false) => write!(f, "{magnitude}*s")?,
                (_, false) => write!(f, "{magnitude}*s^{e}")?,
            }
        }
        Ok(())
    }
}
