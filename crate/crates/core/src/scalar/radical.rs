//! Multi-quadratic extensions `F(√D₀, √D₁, …)`.
//!
//! An element is a sum over subsets `m` of the adjoined roots of
//! `c_m · Π_{j∈m} t_j` with `t_j² = D_j`. Zero-testing is component-wise,
//! which is exact as long as the radicands are independent modulo squares.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Coefficient, GaussRational};

#[derive(Clone, Debug)]
pub struct Radical<F> {
    parts: BTreeMap<u32, F>,
    radicands: Option<Arc<Vec<F>>>,
}

impl<F: Coefficient> Radical<F> {
    pub fn base(value: F) -> Self {
        let mut parts = BTreeMap::new();
        if !value.is_zero() {
            parts.insert(0, value);
        }
        Self { parts, radicands: None }
    }

    /// The adjoined root `t_j` of `radicands[j]`.
    pub fn root(j: usize, radicands: Arc<Vec<F>>) -> Self {
        assert!(j < radicands.len() && j < 32);
        let mut parts = BTreeMap::new();
        parts.insert(1u32 << j, F::one());
        Self { parts, radicands: Some(radicands) }
    }

    pub fn radicands(&self) -> Option<&Arc<Vec<F>>> {
        self.radicands.as_ref()
    }

    /// Component at the subset `mask` of adjoined roots.
    pub fn component(&self, mask: u32) -> F {
        self.parts.get(&mask).cloned().unwrap_or_else(F::zero)
    }

    /// The base-field value when no root is involved.
    pub fn as_base(&self) -> Option<F> {
        match self.parts.len() {
            0 => Some(F::zero()),
            1 => self.parts.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &F)> {
        self.parts.iter().map(|(m, c)| (*m, c))
    }

    /// Applies `f` to every component (e.g. evaluation), mapping radicands too.
    pub fn map<G: Coefficient>(&self, f: impl Fn(&F) -> G) -> Radical<G> {
        let parts = self
            .parts
            .iter()
            .map(|(m, c)| (*m, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let radicands = self.radicands.as_ref().map(|r| Arc::new(r.iter().map(&f).collect()));
        Radical { parts, radicands }
    }

    pub fn try_map<G: Coefficient, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Radical<G>, E> {
        let mut parts = BTreeMap::new();
        for (m, c) in &self.parts {
            let v = f(c)?;
            if !v.is_zero() {
                parts.insert(*m, v);
            }
        }
        let radicands = match &self.radicands {
            Some(r) => Some(Arc::new(r.iter().map(&f).collect::<Result<Vec<_>, E>>()?)),
            None => None,
        };
        Ok(Radical { parts, radicands })
    }

    fn merged_radicands(&self, o: &Self) -> Option<Arc<Vec<F>>> {
        self.radicands.clone().or_else(|| o.radicands.clone())
    }

    fn combine(&self, o: &Self, subtract: bool) -> Self {
        let mut parts = self.parts.clone();
        for (m, c) in &o.parts {
            let entry = parts.entry(*m).or_insert_with(F::zero);
            *entry = if subtract { entry.sub_ref(c) } else { entry.add_ref(c) };
            if entry.is_zero() {
                parts.remove(m);
            }
        }
        Self { parts, radicands: self.merged_radicands(o) }
    }

    fn product(&self, o: &Self) -> Self {
        let radicands = self.merged_radicands(o);
        let mut parts: BTreeMap<u32, F> = BTreeMap::new();
        for (m1, a) in &self.parts {
            for (m2, b) in &o.parts {
                let mut c = a.mul_ref(b);
                let shared = m1 & m2;
                if shared != 0 {
                    let rads = radicands.as_ref().expect("radical element without radicands");
                    for (j, d) in rads.iter().enumerate() {
                        if shared & (1 << j) != 0 {
                            c = c.mul_ref(d);
                        }
                    }
                }
                let entry = parts.entry(m1 ^ m2).or_insert_with(F::zero);
                *entry = entry.add_ref(&c);
            }
        }
        parts.retain(|_, c| !c.is_zero());
        Self { parts, radicands }
    }

    fn inverse(&self) -> Option<Self> {
        if self.parts.is_empty() {
            return None;
        }
        let top = self.parts.keys().fold(0u32, |acc, m| acc | m);
        if top == 0 {
            let inv = self.parts[&0].checked_inv()?;
            return Some(Self { parts: BTreeMap::from([(0, inv)]), radicands: self.radicands.clone() });
        }
        let j = 31 - top.leading_zeros();
        let bit = 1u32 << j;
        let conj = Self {
            parts: self
                .parts
                .iter()
                .map(|(m, c)| (*m, if m & bit != 0 { -c.clone() } else { c.clone() }))
                .collect(),
            radicands: self.radicands.clone(),
        };
        let norm = self.product(&conj);
        debug_assert!(norm.parts.keys().all(|m| m & bit == 0));
        Some(conj.product(&norm.inverse()?))
    }
}

impl<F: Coefficient> PartialEq for Radical<F> {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl<F: Coefficient> Zero for Radical<F> {
    fn zero() -> Self {
        Self { parts: BTreeMap::new(), radicands: None }
    }
    fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}

impl<F: Coefficient> One for Radical<F> {
    fn one() -> Self {
        Self::base(F::one())
    }
}

impl<F: Coefficient> Add for Radical<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.combine(&o, false)
    }
}

impl<F: Coefficient> Sub for Radical<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.combine(&o, true)
    }
}

impl<F: Coefficient> Mul for Radical<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.product(&o)
    }
}

impl<F: Coefficient> Neg for Radical<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { parts: self.parts.into_iter().map(|(m, c)| (m, -c)).collect(), radicands: self.radicands }
    }
}

impl<F: Coefficient> fmt::Display for Radical<F> {
    /// `c0 + (c1)*t0 + …`, where `t_j = sqrt(radicand j)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.parts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})")?;
                for j in 0..32 {
                    if m & (1 << j) != 0 {
                        write!(f, "*t{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<F: Coefficient> Coefficient for Radical<F> {
    fn add_ref(&self, other: &Self) -> Self {
        self.combine(other, false)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.combine(other, true)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.product(other)
    }
    fn checked_inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn from_gauss(value: &GaussRational) -> Self {
        Self::base(F::from_gauss(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QScalar;

    #[test]
    fn root_squares_to_radicand() {
        let d = QScalar::q().add_ref(&QScalar::one());
        let rads = Arc::new(vec![d.clone()]);
        let t = Radical::root(0, rads);
        assert_eq!(t.mul_ref(&t), Radical::base(d));
    }

    #[test]
    fn inverse_in_biquadratic_extension() {
        let rads = Arc::new(vec![QScalar::from_integer(2), QScalar::q()]);
        let t0 = Radical::root(0, rads.clone());
        let t1 = Radical::root(1, rads);
        let x = Radical::one().add_ref(&t0).add_ref(&t1.mul_ref(&t0)).add_ref(&t1);
        let inv = x.checked_inv().unwrap();
        assert_eq!(x.mul_ref(&inv), Radical::one());
    }
}
