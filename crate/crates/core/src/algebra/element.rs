use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{Layout, Monomial};
use crate::scalar::Coefficient;

/// A finite sum of normal-ordered monomials with nonzero coefficients.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S> Default for AlgebraElement<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Coefficient> AlgebraElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Monomial::one(), S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(mono: Monomial, c: S) -> Self {
        let mut e = Self::zero();
        e.add_term(mono, c);
        e
    }

    /// Collect `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// Structural zero. Elements are kept normal-ordered, so inside the x
    /// sector this is the real zero test; with `r` powers present use
    /// [`super::Algebra::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Option<&S> {
        self.terms.get(mono)
    }

    pub fn add_term(&mut self, mono: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &S) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(*m, c.mul_ref(factor));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        e.add_assign(other);
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (m, c) in &other.terms {
            e.add_term(*m, -c.clone());
        }
        e
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(factor))).collect() }
    }

    /// Apply `f` to every coefficient (e.g. evaluation at a point).
    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        AlgebraElement::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Fallible coefficient map.
    pub fn try_map<T: Coefficient, E>(&self, f: impl Fn(&S) -> Result<T, E>) -> Result<AlgebraElement<T>, E> {
        let mut out = AlgebraElement::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    /// Coefficient of the unit monomial if the element is a scalar.
    pub fn as_scalar(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Canonical text: `c1*m1 + c2*m2`, coefficients in parentheses unless 1.
    pub fn display<'a>(&'a self, layout: &'a Layout) -> impl fmt::Display + 'a {
        ElementText { elem: self, layout }
    }
}

impl<S: Coefficient> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m, c.to_string()))).finish()
    }
}

struct ElementText<'a, S> {
    elem: &'a AlgebraElement<S>,
    layout: &'a Layout,
}

impl<S: Coefficient> fmt::Display for ElementText<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.elem.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            match (m.is_one(), c.is_one()) {
                (true, _) => write!(f, "({c})")?,
                (false, true) => write!(f, "{}", m.display(self.layout))?,
                (false, false) => write!(f, "({c})*{}", m.display(self.layout))?,
            }
        }
        Ok(())
    }
}
