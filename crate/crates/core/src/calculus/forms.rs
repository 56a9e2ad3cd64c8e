use std::collections::BTreeMap;

use super::CalculusTag;
use crate::algebra::{Algebra, AlgebraElement};
use crate::scalar::Coefficient;

/// `Σ_i u_i ξ^i`, coefficients on the left.
#[derive(Clone, PartialEq)]
pub struct OneForm<S> {
    tag: CalculusTag,
    coeffs: BTreeMap<i32, AlgebraElement<S>>,
}

/// `Σ_{ij} u_{ij} ξ^i ⊗ ξ^j`, coefficients on the left.
#[derive(Clone, PartialEq)]
pub struct TensorSquare<S> {
    tag: CalculusTag,
    coeffs: BTreeMap<(i32, i32), AlgebraElement<S>>,
}

/// A 2-form stored as its `P_a`-projected coefficient array.
#[derive(Clone, PartialEq)]
pub struct TwoForm<S> {
    tag: CalculusTag,
    coeffs: BTreeMap<(i32, i32), AlgebraElement<S>>,
}

macro_rules! form_common {
    ($ty:ident, $key:ty) => {
        impl<S: Coefficient> std::fmt::Debug for $ty<S> {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.debug_struct(stringify!($ty)).field("tag", &self.tag).field("coeffs", &self.coeffs).finish()
            }
        }

        impl<S: Coefficient> $ty<S> {
            pub fn zero(tag: CalculusTag) -> Self {
                Self { tag, coeffs: BTreeMap::new() }
            }

            pub fn tag(&self) -> CalculusTag {
                self.tag
            }

            pub fn components(&self) -> impl Iterator<Item = (&$key, &AlgebraElement<S>)> {
                self.coeffs.iter()
            }

            pub fn component(&self, key: $key) -> AlgebraElement<S> {
                self.coeffs.get(&key).cloned().unwrap_or_default()
            }

            pub fn add_component(&mut self, key: $key, c: &AlgebraElement<S>) {
                let slot = self.coeffs.entry(key).or_default();
                slot.add_assign(c);
                if slot.is_empty() {
                    self.coeffs.remove(&key);
                }
            }

            pub fn add_assign(&mut self, other: &Self) {
                for (k, c) in &other.coeffs {
                    self.add_component(*k, c);
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.clone();
                out.add_assign(other);
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(&-S::one()))
            }

            pub fn scale(&self, c: &S) -> Self {
                let mut out = Self::zero(self.tag);
                for (k, v) in &self.coeffs {
                    out.add_component(*k, &v.scale(c));
                }
                out
            }

            pub fn is_empty(&self) -> bool {
                self.coeffs.is_empty()
            }

            /// Coefficient-wise zero test in the algebra.
            pub fn is_zero(&self, alg: &Algebra<S>) -> bool {
                self.coeffs.values().all(|c| alg.is_zero(c))
            }

            /// First nonzero component as `key: text`, or `None`.
            pub fn residual(&self, alg: &Algebra<S>) -> Option<String> {
                self.coeffs.iter().find_map(|(k, c)| alg.residual(c).map(|r| format!("{k:?}: {r}")))
            }

            pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> $ty<T> {
                let mut out = $ty::zero(self.tag);
                for (k, v) in &self.coeffs {
                    out.add_component(*k, &v.map(&f));
                }
                out
            }
        }
    };
}

form_common!(OneForm, i32);
form_common!(TensorSquare, (i32, i32));
form_common!(TwoForm, (i32, i32));

impl<S: Coefficient> OneForm<S> {
    pub fn basis(tag: CalculusTag, i: i32) -> Self {
        let mut u = Self::zero(tag);
        u.add_component(i, &AlgebraElement::one());
        u
    }
}

impl<S: Coefficient> TwoForm<S> {
    pub(crate) fn from_square(coeffs: BTreeMap<(i32, i32), AlgebraElement<S>>, tag: CalculusTag) -> Self {
        Self { tag, coeffs }
    }
}
