//! The extended coordinate algebra: `x^i`, `r_i^{±1}`, `Λ^{±1}` and (even `N`)
//! `K^{±1}`, kept in PBW normal order `Λ K r_1…r_n x^{-n}…x^n`.
//!
//! Every generator except the non-invertible `x^i` acts diagonally, so moving
//! it through a monomial only costs a power of `q`. Inside the x sector the
//! only non-diagonal rewrite is `x^t x^{-t} = x^{-t} x^t + [x^t, x^{-t}]`,
//! whose right side is expanded straight into ordered x-polynomials.

mod element;
mod monomial;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use thiserror::Error;

pub use element::AlgebraElement;
pub use monomial::{Layout, Monomial};

use crate::scalar::{Coefficient, Parity, ScalarContext, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("x({0}) is not invertible")]
    NotInvertible(i32),
    #[error("r({index}) is out of range 1..={rank}")]
    RIndexOutOfRange { index: i32, rank: usize },
    #[error("K exists only for even N")]
    NoKappa,
}

type XTerms<S> = Arc<Vec<(Monomial, S)>>;

/// Multiplication tables for one dimension over the coefficient field `S`.
pub struct Algebra<S> {
    ctx: ScalarContext<S>,
    layout: Layout,
    /// `[x^t, x^{-t}]` as an ordered x-polynomial, entry `t − 1`.
    commutators: Vec<AlgebraElement<S>>,
    /// `r_i²` as an ordered x-polynomial, entry `i` (entry 0 unused for even N).
    r_squared: Vec<AlgebraElement<S>>,
    cache: RwLock<HashMap<(Monomial, i32), XTerms<S>>>,
}

impl<S: Coefficient> Algebra<S> {
    pub fn new(ctx: ScalarContext<S>) -> Self {
        let layout = Layout::of(&ctx);
        let mut alg = Self {
            ctx,
            layout,
            commutators: Vec::new(),
            r_squared: Vec::new(),
            cache: RwLock::new(HashMap::new()),
        };
        alg.build_tables();
        alg
    }

    /// Tables are filled bottom-up: `[x^t, x^{-t}]` needs `r²_{t−1}`, which
    /// in turn only reorders pairs `x^m x^{-m}` with `m < t`.
    fn build_tables(&mut self) {
        let n = self.layout.rank;
        let odd = self.layout.parity == Parity::Odd;
        self.r_squared.push(if odd { self.x_product(&[(0, 2)]) } else { AlgebraElement::zero() });
        for t in 1..=n as i32 {
            let c = match (t, odd) {
                (1, true) => self.r_squared[0].scale(self.ctx.h()),
                (1, false) => AlgebraElement::zero(),
                _ => {
                    let w = self.ctx.omega(t - 1).checked_inv().expect("omega is invertible");
                    self.r_squared[(t - 1) as usize].scale(&self.ctx.k().mul_ref(&w))
                }
            };
            self.commutators.push(c);
            self.cache.write().expect("cache lock").clear();
            let mut r2 = AlgebraElement::zero();
            for m in -t..=t {
                if !self.ctx.contains(m) {
                    continue;
                }
                let g = self.ctx.q_rho(-m);
                let xx = self.mul(&self.x(m), &self.x(-m));
                r2.add_scaled(&xx, &g);
            }
            self.r_squared.push(r2);
        }
    }

    fn x_product(&self, factors: &[(i32, i32)]) -> AlgebraElement<S> {
        let mut m = Monomial::one();
        for &(i, e) in factors {
            m.add_x(&self.layout, i, e);
        }
        AlgebraElement::term(m, S::one())
    }

    pub fn context(&self) -> &ScalarContext<S> {
        &self.ctx
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn rank(&self) -> usize {
        self.layout.rank
    }

    /// `[x^t, x^{-t}]` for `1 ≤ t ≤ n`.
    pub fn commutator_table(&self, t: usize) -> &AlgebraElement<S> {
        &self.commutators[t - 1]
    }

    /// `r_i²` expanded in the x basis.
    pub fn r_squared(&self, i: usize) -> &AlgebraElement<S> {
        &self.r_squared[i]
    }

    // ---- generators -------------------------------------------------------

    pub fn one(&self) -> AlgebraElement<S> {
        AlgebraElement::one()
    }

    pub fn scalar(&self, c: S) -> AlgebraElement<S> {
        AlgebraElement::constant(c)
    }

    pub fn x(&self, i: i32) -> AlgebraElement<S> {
        self.x_pow(i, 1).expect("valid coordinate index")
    }

    /// `(x^i)^e`; negative `e` only for the invertible coordinates.
    pub fn x_pow(&self, i: i32, e: i32) -> Result<AlgebraElement<S>, AlgebraError> {
        self.ctx.check_index(i)?;
        if e < 0 && !self.layout.is_diagonal(i) {
            return Err(AlgebraError::NotInvertible(i));
        }
        Ok(self.x_product(&[(i, e)]))
    }

    /// `r_i^e`; `r_0` is `x^0` for odd `N`.
    pub fn r_pow(&self, i: i32, e: i32) -> Result<AlgebraElement<S>, AlgebraError> {
        if i == 0 && self.layout.parity == Parity::Odd {
            return self.x_pow(0, e);
        }
        if i < 1 || i as usize > self.layout.rank {
            return Err(AlgebraError::RIndexOutOfRange { index: i, rank: self.layout.rank });
        }
        let mut m = Monomial::one();
        m.set_r(i as usize, e);
        Ok(AlgebraElement::term(m, S::one()))
    }

    pub fn lambda_pow(&self, e: i32) -> AlgebraElement<S> {
        let mut m = Monomial::one();
        m.set_lambda(e);
        AlgebraElement::term(m, S::one())
    }

    pub fn kappa_pow(&self, e: i32) -> Result<AlgebraElement<S>, AlgebraError> {
        if self.layout.parity == Parity::Odd {
            return Err(AlgebraError::NoKappa);
        }
        let mut m = Monomial::one();
        m.set_kappa(e);
        Ok(AlgebraElement::term(m, S::one()))
    }

    /// `x^{w_1} x^{w_2} ⋯` for a word of indices.
    pub fn x_word(&self, word: &[i32]) -> AlgebraElement<S> {
        let mut acc = AlgebraElement::one();
        for &i in word {
            acc = self.mul(&acc, &self.x(i));
        }
        acc
    }

    /// Ordered product of several elements.
    pub fn product(&self, factors: &[&AlgebraElement<S>]) -> AlgebraElement<S> {
        let mut acc = AlgebraElement::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    // ---- multiplication ---------------------------------------------------

    pub fn mul(&self, u: &AlgebraElement<S>, v: &AlgebraElement<S>) -> AlgebraElement<S> {
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (m1, c1) in u.terms() {
            for (m2, c2) in v.terms() {
                let c = c1.mul_ref(c2);
                self.mul_mono_into(&c, m1, m2, &mut acc);
            }
        }
        collect(acc)
    }

    pub fn commutator(&self, u: &AlgebraElement<S>, v: &AlgebraElement<S>) -> AlgebraElement<S> {
        self.mul(u, v).sub(&self.mul(v, u))
    }

    pub fn pow(&self, u: &AlgebraElement<S>, e: u32) -> AlgebraElement<S> {
        let mut acc = AlgebraElement::one();
        for _ in 0..e {
            acc = self.mul(&acc, u);
        }
        acc
    }

    /// Right multiplication by `r_i` (or `r_i^e`).
    pub fn scale_check(&self, u: &AlgebraElement<S>, i: usize, e: i32) -> Result<AlgebraElement<S>, AlgebraError> {
        Ok(self.mul(u, &self.r_pow(i as i32, e)?))
    }

    /// Power of `q` picked up by moving the x part of `m1` to the right of
    /// the `Λ K r` prefix of `m2`, plus `r` of `m1` past `Λ` of `m2`.
    fn prefix_exchange(&self, m1: &Monomial, m2: &Monomial) -> i32 {
        let l = &self.layout;
        let alpha2 = m2.lambda();
        let beta2 = m2.kappa();
        let mut e: i32 = (1..=l.rank).map(|i| m1.r(i) * alpha2).sum();
        if !m1.has_x(l) {
            return e;
        }
        let has_r2 = m2.has_r(l);
        for p in 0..l.dim {
            let a = m1.x_at(l, p);
            if a == 0 {
                continue;
            }
            let j = l.x_index(p);
            e += a * alpha2;
            if l.parity == Parity::Even && j.abs() == 1 {
                e -= a * beta2 * j.signum();
            }
            if has_r2 {
                for i in 1..=l.rank {
                    let g = m2.r(i);
                    if g == 0 {
                        continue;
                    }
                    let ii = i as i32;
                    let c = if j < -ii {
                        1
                    } else if j > ii {
                        -1
                    } else {
                        0
                    };
                    e += a * g * c;
                }
            }
        }
        e
    }

    fn mul_mono_into(&self, c: &S, m1: &Monomial, m2: &Monomial, acc: &mut HashMap<Monomial, S>) {
        let l = &self.layout;
        let e = self.prefix_exchange(m1, m2);
        let prefix = m1.prefix(l).join(&m2.prefix(l));
        let coeff = if e == 0 { c.clone() } else { c.mul_ref(&self.ctx.q_pow(e)) };
        let x1 = m1.x_part(l);
        let x2 = m2.x_part(l);
        if !x2.has_x(l) {
            accumulate(acc, prefix.join(&x1), coeff);
            return;
        }
        for (m, k) in self.mul_xx(&x1, &x2) {
            accumulate(acc, prefix.join(&m), coeff.mul_ref(&k));
        }
    }

    /// Product of two pure x monomials.
    fn mul_xx(&self, x1: &Monomial, x2: &Monomial) -> Vec<(Monomial, S)> {
        let l = &self.layout;
        let mut work: Vec<(Monomial, S)> = vec![(*x1, S::one())];
        for p in 0..l.dim {
            let b = x2.x_at(l, p);
            if b == 0 {
                continue;
            }
            let j = l.x_index(p);
            if l.is_diagonal(j) {
                for (m, c) in work.iter_mut() {
                    let e = self.diagonal_exchange(m, j, b);
                    m.add_x_at(l, p, b);
                    if e != 0 {
                        *c = c.mul_ref(&self.ctx.q_pow(e));
                    }
                }
                continue;
            }
            for _ in 0..b {
                let mut acc: HashMap<Monomial, S> = HashMap::new();
                for (m, c) in &work {
                    for (m2, k) in self.mul_x(m, j).iter() {
                        accumulate(&mut acc, *m2, c.mul_ref(k));
                    }
                }
                work = acc.into_iter().collect();
            }
        }
        work
    }

    /// `q`-exponent for `m · (x^j)^b` with diagonal `x^j`.
    fn diagonal_exchange(&self, m: &Monomial, j: i32, b: i32) -> i32 {
        let l = &self.layout;
        let pj = l.x_slot(j) - l.x_base();
        let mut e = 0;
        for p in pj + 1..l.dim {
            let a = m.x_at(l, p);
            if a != 0 && !l.commuting_pair(l.x_index(p), j) {
                e -= a * b;
            }
        }
        e
    }

    /// Pure x monomial times a single non-diagonal `x^j`, memoized.
    fn mul_x(&self, m: &Monomial, j: i32) -> XTerms<S> {
        let key = (*m, j);
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let value = Arc::new(self.mul_x_uncached(m, j));
        self.cache.write().expect("cache lock").insert(key, value.clone());
        value
    }

    fn mul_x_uncached(&self, m: &Monomial, j: i32) -> Vec<(Monomial, S)> {
        let l = &self.layout;
        let pj = l.x_slot(j) - l.x_base();
        let mut e = 0;
        for p in (pj + 1..l.dim).rev() {
            let a = m.x_at(l, p);
            if a == 0 {
                continue;
            }
            let t = l.x_index(p);
            if l.commuting_pair(t, j) {
                continue;
            }
            if t == -j {
                return self.reorder_pair(m, p, j, e);
            }
            e -= a;
        }
        let mut out = *m;
        out.add_x_at(l, pj, 1);
        vec![(out, self.ctx.q_pow(e))]
    }

    /// `m = L (x^t)^a U` with `t = -j` at position `p`; `x^j` has already
    /// passed `U` at cost `q^e`:
    /// `L (x^t)^a x^j = (L (x^t)^{a-1} x^j) x^t + L (x^t)^{a-1} [x^t, x^j]`.
    fn reorder_pair(&self, m: &Monomial, p: usize, j: i32, e: i32) -> Vec<(Monomial, S)> {
        let l = &self.layout;
        let mut lower = *m;
        let mut upper = Monomial::one();
        for pp in p + 1..l.dim {
            let a = m.x_at(l, pp);
            if a != 0 {
                lower.add_x_at(l, pp, -a);
                upper.add_x_at(l, pp, a);
            }
        }
        lower.add_x_at(l, p, -1);
        let t = -j;
        let scale = self.ctx.q_pow(e);
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        for (mm, c) in self.mul_x(&lower, j).iter() {
            let mut out = mm.join(&upper);
            out.add_x_at(l, p, 1);
            accumulate(&mut acc, out, c.mul_ref(&scale));
        }
        for (cm, cc) in self.commutators[(t - 1) as usize].terms() {
            let k = cc.mul_ref(&scale);
            for (mm, c) in self.mul_xx(&lower, cm) {
                accumulate(&mut acc, mm.join(&upper), c.mul_ref(&k));
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    // ---- zero test --------------------------------------------------------

    /// Reduced form used by the zero test: terms are grouped by `(Λ, K,
    /// parity of r)`, each group is right-multiplied by an even `r`-power so
    /// that all `r` exponents are 0 or 1, and the remaining `r_i²` factors are
    /// expanded in the x basis. The result vanishes iff `u` does.
    pub fn zero_test_form(&self, u: &AlgebraElement<S>) -> AlgebraElement<S> {
        let l = &self.layout;
        if u.terms().all(|(m, _)| !m.has_r(l)) {
            return u.clone();
        }
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, S)>> = BTreeMap::new();
        for (m, c) in u.terms() {
            let mut key = Monomial::one();
            key.set_lambda(m.lambda());
            key.set_kappa(m.kappa());
            for i in 1..=l.rank {
                key.set_r(i, m.r(i).rem_euclid(2));
            }
            groups.entry(key).or_default().push((*m, c.clone()));
        }
        let mut out = AlgebraElement::zero();
        for (key, terms) in groups {
            let mut shift = Monomial::one();
            for i in 1..=l.rank {
                let low = terms.iter().map(|(m, _)| m.r(i)).min().unwrap_or(0);
                let s = if low < 0 { -low + (-low).rem_euclid(2) } else { 0 };
                shift.set_r(i, s);
            }
            let shifted = self.mul(&AlgebraElement::from_terms(terms), &AlgebraElement::term(shift, S::one()));
            for (m, c) in shifted.terms() {
                let mut expansion = AlgebraElement::one();
                for i in 1..=l.rank {
                    let half = (m.r(i) - key.r(i)) / 2;
                    for _ in 0..half {
                        expansion = self.mul(&expansion, &self.r_squared[i]);
                    }
                }
                let x = AlgebraElement::term(m.x_part(l), S::one());
                let tail = self.mul(&expansion, &x);
                for (tm, tc) in tail.terms() {
                    out.add_term(key.join(tm), tc.mul_ref(c));
                }
            }
        }
        out
    }

    pub fn is_zero(&self, u: &AlgebraElement<S>) -> bool {
        self.zero_test_form(u).is_empty()
    }

    /// `None` if `u = 0`, otherwise the canonical text of `u`.
    pub fn residual(&self, u: &AlgebraElement<S>) -> Option<String> {
        if self.is_zero(u) {
            None
        } else {
            Some(self.text(u))
        }
    }

    pub fn equal(&self, u: &AlgebraElement<S>, v: &AlgebraElement<S>) -> bool {
        self.is_zero(&u.sub(v))
    }

    pub fn text(&self, u: &AlgebraElement<S>) -> String {
        u.display(&self.layout).to_string()
    }
}

fn accumulate<S: Coefficient>(acc: &mut HashMap<Monomial, S>, m: Monomial, c: S) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::hash_map::Entry::Occupied(mut o) => {
            let s = o.get().add_ref(&c);
            *o.get_mut() = s;
        }
    }
}

fn collect<S: Coefficient>(acc: HashMap<Monomial, S>) -> AlgebraElement<S> {
    AlgebraElement::from_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()))
}
