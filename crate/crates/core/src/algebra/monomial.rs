use std::fmt;

use crate::scalar::{Parity, ScalarContext};

/// Fixed-width exponent storage.
pub(crate) const SLOTS: usize = 2 + crate::MAX_DIM / 2 + crate::MAX_DIM;

const LAMBDA: usize = 0;
const KAPPA: usize = 1;
const R0: usize = 2;

/// A normal-ordered monomial `Λ^α K^β r_1^{γ_1}…r_n^{γ_n} (x^{-n})^{a_{-n}}…(x^n)^{a_n}`.
///
/// The derived ordering is lexicographic in that slot order; it only serves
/// to keep sums canonical and printing deterministic.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: [i16; SLOTS],
}

impl Default for Monomial {
    fn default() -> Self {
        Self { exps: [0; SLOTS] }
    }
}

/// Slot layout for a given dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub(crate) rank: usize,
    pub(crate) dim: usize,
    pub(crate) parity: Parity,
}

impl Layout {
    pub fn of<S>(ctx: &ScalarContext<S>) -> Self
    where
        S: crate::Coefficient,
    {
        Self { rank: ctx.rank(), dim: ctx.dim(), parity: ctx.parity() }
    }

    #[inline]
    pub(crate) fn x_base(&self) -> usize {
        R0 + self.rank
    }

    /// Slot of coordinate `x^i`.
    #[inline]
    pub(crate) fn x_slot(&self, i: i32) -> usize {
        let n = self.rank as i32;
        let pos = match self.parity {
            Parity::Odd => i + n,
            Parity::Even if i < 0 => i + n,
            Parity::Even => i + n - 1,
        };
        self.x_base() + pos as usize
    }

    /// Coordinate index stored at x-position `p` (0-based within the x block).
    #[inline]
    pub(crate) fn x_index(&self, p: usize) -> i32 {
        let n = self.rank as i32;
        let p = p as i32;
        match self.parity {
            Parity::Odd => p - n,
            Parity::Even if p < n => p - n,
            Parity::Even => p - n + 1,
        }
    }

    /// `x^0` for odd `N`, `x^{±1}` for even `N`: they q-commute with every
    /// other generator and are invertible.
    #[inline]
    pub(crate) fn is_diagonal(&self, i: i32) -> bool {
        match self.parity {
            Parity::Odd => i == 0,
            Parity::Even => i.abs() == 1,
        }
    }

    /// `x^1, x^{-1}` commute for even `N`.
    #[inline]
    pub(crate) fn commuting_pair(&self, t: i32, j: i32) -> bool {
        self.parity == Parity::Even && t == -j && t.abs() == 1
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn lambda(&self) -> i32 {
        self.exps[LAMBDA] as i32
    }

    #[inline]
    pub fn kappa(&self) -> i32 {
        self.exps[KAPPA] as i32
    }

    /// Exponent of `r_i`, `1 ≤ i ≤ n`.
    #[inline]
    pub fn r(&self, i: usize) -> i32 {
        self.exps[R0 + i - 1] as i32
    }

    #[inline]
    pub fn x(&self, layout: &Layout, i: i32) -> i32 {
        self.exps[layout.x_slot(i)] as i32
    }

    #[inline]
    pub(crate) fn x_at(&self, layout: &Layout, p: usize) -> i32 {
        self.exps[layout.x_base() + p] as i32
    }

    pub(crate) fn set_lambda(&mut self, e: i32) {
        self.exps[LAMBDA] = e as i16;
    }

    pub(crate) fn set_kappa(&mut self, e: i32) {
        self.exps[KAPPA] = e as i16;
    }

    pub(crate) fn set_r(&mut self, i: usize, e: i32) {
        self.exps[R0 + i - 1] = e as i16;
    }

    pub(crate) fn add_x(&mut self, layout: &Layout, i: i32, e: i32) {
        self.exps[layout.x_slot(i)] += e as i16;
    }

    pub(crate) fn add_x_at(&mut self, layout: &Layout, p: usize, e: i32) {
        self.exps[layout.x_base() + p] += e as i16;
    }

    /// Total x-degree (inverses count negatively, `r_i` counts one).
    pub fn degree(&self, layout: &Layout) -> i32 {
        let r: i32 = (1..=layout.rank).map(|i| self.r(i)).sum();
        let x: i32 = (0..layout.dim).map(|p| self.x_at(layout, p)).sum();
        r + x
    }

    /// The `Λ K r` prefix alone.
    pub(crate) fn prefix(&self, layout: &Layout) -> Self {
        let mut m = *self;
        for e in &mut m.exps[layout.x_base()..] {
            *e = 0;
        }
        m
    }

    /// The x part alone.
    pub(crate) fn x_part(&self, layout: &Layout) -> Self {
        let mut m = *self;
        for e in &mut m.exps[..layout.x_base()] {
            *e = 0;
        }
        m
    }

    /// Sum of exponents slot by slot (no reordering).
    pub(crate) fn join(&self, other: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        m
    }

    pub(crate) fn has_x(&self, layout: &Layout) -> bool {
        self.exps[layout.x_base()..].iter().any(|&e| e != 0)
    }

    pub(crate) fn has_r(&self, layout: &Layout) -> bool {
        (1..=layout.rank).any(|i| self.r(i) != 0)
    }

    /// Canonical text such as `L^2*K^-1*r(1)^-1*x(-1)^2*x(1)`; `1` for the unit.
    pub fn display<'a>(&'a self, layout: &'a Layout) -> impl fmt::Display + 'a {
        MonomialText { mono: self, layout }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = self.exps.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "Monomial{:?}", &self.exps[..used])
    }
}

struct MonomialText<'a> {
    mono: &'a Monomial,
    layout: &'a Layout,
}

fn factor(f: &mut fmt::Formatter<'_>, first: &mut bool, name: &str, e: i32) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

impl fmt::Display for MonomialText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mono;
        let mut first = true;
        factor(f, &mut first, "L", m.lambda())?;
        factor(f, &mut first, "K", m.kappa())?;
        for i in 1..=self.layout.rank {
            factor(f, &mut first, &format!("r({i})"), m.r(i))?;
        }
        for p in 0..self.layout.dim {
            let i = self.layout.x_index(p);
            factor(f, &mut first, &format!("x({i})"), m.x_at(self.layout, p))?;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
