use serde::{Deserialize, Serialize};

use super::{Coefficient, GaussRational, QScalar, ScalarError};

const POW_CACHE: i32 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Which expression stands for `k`.
///
/// `Standard` is `q − q^{-1}`; `H` sets `k = h = q^{1/2} − q^{-1/2}` and is
/// kept as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KConvention {
    #[default]
    Standard,
    H,
}

/// Dimension data and the named constants `ρ_i`, `ω_i`, `h`, `k` over a
/// coefficient field `S`, together with the value of `s = q^{1/2}` in `S`.
#[derive(Debug, Clone)]
pub struct ScalarContext<S> {
    dim: usize,
    rank: usize,
    parity: Parity,
    k_convention: KConvention,
    indices: Vec<i32>,
    s_powers: Vec<S>,
    h: S,
    k: S,
}

impl ScalarContext<QScalar> {
    /// The exact context: `s` is the formal variable.
    pub fn exact(dim: usize) -> Result<Self, ScalarError> {
        Self::new(dim, QScalar::s(), KConvention::Standard)
    }
}

impl ScalarContext<GaussRational> {
    /// Specialization at `s = point`.
    pub fn sampled(dim: usize, point: GaussRational) -> Result<Self, ScalarError> {
        Self::new(dim, point, KConvention::Standard)
    }
}

impl<S: Coefficient> ScalarContext<S> {
    pub fn new(dim: usize, s: S, k_convention: KConvention) -> Result<Self, ScalarError> {
        if !(3..=crate::MAX_DIM).contains(&dim) {
            return Err(ScalarError::UnsupportedDimension(dim));
        }
        let rank = dim / 2;
        let parity = if dim % 2 == 1 { Parity::Odd } else { Parity::Even };
        let n = rank as i32;
        let indices = (-n..=n).filter(|&i| i != 0 || parity == Parity::Odd).collect();
        let s_inv = s.checked_inv().ok_or(ScalarError::Pole)?;
        let mut s_powers = Vec::with_capacity((2 * POW_CACHE + 1) as usize);
        let mut neg = vec![S::one()];
        for _ in 0..POW_CACHE {
            let next = neg.last().unwrap().mul_ref(&s_inv);
            neg.push(next);
        }
        s_powers.extend(neg.into_iter().skip(1).rev());
        let mut pos = S::one();
        for _ in 0..=POW_CACHE {
            s_powers.push(pos.clone());
            pos = pos.mul_ref(&s);
        }
        let h = s.sub_ref(&s_inv);
        let q = s.mul_ref(&s);
        let q_inv = s_inv.mul_ref(&s_inv);
        let k = match k_convention {
            KConvention::Standard => q.sub_ref(&q_inv),
            KConvention::H => h.clone(),
        };
        if h.is_zero() || k.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(Self { dim, rank, parity, k_convention, indices, s_powers, h, k })
    }

    /// Re-expresses the context over another field through `f` (used to
    /// adjoin square roots or evaluate at a point).
    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> ScalarContext<T> {
        ScalarContext {
            dim: self.dim,
            rank: self.rank,
            parity: self.parity,
            k_convention: self.k_convention,
            indices: self.indices.clone(),
            s_powers: self.s_powers.iter().map(&f).collect(),
            h: f(&self.h),
            k: f(&self.k),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n = ⌊N/2⌋`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    pub fn k_convention(&self) -> KConvention {
        self.k_convention
    }

    /// Index alphabet `−n..n`, without `0` for even `N`.
    pub fn indices(&self) -> &[i32] {
        &self.indices
    }

    pub fn contains(&self, i: i32) -> bool {
        self.position(i).is_some()
    }

    /// Position of index `i` in the alphabet.
    pub fn position(&self, i: i32) -> Option<usize> {
        let n = self.rank as i32;
        if i < -n || i > n {
            return None;
        }
        match self.parity {
            Parity::Odd => Some((i + n) as usize),
            Parity::Even if i == 0 => None,
            Parity::Even if i < 0 => Some((i + n) as usize),
            Parity::Even => Some((i + n - 1) as usize),
        }
    }

    pub fn check_index(&self, i: i32) -> Result<usize, ScalarError> {
        self.position(i).ok_or(ScalarError::IndexOutOfRange { index: i, dim: self.dim })
    }

    /// `2ρ_i`, an integer.
    pub fn rho2(&self, i: i32) -> i32 {
        let a = i.abs();
        let mag = match self.parity {
            Parity::Odd if a == 0 => 0,
            Parity::Odd => 2 * a - 1,
            Parity::Even => 2 * a - 2,
        };
        -i.signum() * mag
    }

    /// `s^e`.
    pub fn s_pow(&self, e: i32) -> S {
        if e.abs() <= POW_CACHE {
            self.s_powers[(e + POW_CACHE) as usize].clone()
        } else {
            let (base, rest) = if e > 0 { (POW_CACHE, e - POW_CACHE) } else { (-POW_CACHE, e + POW_CACHE) };
            self.s_pow(base).mul_ref(&self.s_pow(rest))
        }
    }

    /// `q^e`.
    pub fn q_pow(&self, e: i32) -> S {
        self.s_pow(2 * e)
    }

    pub fn s(&self) -> S {
        self.s_pow(1)
    }

    pub fn q(&self) -> S {
        self.s_pow(2)
    }

    /// `q^{ρ_i}`.
    pub fn q_rho(&self, i: i32) -> S {
        self.s_pow(self.rho2(i))
    }

    /// `ω_i = q^{ρ_i} + q^{-ρ_i}`.
    pub fn omega(&self, i: i32) -> S {
        let r = self.rho2(i);
        self.s_pow(r).add_ref(&self.s_pow(-r))
    }

    pub fn h(&self) -> &S {
        &self.h
    }

    pub fn k(&self) -> &S {
        &self.k
    }

    /// Named constant lookup: `rho`, `omega`, `h`, `k`.
    pub fn constant(&self, name: &str, index: Option<i32>) -> Result<S, ScalarError> {
        match (name, index) {
            ("h", _) => Ok(self.h.clone()),
            ("k", _) => Ok(self.k.clone()),
            ("rho", Some(i)) => {
                self.check_index(i)?;
                let half = S::from_gauss(&GaussRational::ratio(1, 2));
                Ok(S::from_i64(self.rho2(i) as i64).mul_ref(&half))
            }
            ("omega", Some(i)) => {
                self.check_index(i)?;
                Ok(self.omega(i))
            }
            (_, None) => Err(ScalarError::IndexOutOfRange { index: 0, dim: self.dim }),
            _ => Err(ScalarError::IndexOutOfRange { index: index.unwrap_or(0), dim: self.dim }),
        }
    }
}
