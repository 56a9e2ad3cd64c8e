//! Rationals with an allocation-free path for `i64` numerators and
//! denominators; larger values fall back to `BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

/// Always normalized: `Small` whenever both parts fit (`d > 0`, coprime,
/// `n != i64::MIN`), so the derived equality and hash are structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Rat {
    Small { n: i64, d: i64 },
    Big(BigRational),
}

impl Default for Rat {
    fn default() -> Self {
        Rat::Small { n: 0, d: 1 }
    }
}

fn fit(n: i128, d: i128) -> Option<Rat> {
    let n = i64::try_from(n).ok().filter(|&n| n != i64::MIN)?;
    let d = i64::try_from(d).ok()?;
    Some(Rat::Small { n, d })
}

/// `n/d` with `d != 0`, reduced.
fn small(n: i128, d: i128) -> Rat {
    let g = n.gcd(&d);
    let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    fit(n, d).unwrap_or_else(|| Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
}

impl Rat {
    pub(crate) fn from_integer(n: i64) -> Self {
        small(n as i128, 1)
    }

    pub(crate) fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) => fit(n, d).unwrap_or(Rat::Big(r)),
            _ => Rat::Big(r),
        }
    }

    pub(crate) fn to_big(&self) -> BigRational {
        match self {
            Rat::Small { n, d } => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Rat::Small { n: 0, .. })
    }

    pub(crate) fn is_one(&self) -> bool {
        matches!(self, Rat::Small { n: 1, d: 1 })
    }

    pub(crate) fn is_minus_one(&self) -> bool {
        matches!(self, Rat::Small { n: -1, d: 1 })
    }

    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Rat::Small { n, .. } => *n < 0,
            Rat::Big(r) => r.is_negative(),
        }
    }

    pub(crate) fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Rat::Small { n: 0, .. }, _) => o.clone(),
            (_, Rat::Small { n: 0, .. }) => self.clone(),
            (&Rat::Small { n: a, d: b }, &Rat::Small { n: c, d: e }) => {
                if b == e {
                    small(a as i128 + c as i128, b as i128)
                } else {
                    small(a as i128 * e as i128 + c as i128 * b as i128, b as i128 * e as i128)
                }
            }
            _ => Self::from_big(self.to_big() + o.to_big()),
        }
    }

    pub(crate) fn neg(&self) -> Self {
        match self {
            Rat::Small { n, d } => Rat::Small { n: -n, d: *d },
            Rat::Big(r) => Self::from_big(-r),
        }
    }

    pub(crate) fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub(crate) fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Rat::Small { n: 0, .. }, _) | (_, Rat::Small { n: 0, .. }) => Rat::default(),
            (Rat::Small { n: 1, d: 1 }, _) => o.clone(),
            (_, Rat::Small { n: 1, d: 1 }) => self.clone(),
            (&Rat::Small { n: a, d: b }, &Rat::Small { n: c, d: e }) => small(a as i128 * c as i128, b as i128 * e as i128),
            _ => Self::from_big(self.to_big() * o.to_big()),
        }
    }

    pub(crate) fn recip(&self) -> Option<Self> {
        match self {
            Rat::Small { n: 0, .. } => None,
            &Rat::Small { n, d } => Some(small(d as i128, n as i128)),
            Rat::Big(r) => Some(Self::from_big(r.recip())),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small { n, d: 1 } => write!(f, "{n}"),
            Rat::Small { n, d } => write!(f, "{n}/{d}"),
            Rat::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rat::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i128, d: i128) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let m = Rat::from_integer(i64::MAX);
        let sq = m.mul(&m);
        assert!(matches!(sq, Rat::Big(_)));
        assert_eq!(sq.to_big(), big(i64::MAX as i128 * i64::MAX as i128, 1));
        let back = sq.mul(&m.recip().unwrap());
        assert_eq!(back, m);
        assert!(matches!(Rat::from_big(big(-4, 6)), Rat::Small { n: -2, d: 3 }));
        assert!(Rat::from_integer(i64::MIN + 1).sub(&Rat::from_integer(1)).is_negative());
        assert!(matches!(Rat::from_big(big(i64::MIN as i128, 1)), Rat::Big(_)));
    }

    #[test]
    fn matches_big_arithmetic() {
        let vals = [(3, 7), (-5, 12), (1, 1), (i64::MAX as i128, 3), (2, i64::MAX as i128), (0, 1)];
        for &(a, b) in &vals {
            for &(c, d) in &vals {
                let (x, y) = (Rat::from_big(big(a, b)), Rat::from_big(big(c, d)));
                assert_eq!(x.add(&y), Rat::from_big(big(a, b) + big(c, d)));
                assert_eq!(x.sub(&y), Rat::from_big(big(a, b) - big(c, d)));
                assert_eq!(x.mul(&y), Rat::from_big(big(a, b) * big(c, d)));
            }
        }
    }
}
