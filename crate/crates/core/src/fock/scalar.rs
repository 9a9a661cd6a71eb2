//! Scalar fields for Fock-space matrices.
//!
//! Ladder operators carry entries `sqrt(m)`, which are irrational, so an
//! exact mode needs more than plain rationals. [`Surd`] represents finite
//! sums `sum_s q_s * sqrt(s)` over square-free integers `s` with rational
//! coefficients `q_s`. That set is closed under addition and
//! multiplication, so every ladder product stays exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Field operations needed by [`FockOperator`](super::FockOperator).
pub trait FockScalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `sqrt(m)` for a nonnegative integer.
    fn sqrt_int(m: u64) -> Self;
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn to_f64(&self) -> f64;
}

impl FockScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn sqrt_int(m: u64) -> Self {
        (m as f64).sqrt()
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
            .to_f64()
            .unwrap_or(f64::NAN)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Exact element of `Q(sqrt 2, sqrt 3, sqrt 5, ...)`.
///
/// Keys are square-free radicands, values their nonzero rational
/// coefficients. The key `1` holds the rational part.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

impl Surd {
    pub fn rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Surd { terms }
    }

    pub fn integer(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// The rational value, if there is no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(s, q)| (*s, q))
    }

    fn insert_term(&mut self, radicand: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }
}

/// Splits `m = f^2 * s` with `s` square-free.
pub(crate) fn square_free_split(mut m: u64) -> (u64, u64) {
    if m == 0 {
        return (0, 1);
    }
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            inside *= p;
        }
        p += 1;
    }
    inside *= m;
    (outside, inside)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FockScalar for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn one() -> Self {
        Surd::integer(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn sqrt_int(m: u64) -> Self {
        let (outside, inside) = square_free_split(m);
        let mut s = Surd::default();
        s.insert_term(inside, BigRational::from_integer(BigInt::from(outside)));
        s
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        Surd::rational(BigRational::new(num.clone(), den.clone()))
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (s, q) in &rhs.terms {
            out.insert_term(*s, q.clone());
        }
        out
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Surd::default();
        for (s1, q1) in &self.terms {
            for (s2, q2) in &rhs.terms {
                // s1, s2 square-free: s1*s2 = g^2 * (s1/g)(s2/g), the cofactor square-free.
                let g = gcd(*s1, *s2);
                let radicand = (s1 / g) * (s2 / g);
                let coeff = q1 * q2 * BigRational::from_integer(BigInt::from(g));
                out.insert_term(radicand, coeff);
            }
        }
        out
    }
    fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(s, q)| q.to_f64().unwrap_or(f64::NAN) * (*s as f64).sqrt())
            .sum()
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        FockScalar::add(self, rhs)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        FockScalar::mul(self, rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(mut self) -> Surd {
        for q in self.terms.values_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl From<i64> for Surd {
    fn from(v: i64) -> Self {
        Surd::integer(v)
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *s == 1 {
                write!(f, "{q}")?;
            } else if q.is_one() {
                write!(f, "sqrt({s})")?;
            } else {
                write!(f, "{q}*sqrt({s})")?;
            }
        }
        Ok(())
    }
}
