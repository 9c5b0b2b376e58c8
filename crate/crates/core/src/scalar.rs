//! The coefficient abstraction every construction in this crate is generic over.
//!
//! Anything implementing [`num_traits::Num`] (integers, `BigRational`, floats) is a
//! [`Coefficient`] through a blanket impl. The finite-precision rings of
//! [`crate::ring`] implement it directly because their zero and one depend on a
//! runtime context.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num};

/// A (possibly non-commutative) ring element that knows how to build its own
/// constants.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// Zero with nothing left unknown, so that dropping it loses no
    /// information. Differs from [`Coefficient::is_zero`] for finite-precision
    /// elements that only vanish modulo their stored precision.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    /// `n · self`.
    fn scale_int(&self, n: i64) -> Self;

    /// `self / n` when the quotient exists in the ring.
    fn div_int_exact(&self, n: i64) -> Option<Self>;

    fn from_int_like(&self, n: i64) -> Self {
        self.one_like().scale_int(n)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T> Coefficient for T
where
    T: Num + FromPrimitive + Clone + Debug + Send + Sync + Neg<Output = T>,
{
    fn zero_like(&self) -> Self {
        T::zero()
    }

    fn one_like(&self) -> Self {
        T::one()
    }

    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.clone() * T::from_i64(n).expect("integer fits the scalar type")
    }

    fn div_int_exact(&self, n: i64) -> Option<Self> {
        let d = T::from_i64(n)?;
        if num_traits::Zero::is_zero(&d) {
            return None;
        }
        let q = self.clone() / d.clone();
        if q.clone() * d == *self {
            Some(q)
        } else {
            None
        }
    }
}

/// Exact binomial coefficient; panics on overflow, which never happens at the
/// truncation degrees used here.
pub fn binomial(n: u64, k: u64) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(acc).expect("binomial coefficient overflow")
}

pub fn factorial(n: u64) -> i64 {
    (1..=n as i64).product::<i64>().max(1)
}

/// p-adic valuation of a nonzero integer.
pub fn vp_int(mut n: i64, p: u64) -> u32 {
    assert!(n != 0);
    let p = p as i64;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre's formula.
pub fn vp_factorial(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q as u32;
        q /= p;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
        assert_eq!(vp_factorial(16, 2), 15);
        assert_eq!(vp_factorial(12, 5), 2);
        assert_eq!(vp_int(-24, 2), 3);
    }

    #[test]
    fn blanket_impl_on_integers_and_rationals() {
        assert_eq!(7i64.div_int_exact(2), None);
        assert_eq!(8i64.div_int_exact(2), Some(4));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(half.div_int_exact(3).unwrap() * BigRational::from_integer(6.into()), BigRational::from_integer(1.into()));
        assert_eq!(3i64.pow(4), 81);
    }
}
