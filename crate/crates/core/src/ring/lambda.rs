//! Truncated Laurent series in a formal invertible variable `λ` over the
//! cyclotomic ring.
//!
//! A series stores coefficients from degree `lo` upward together with
//! `valid_to`, the largest degree whose coefficient is exact. Products keep
//! only the exact range, so identities between truncated series hold exactly
//! rather than up to an unknown tail.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::padic::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

#[derive(Clone)]
pub struct LambdaSeries {
    ring: Ring,
    bound: i64,
    lo: i64,
    coeffs: Vec<Scalar>,
    valid_to: i64,
}

/// Zero at full working precision, so dropping it loses nothing.
fn negligible(c: &Scalar) -> bool {
    c.prec() >= c.ctx().exp && c.is_zero_at_prec()
}

impl fmt::Debug for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (exact to λ^{})", self, self.valid_to)
    }
}

impl LambdaSeries {
    pub fn constant(c: Scalar, bound: i64) -> Self {
        LambdaSeries {
            ring: c.ctx().clone(),
            bound,
            lo: 0,
            coeffs: vec![c],
            valid_to: bound,
        }
    }

    pub fn zero(ring: &Ring, bound: i64) -> Self {
        Self::constant(Scalar::zero(ring), bound)
    }

    /// `c·λ^k`; fails when `|k|` exceeds the degree bound.
    pub fn monomial(c: Scalar, k: i64, bound: i64) -> Result<Self> {
        if k.abs() > bound {
            return Err(Error::Truncation { requested: k, bound });
        }
        Ok(LambdaSeries {
            ring: c.ctx().clone(),
            bound,
            lo: k,
            coeffs: vec![c],
            valid_to: bound,
        })
    }

    pub fn lambda(ring: &Ring, bound: i64) -> Self {
        Self::monomial(Scalar::from_int(ring, 1), 1, bound).expect("bound >= 1")
    }

    pub fn lambda_inv(ring: &Ring, bound: i64) -> Self {
        Self::monomial(Scalar::from_int(ring, 1), -1, bound).expect("bound >= 1")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn valid_to(&self) -> i64 {
        self.valid_to
    }

    /// Lowest degree that may carry a nonzero coefficient.
    pub fn low_degree(&self) -> i64 {
        self.lo
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        if k < self.lo || k > self.valid_to {
            return Scalar::zero(&self.ring);
        }
        self.coeffs
            .get((k - self.lo) as usize)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.ring))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        let lo = self.lo;
        let hi = self.valid_to;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (lo + i as i64, c))
            .filter(move |(k, _)| *k <= hi)
    }

    fn from_parts(ring: Ring, bound: i64, lo: i64, mut coeffs: Vec<Scalar>, valid_to: i64) -> Self {
        let valid_to = valid_to.min(bound);
        let keep = (valid_to - lo + 1).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = LambdaSeries {
            ring,
            bound,
            lo,
            coeffs,
            valid_to,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.len() > 1 && negligible(&self.coeffs[0]) {
            self.coeffs.remove(0);
            self.lo += 1;
        }
        while self.coeffs.len() > 1 && negligible(self.coeffs.last().unwrap()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Scalar::zero(&self.ring));
        }
    }

    /// Minimal p-adic valuation over the exact coefficients.
    pub fn coeff_valuation(&self) -> Option<u32> {
        self.coeffs().filter_map(|(_, c)| c.coeff_valuation()).min()
    }

    pub fn min_prec(&self) -> u32 {
        self.coeffs().map(|(_, c)| c.prec()).min().unwrap_or(self.ring.exp)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let coeffs = self.coeffs.iter().map(f).collect();
        Self::from_parts(self.ring.clone(), self.bound, self.lo, coeffs, self.valid_to)
    }

    /// Inverse of `1 + t` for `t` of positive λ-order, as a geometric series.
    pub fn inverse_one_plus(t: &LambdaSeries) -> Result<Self> {
        if !t.is_zero_series() && t.lo < 1 {
            return Err(Error::NotUnit);
        }
        let one = LambdaSeries::constant(Scalar::from_int(&t.ring, 1), t.bound);
        let neg = -t.clone();
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..t.bound.max(0) {
            power = power * neg.clone();
            if power.is_zero_series() {
                break;
            }
            acc = acc + power.clone();
        }
        Ok(acc)
    }

    /// Inverse of a series whose lowest coefficient is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.coeff(self.lo);
        let lead_inv = lead.inverse()?;
        let shift = LambdaSeries::monomial(lead_inv, -self.lo, self.bound)?;
        let normed = self.clone() * shift.clone();
        let one = LambdaSeries::constant(Scalar::from_int(&self.ring, 1), self.bound);
        let tail = normed - one;
        Ok(LambdaSeries::inverse_one_plus(&tail)? * shift)
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs().all(|(_, c)| c.is_zero_at_prec())
    }

    /// `Σ c_k x^k`, substituting a series `x` of positive order for `λ`.
    /// Negative powers use `x^{-1}`, which must be supplied.
    pub fn substitute(&self, x: &LambdaSeries, x_inv: Option<&LambdaSeries>) -> Result<Self> {
        let mut acc = LambdaSeries::zero(&self.ring, self.bound);
        acc.valid_to = self.bound;
        let one = LambdaSeries::constant(Scalar::from_int(&self.ring, 1), self.bound);
        for (k, c) in self.coeffs() {
            if negligible(c) {
                continue;
            }
            let base = if k >= 0 {
                x.clone()
            } else {
                x_inv.ok_or(Error::NotUnit)?.clone()
            };
            let term = one.clone().scale_scalar(c) * base.pow(k.unsigned_abs() as u32);
            acc = acc + term;
        }
        // Coefficients beyond the input's exact range are unknown after substitution.
        let lost = (self.valid_to + 1) * x.lo.max(1) - 1;
        acc.valid_to = acc.valid_to.min(lost);
        let lo = acc.lo;
        let coeffs = std::mem::take(&mut acc.coeffs);
        Ok(Self::from_parts(acc.ring, acc.bound, lo, coeffs, acc.valid_to))
    }

    /// `Σ c_k x^k` for a series `x` of order one, given `powers[k] = x^k`.
    pub fn substitute_with_powers(&self, powers: &[LambdaSeries]) -> Result<Self> {
        let mut acc = LambdaSeries::zero(&self.ring, self.bound);
        for (k, c) in self.coeffs() {
            if negligible(c) {
                continue;
            }
            let x = usize::try_from(k)
                .ok()
                .and_then(|k| powers.get(k))
                .ok_or(Error::Truncation {
                    requested: k,
                    bound: powers.len() as i64 - 1,
                })?;
            acc = acc + x.clone().scale_scalar(c);
        }
        let valid_to = acc.valid_to.min(self.valid_to);
        let lo = acc.lo;
        let coeffs = std::mem::take(&mut acc.coeffs);
        Ok(Self::from_parts(acc.ring, acc.bound, lo, coeffs, valid_to))
    }

    pub fn scale_scalar(self, c: &Scalar) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs() {
            if negligible(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*λ")?,
                _ => write!(f, "({c})*λ^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for LambdaSeries {
    fn eq(&self, other: &Self) -> bool {
        let hi = self.valid_to.min(other.valid_to);
        let lo = self.lo.min(other.lo);
        (lo..=hi).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl Add for LambdaSeries {
    type Output = LambdaSeries;
    fn add(self, rhs: LambdaSeries) -> LambdaSeries {
        let lo = self.lo.min(rhs.lo);
        let valid_to = self.valid_to.min(rhs.valid_to);
        let hi = (self.lo + self.coeffs.len() as i64 - 1)
            .max(rhs.lo + rhs.coeffs.len() as i64 - 1)
            .min(valid_to);
        let coeffs = (lo..=hi.max(lo)).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Self::from_parts(self.ring, self.bound.min(rhs.bound), lo, coeffs, valid_to)
    }
}

impl Sub for LambdaSeries {
    type Output = LambdaSeries;
    fn sub(self, rhs: LambdaSeries) -> LambdaSeries {
        self + (-rhs)
    }
}

impl Neg for LambdaSeries {
    type Output = LambdaSeries;
    fn neg(self) -> LambdaSeries {
        self.map_coeffs(|c| -c.clone())
    }
}

impl Mul for LambdaSeries {
    type Output = LambdaSeries;
    fn mul(self, rhs: LambdaSeries) -> LambdaSeries {
        let bound = self.bound.min(rhs.bound);
        let lo = self.lo + rhs.lo;
        let valid_to = (self.valid_to + rhs.lo).min(rhs.valid_to + self.lo).min(bound);
        let len = (valid_to - lo + 1).max(1) as usize;
        let mut coeffs = vec![Scalar::zero(&self.ring); len];
        for (i, a) in self.coeffs() {
            if negligible(a) {
                continue;
            }
            for (j, b) in rhs.coeffs() {
                let k = i + j;
                if k > valid_to {
                    break;
                }
                let slot = &mut coeffs[(k - lo) as usize];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        Self::from_parts(self.ring, bound, lo, coeffs, valid_to)
    }
}

impl Coefficient for LambdaSeries {
    fn zero_like(&self) -> Self {
        LambdaSeries::zero(&self.ring, self.bound)
    }

    fn one_like(&self) -> Self {
        LambdaSeries::constant(Scalar::from_int(&self.ring, 1), self.bound)
    }

    fn is_zero(&self) -> bool {
        self.is_zero_series()
    }

    fn is_exact_zero(&self) -> bool {
        self.valid_to >= self.bound && self.coeffs.iter().all(negligible)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.map_coeffs(|c| c.scale_int(n))
    }

    fn div_int_exact(&self, n: i64) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.div_int_exact(n)?);
        }
        Some(Self::from_parts(self.ring.clone(), self.bound, self.lo, out, self.valid_to))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{adjoin_zeta, make_base_ring, PrimeConfig};

    fn cyc(p: u64, n: u32, e: Vec<i64>) -> Ring {
        adjoin_zeta(&make_base_ring(&PrimeConfig::new(p, n, e).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn lambda_is_invertible() {
        let r = cyc(3, 6, vec![-3, 1]);
        let l = LambdaSeries::lambda(&r, 10);
        let li = LambdaSeries::lambda_inv(&r, 10);
        assert_eq!(l * li, LambdaSeries::constant(Scalar::from_int(&r, 1), 10));
    }

    #[test]
    fn degree_bound_is_enforced() {
        let r = cyc(3, 6, vec![-3, 1]);
        let err = LambdaSeries::monomial(Scalar::from_int(&r, 1), 11, 10).unwrap_err();
        assert_eq!(err, Error::Truncation { requested: 11, bound: 10 });
    }

    #[test]
    fn geometric_inverse() {
        for (p, e) in [(2u64, vec![-2i64, 1]), (3, vec![-3, 1]), (5, vec![-5, 0, 1])] {
            let r = cyc(p, 6, e);
            let pi = Scalar::pi(&r);
            let a = Scalar::e_prime_at_pi(&r);
            let zm1 = Scalar::zeta(&r) - Scalar::from_int(&r, 1);
            let s = pi * a * zm1;
            let t = LambdaSeries::lambda(&r, 10).scale_scalar(&s);
            let one = LambdaSeries::constant(Scalar::from_int(&r, 1), 10);
            let inv = LambdaSeries::inverse_one_plus(&t).unwrap();
            assert_eq!((one.clone() + t) * inv, one);
        }
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let r = cyc(5, 4, vec![-5, 1]);
        let l = LambdaSeries::lambda(&r, 8);
        let two = Scalar::from_int(&r, 2);
        let x = l.clone().scale_scalar(&two) + l.clone().pow(2).scale_scalar(&Scalar::from_int(&r, 5));
        let f = l.clone() + LambdaSeries::constant(Scalar::from_int(&r, 3), 8);
        let g = l.clone().pow(3) - l.clone();
        let lhs = (f.clone() * g.clone()).substitute(&x, None).unwrap();
        let rhs = f.substitute(&x, None).unwrap() * g.substitute(&x, None).unwrap();
        assert_eq!(lhs, rhs);
    }
}
