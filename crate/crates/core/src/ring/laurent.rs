//! Laurent polynomials in `T_1, …, T_d` with a bound on each exponent.
//!
//! Products that would leave the box `|k_s| <= bound` are recorded in an
//! overflow flag instead of being dropped silently; [`LaurentPoly::checked_mul`]
//! turns the flag into an error.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::padic::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

#[derive(Clone)]
pub struct LaurentPoly {
    ring: Ring,
    d: usize,
    bound: i32,
    terms: BTreeMap<Vec<i32>, Scalar>,
    overflow: Option<i32>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Some(k) = self.overflow {
            write!(f, " [overflow at exponent {k}]")?;
        }
        Ok(())
    }
}

impl LaurentPoly {
    pub fn constant(c: Scalar, d: usize, bound: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero_at_prec() {
            terms.insert(vec![0; d], c.clone());
        }
        LaurentPoly {
            ring: c.ctx().clone(),
            d,
            bound,
            terms,
            overflow: None,
        }
    }

    pub fn monomial(c: Scalar, exps: Vec<i32>, bound: i32) -> Result<Self> {
        if let Some(&k) = exps.iter().find(|k| k.abs() > bound) {
            return Err(Error::Truncation {
                requested: k as i64,
                bound: bound as i64,
            });
        }
        let d = exps.len();
        let mut p = Self::constant(Scalar::zero(c.ctx()), d, bound);
        if !c.is_zero_at_prec() {
            p.terms.insert(exps, c);
        }
        Ok(p)
    }

    /// The variable `T_s` (0-based `s`).
    pub fn var(ring: &Ring, s: usize, d: usize, bound: i32) -> Self {
        let mut e = vec![0; d];
        e[s] = 1;
        Self::monomial(Scalar::from_int(ring, 1), e, bound).expect("bound >= 1")
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Scalar> {
        &self.terms
    }

    pub fn overflowed(&self) -> bool {
        self.overflow.is_some()
    }

    pub fn check(&self) -> Result<()> {
        match self.overflow {
            Some(k) => Err(Error::Truncation {
                requested: k as i64,
                bound: self.bound as i64,
            }),
            None => Ok(()),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let out = self.clone() * rhs.clone();
        out.check()?;
        Ok(out)
    }

    /// Specialization `T_s ↦ 1`, a ring homomorphism to the scalars.
    pub fn at_one(&self) -> Scalar {
        self.terms
            .values()
            .fold(Scalar::zero(&self.ring), |acc, c| acc + c.clone())
    }

    /// The constant coefficient when the polynomial has no `T`-dependence.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero(&self.ring)),
            1 => self.terms.get(&vec![0; self.d]).cloned(),
            _ => None,
        }
    }

    fn merge_overflow(a: Option<i32>, b: Option<i32>) -> Option<i32> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if x.abs() >= y.abs() { x } else { y }),
            (x, None) | (None, x) => x,
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| **k != 0)
                    .map(|(s, k)| format!("T{}^{}", s + 1, k))
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).terms.is_empty()
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (e, c) in rhs.terms {
            let sum = match self.terms.remove(&e) {
                Some(x) => x + c,
                None => c,
            };
            if !sum.is_zero_at_prec() {
                self.terms.insert(e, sum);
            }
        }
        self.overflow = Self::merge_overflow(self.overflow, rhs.overflow);
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::constant(Scalar::zero(&self.ring), self.d, self.bound);
        out.overflow = Self::merge_overflow(self.overflow, rhs.overflow);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if let Some(&k) = e.iter().find(|k| k.abs() > self.bound) {
                    out.overflow = Self::merge_overflow(out.overflow, Some(k));
                    continue;
                }
                let prod = ca.clone() * cb.clone();
                let sum = match out.terms.remove(&e) {
                    Some(x) => x + prod,
                    None => prod,
                };
                if !sum.is_zero_at_prec() {
                    out.terms.insert(e, sum);
                }
            }
        }
        out
    }
}

impl Coefficient for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::constant(Scalar::zero(&self.ring), self.d, self.bound)
    }

    fn one_like(&self) -> Self {
        LaurentPoly::constant(Scalar::from_int(&self.ring, 1), self.d, self.bound)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn scale_int(&self, n: i64) -> Self {
        let mut out = self.zero_like();
        out.overflow = self.overflow;
        for (e, c) in &self.terms {
            let s = c.scale_int(n);
            if !s.is_zero_at_prec() {
                out.terms.insert(e.clone(), s);
            }
        }
        out
    }

    fn div_int_exact(&self, n: i64) -> Option<Self> {
        let mut out = self.zero_like();
        out.overflow = self.overflow;
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.div_int_exact(n)?);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_base_ring, PrimeConfig};

    #[test]
    fn units_and_overflow() {
        let r = make_base_ring(&PrimeConfig::new(3, 4, vec![-3, 1]).unwrap()).unwrap();
        let t = LaurentPoly::var(&r, 0, 2, 2);
        let tinv = LaurentPoly::monomial(Scalar::from_int(&r, 1), vec![-1, 0], 2).unwrap();
        assert_eq!(t.checked_mul(&tinv).unwrap(), t.one_like());
        let t2 = t.checked_mul(&t).unwrap();
        assert!(matches!(t2.checked_mul(&t), Err(Error::Truncation { requested: 3, bound: 2 })));
        assert!(LaurentPoly::monomial(Scalar::from_int(&r, 1), vec![0, 3], 2).is_err());
    }

    #[test]
    fn specialization_is_multiplicative() {
        let r = make_base_ring(&PrimeConfig::new(5, 4, vec![-5, 1]).unwrap()).unwrap();
        let t = LaurentPoly::var(&r, 0, 1, 4);
        let f = t.clone().scale_int(3) + t.one_like().scale_int(2);
        let g = t.clone() * t.clone() - t.one_like();
        assert_eq!((f.clone() * g.clone()).at_one(), f.at_one() * g.at_one());
    }
}
