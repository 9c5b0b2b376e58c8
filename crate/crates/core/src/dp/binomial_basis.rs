//! Polynomials in `Y_1, …, Y_d` written in the binomial basis
//! `∏ binom(Y_i, n_i)`, and the change of basis to divided powers.
//!
//! `binom(Y, n) = Σ_k s(n, k)·(k!/n!)·Y^{[k]}` and
//! `Y^{[k]} = Σ_n S(k, n)·(n!/k!)·binom(Y, n)`; neither direction is integral
//! in general, so conversions divide exactly and fail when they cannot.

use std::collections::BTreeMap;

use super::{DpPoly, Shape, Var};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Coefficient};

#[derive(Debug, Clone)]
pub struct BinomialPoly<C> {
    pub d: usize,
    pub degree: u32,
    proto: C,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coefficient> BinomialPoly<C> {
    pub fn zero(d: usize, degree: u32, proto: &C) -> Self {
        BinomialPoly {
            d,
            degree,
            proto: proto.zero_like(),
            terms: BTreeMap::new(),
        }
    }

    pub fn insert_add(&mut self, e: Vec<u32>, c: C) {
        if e.iter().sum::<u32>() > self.degree {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(x) => x + c,
            None => c,
        };
        if !sum.is_exact_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(|| self.proto.zero_like())
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.d, self.degree, &self.proto);
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), f(c));
        }
        out
    }
}

impl<C: Coefficient> PartialEq for BinomialPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|e| self.coeff(e) == other.coeff(e))
    }
}

/// Signed Stirling numbers of the first kind `s(n, k)`.
fn stirling1(max: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; max + 1]; max + 1];
    s[0][0] = 1;
    for n in 1..=max {
        for k in 1..=n {
            s[n][k] = s[n - 1][k - 1] - (n as i64 - 1) * s[n - 1][k];
        }
    }
    s
}

/// Stirling numbers of the second kind `S(n, k)`.
fn stirling2(max: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; max + 1]; max + 1];
    s[0][0] = 1;
    for n in 1..=max {
        for k in 1..=n {
            s[n][k] = s[n - 1][k - 1] + k as i64 * s[n - 1][k];
        }
    }
    s
}

/// Expands a product over coordinates of one-variable change-of-basis rows.
fn convert<C: Coefficient>(
    terms: &BTreeMap<Vec<u32>, C>,
    d: usize,
    row: impl Fn(u32) -> Vec<(u32, i64, i64)>,
    mut emit: impl FnMut(Vec<u32>, C),
) -> Result<()> {
    for (e, c) in terms {
        let mut partial: Vec<(Vec<u32>, i64, i64)> = vec![(Vec::new(), 1, 1)];
        for &n in e.iter().take(d) {
            let mut next = Vec::new();
            for (prefix, num, den) in &partial {
                for &(k, rn, rd) in &row(n) {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push((p, num * rn, den * rd));
                }
            }
            partial = next;
        }
        for (target, num, den) in partial {
            let v = c
                .scale_int(num)
                .div_int_exact(den)
                .ok_or_else(|| Error::NotDivisible(format!("{den} in basis change")))?;
            emit(target, v);
        }
    }
    Ok(())
}

/// Rewrites `Σ c_n binom(Y, n)` in the divided-power basis of a geometric
/// shape at level 1 (variables `Y_{s,1}`).
pub fn binomial_to_dp<C: Coefficient>(b: &BinomialPoly<C>, shape: Shape) -> Result<DpPoly<C>> {
    assert_eq!((shape.n, shape.d), (1, b.d), "target must be level 1 with matching d");
    let s1 = stirling1(b.degree as usize);
    let mut out = DpPoly::zero(shape, b.proto());
    convert(
        b.terms(),
        b.d,
        |n| {
            (0..=n)
                .filter(|&k| s1[n as usize][k as usize] != 0)
                .map(|k| (k, s1[n as usize][k as usize] * factorial(k as u64), factorial(n as u64)))
                .collect()
        },
        |ks, v| {
            let mut e = vec![0; shape.nvars()];
            for (s, k) in ks.into_iter().enumerate() {
                e[shape.index(Var::Y(s + 1, 1))] = k;
            }
            out.insert_add(e, v);
        },
    )?;
    Ok(out)
}

/// Inverse of [`binomial_to_dp`].
pub fn dp_to_binomial<C: Coefficient>(p: &DpPoly<C>) -> Result<BinomialPoly<C>> {
    let shape = p.shape();
    assert_eq!(shape.n, 1, "source must be level 1");
    let s2 = stirling2(shape.degree as usize);
    let mut terms = BTreeMap::new();
    for (e, c) in p.terms() {
        let ys: Vec<u32> = (1..=shape.d).map(|s| e[shape.index(Var::Y(s, 1))]).collect();
        if shape.arith && e[shape.index(Var::X(1))] != 0 {
            return Err(Error::Dimension("binomial basis has no arithmetic variable".into()));
        }
        terms.insert(ys, c.clone());
    }
    let mut out = BinomialPoly::zero(shape.d, shape.degree, p.proto());
    convert(
        &terms,
        shape.d,
        |k| {
            (0..=k)
                .filter(|&n| s2[k as usize][n as usize] != 0)
                .map(|n| (n, s2[k as usize][n as usize] * factorial(n as u64), factorial(k as u64)))
                .collect()
        },
        |ns, v| out.insert_add(ns, v),
    )?;
    Ok(out)
}

/// The substitution `Y_i ↦ Y_i + 1`, via `binom(Y+1, n) = binom(Y, n) + binom(Y, n-1)`.
pub fn pascal_shift<C: Coefficient>(b: &BinomialPoly<C>, i: usize) -> BinomialPoly<C> {
    let mut out = BinomialPoly::zero(b.d, b.degree, b.proto());
    for (e, c) in b.terms() {
        out.insert_add(e.clone(), c.clone());
        if e[i] > 0 {
            let mut lower = e.clone();
            lower[i] -= 1;
            out.insert_add(lower, c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn round_trip_over_rationals() {
        let shape = Shape::geo(1, 2, 5);
        let mut b = BinomialPoly::zero(2, 5, &q(0));
        b.insert_add(vec![2, 1], q(3));
        b.insert_add(vec![0, 4], q(-1));
        b.insert_add(vec![1, 0], q(7));
        let dp = binomial_to_dp(&b, shape).unwrap();
        assert_eq!(dp_to_binomial(&dp).unwrap(), b);
    }

    #[test]
    fn binom_y_2_in_dp_basis() {
        // binom(Y, 2) = Y^{[2]} - Y/2
        let shape = Shape::geo(1, 1, 4);
        let mut b = BinomialPoly::zero(1, 4, &q(0));
        b.insert_add(vec![2], q(1));
        let dp = binomial_to_dp(&b, shape).unwrap();
        assert_eq!(dp.coeff(&[2]), q(1));
        assert_eq!(dp.coeff(&[1]), BigRational::new((-1).into(), 2.into()));
        // not integral over Z
        let mut bi = BinomialPoly::zero(1, 4, &0i64);
        bi.insert_add(vec![2], 1);
        assert!(binomial_to_dp(&bi, shape).is_err());
    }

    #[test]
    fn pascal_shift_is_translation() {
        // evaluate Σ c_n binom(y, n) at integers before and after the shift
        let mut b = BinomialPoly::zero(1, 4, &0i64);
        b.insert_add(vec![3], 2);
        b.insert_add(vec![1], -5);
        let eval = |p: &BinomialPoly<i64>, y: u64| -> i64 {
            p.terms()
                .iter()
                .map(|(e, c)| c * crate::scalar::binomial(y, e[0] as u64))
                .sum()
        };
        let s = pascal_shift(&b, 0);
        for y in 0..6 {
            assert_eq!(eval(&s, y), eval(&b, y + 1));
        }
    }
}
