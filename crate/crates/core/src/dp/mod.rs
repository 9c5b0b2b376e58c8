//! Truncated divided-power polynomial rings `R{X_i, Y_{s,i} | 1 <= i <= n}`.
//!
//! A monomial `∏ V^{[k_V]}` is stored as its exponent vector in the variable
//! layout of a [`Shape`]. Multiplication follows
//! `V^{[i]}·V^{[j]} = binom(i+j, i)·V^{[i+j]}`; anything above the total degree
//! bound is discarded and the result is flagged as truncated.

mod binomial_basis;
mod maps;
mod simplicial;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{binomial, Coefficient};

pub use binomial_basis::{binomial_to_dp, dp_to_binomial, pascal_shift, BinomialPoly};
pub use maps::{degeneracy, face, face_corrupted, HomSpec, VarImage};
pub use simplicial::{verify_simplicial_identities, SimplicialReport, SimplicialWitness};
pub use text::{format_monomial, parse_monomial};

/// Variable layout and truncation of a cosimplicial dp-ring level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    /// Cosimplicial degree: variables are indexed `1..=n`.
    pub n: usize,
    /// Number of geometric blocks `Y_{s,·}`.
    pub d: usize,
    /// Whether the arithmetic variables `X_i` are present.
    pub arith: bool,
    /// Total degree bound `D`.
    pub degree: u32,
}

/// A named variable, 1-based as in the notation `X_j`, `Y_{s,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X(usize),
    Y(usize, usize),
}

impl Shape {
    pub fn arith(n: usize, d: usize, degree: u32) -> Self {
        Shape { n, d, arith: true, degree }
    }

    pub fn geo(n: usize, d: usize, degree: u32) -> Self {
        Shape { n, d, arith: false, degree }
    }

    pub fn with_n(self, n: usize) -> Self {
        Shape { n, ..self }
    }

    fn x_count(&self) -> usize {
        if self.arith {
            self.n
        } else {
            0
        }
    }

    pub fn nvars(&self) -> usize {
        self.x_count() + self.d * self.n
    }

    pub fn index(&self, v: Var) -> usize {
        match v {
            Var::X(j) => {
                assert!(self.arith && (1..=self.n).contains(&j), "no variable X{j}");
                j - 1
            }
            Var::Y(s, j) => {
                assert!((1..=self.d).contains(&s) && (1..=self.n).contains(&j), "no variable Y{s},{j}");
                self.x_count() + (s - 1) * self.n + (j - 1)
            }
        }
    }

    pub fn var(&self, idx: usize) -> Var {
        let xc = self.x_count();
        if idx < xc {
            Var::X(idx + 1)
        } else {
            let k = idx - xc;
            Var::Y(k / self.n + 1, k % self.n + 1)
        }
    }

    /// Every exponent vector of total degree `<= max_degree`, in canonical order.
    pub fn monomials(&self, max_degree: u32) -> Vec<Vec<u32>> {
        let nv = self.nvars();
        let mut out = Vec::new();
        for deg in 0..=max_degree {
            let mut cur = vec![0u32; nv];
            compositions(&mut cur, 0, deg, &mut out);
        }
        out
    }
}

fn compositions(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= cur.len() {
        if cur.is_empty() {
            if remaining == 0 {
                out.push(Vec::new());
            }
            return;
        }
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k;
        compositions(cur, pos + 1, remaining - k, out);
    }
    cur[pos] = 0;
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Canonical monomial order: total degree, then descending lexicographic.
pub fn canonical_cmp(a: &[u32], b: &[u32]) -> Ordering {
    total_degree(a)
        .cmp(&total_degree(b))
        .then_with(|| b.cmp(a))
}

#[derive(Clone)]
pub struct DpPoly<C> {
    shape: Shape,
    proto: C,
    terms: BTreeMap<Vec<u32>, C>,
    truncated: bool,
}

impl<C: Coefficient> fmt::Debug for DpPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.canonical_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*{}", c, format_monomial(&self.shape, e))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<C: Coefficient> DpPoly<C> {
    pub fn zero(shape: Shape, proto: &C) -> Self {
        DpPoly {
            shape,
            proto: proto.zero_like(),
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn constant(shape: Shape, c: C) -> Self {
        let mut p = Self::zero(shape, &c);
        p.insert_add(vec![0; shape.nvars()], c);
        p
    }

    /// `c · m`; fails if the monomial exceeds the degree bound.
    pub fn monomial(shape: Shape, exps: Vec<u32>, c: C) -> Result<Self> {
        if exps.len() != shape.nvars() {
            return Err(Error::Dimension(format!(
                "exponent vector of length {} for {} variables",
                exps.len(),
                shape.nvars()
            )));
        }
        let deg = total_degree(&exps);
        if deg > shape.degree {
            return Err(Error::Truncation {
                requested: deg as i64,
                bound: shape.degree as i64,
            });
        }
        let mut p = Self::zero(shape, &c);
        p.insert_add(exps, c);
        Ok(p)
    }

    /// `V^{[k]}` with coefficient `c`.
    pub fn var_power(shape: Shape, v: Var, k: u32, c: C) -> Result<Self> {
        let mut e = vec![0; shape.nvars()];
        e[shape.index(v)] = k;
        Self::monomial(shape, e, c)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(|| self.proto.zero_like())
    }

    pub fn canonical_terms(&self) -> Vec<(&Vec<u32>, &C)> {
        let mut v: Vec<_> = self.terms.iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| canonical_cmp(a.0, b.0));
        v
    }

    pub fn is_zero_poly(&self) -> bool {
        self.terms.values().all(C::is_zero)
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        let mut p = Self::zero(self.shape, &self.proto);
        for (e, c) in &self.terms {
            if total_degree(e) == k {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn insert_add(&mut self, e: Vec<u32>, c: C) {
        if total_degree(&e) > self.shape.degree {
            if !c.is_zero() {
                self.truncated = true;
            }
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

    pub fn map_coeffs<D: Coefficient>(&self, proto: &D, f: impl Fn(&C) -> D) -> DpPoly<D> {
        let mut p = DpPoly::zero(self.shape, proto);
        p.truncated = self.truncated;
        for (e, c) in &self.terms {
            p.insert_add(e.clone(), f(c));
        }
        p
    }

    /// `c · self` with `c` on the left of every coefficient.
    pub fn scale_left(&self, c: &C) -> Self {
        self.map_coeffs(&self.proto, |x| c.clone() * x.clone())
    }

    pub fn scale_right(&self, c: &C) -> Self {
        self.map_coeffs(&self.proto, |x| x.clone() * c.clone())
    }

    /// Same polynomial viewed in a ring with more variables, where
    /// `positions[v]` is the target index of variable `v`.
    pub fn embed(&self, target: Shape, positions: &[usize]) -> Self {
        let mut p = Self::zero(target, &self.proto);
        p.truncated = self.truncated;
        for (e, c) in &self.terms {
            let mut t = vec![0; target.nvars()];
            for (v, &k) in e.iter().enumerate() {
                t[positions[v]] += k;
            }
            p.insert_add(t, c.clone());
        }
        p
    }

    /// First monomial (canonical order) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<u32>, C)> {
        let diff = self.clone() - other.clone();
        diff.canonical_terms()
            .first()
            .map(|(e, c)| ((*e).clone(), (*c).clone()))
    }

    /// Evaluates with all variables set to zero.
    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.shape.nvars()])
    }
}

impl<C: Coefficient> PartialEq for DpPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && (self.clone() - other.clone()).is_zero_poly()
    }
}

impl<C: Coefficient> Add for DpPoly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.shape, rhs.shape, "adding dp-polynomials of different shapes");
        self.truncated |= rhs.truncated;
        for (e, c) in rhs.terms {
            self.insert_add(e, c);
        }
        self
    }
}

impl<C: Coefficient> Sub for DpPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Neg for DpPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        let proto = self.proto.clone();
        self.map_coeffs(&proto, |c| -c.clone())
    }
}

impl<C: Coefficient> Mul for DpPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.shape, rhs.shape, "multiplying dp-polynomials of different shapes");
        let mut out = Self::zero(self.shape, &self.proto);
        out.truncated = self.truncated || rhs.truncated;
        let bound = self.shape.degree;
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &rhs.terms {
                if da + total_degree(eb) > bound {
                    out.truncated = true;
                    continue;
                }
                let mut mult: i64 = 1;
                let e: Vec<u32> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&x, &y)| {
                        mult *= binomial((x + y) as u64, x as u64);
                        x + y
                    })
                    .collect();
                let c = ca.clone() * cb.clone();
                out.insert_add(e, if mult == 1 { c } else { c.scale_int(mult) });
            }
        }
        out
    }
}

impl<C: Coefficient> Coefficient for DpPoly<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.shape, &self.proto)
    }

    fn one_like(&self) -> Self {
        Self::constant(self.shape, self.proto.one_like())
    }

    fn is_zero(&self) -> bool {
        self.is_zero_poly()
    }

    fn scale_int(&self, n: i64) -> Self {
        self.map_coeffs(&self.proto, |c| c.scale_int(n))
    }

    fn div_int_exact(&self, n: i64) -> Option<Self> {
        let mut p = Self::zero(self.shape, &self.proto);
        p.truncated = self.truncated;
        for (e, c) in &self.terms {
            p.insert_add(e.clone(), c.div_int_exact(n)?);
        }
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_power_product_rule() {
        let s = Shape::arith(1, 0, 6);
        for i in 0..=3u32 {
            for j in 0..=3u32 {
                let a = DpPoly::var_power(s, Var::X(1), i, 1i64).unwrap();
                let b = DpPoly::var_power(s, Var::X(1), j, 1i64).unwrap();
                let expect = DpPoly::var_power(s, Var::X(1), i + j, binomial((i + j) as u64, i as u64)).unwrap();
                assert_eq!(a * b, expect);
            }
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let s = Shape::arith(1, 0, 3);
        let x2 = DpPoly::var_power(s, Var::X(1), 2, 1i64).unwrap();
        let p = x2.clone() * x2;
        assert!(p.is_zero_poly());
        assert!(p.truncated());
        assert!(DpPoly::var_power(s, Var::X(1), 4, 1i64).is_err());
    }

    #[test]
    fn layout_and_order() {
        let s = Shape::arith(2, 2, 4);
        assert_eq!(s.nvars(), 6);
        assert_eq!(s.index(Var::Y(2, 1)), 4);
        assert_eq!(s.var(3), Var::Y(1, 2));
        let ms = s.monomials(2);
        assert_eq!(ms.len(), 28);
        assert_eq!(ms[1], vec![1, 0, 0, 0, 0, 0]);
        assert!(ms.windows(2).all(|w| canonical_cmp(&w[0], &w[1]) == Ordering::Less));
    }
}
