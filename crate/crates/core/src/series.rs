//! The operator binomial series `(1 - aZ)^{-φ/a} = Σ_k ∏_{j<k}(φ + ja)·Z^{[k]}`.

use crate::dp::{DpPoly, Shape, Var};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{factorial, Coefficient};

/// `∏_{j<k}(φ + ja)` for `k = 0..=kmax`.
pub fn pochhammer<C: Coefficient>(phi: &Matrix<C>, a: &C, kmax: usize) -> Vec<Matrix<C>> {
    let n = phi.rows();
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(Matrix::identity(n, phi.proto()));
    for j in 0..kmax {
        let shifted = phi.clone() + Matrix::scalar(n, &a.scale_int(j as i64));
        let next = out[j].clone() * shifted;
        out.push(next);
    }
    out
}

/// The series with a divided-power variable: `Σ_k ∏_{j<k}(φ + ja) V^{[k]}`
/// up to the degree bound of `shape`. No division occurs.
pub fn op_binomial_series_symbolic<C: Coefficient>(
    phi: &Matrix<C>,
    a: &C,
    shape: Shape,
    var: Var,
) -> DpPoly<Matrix<C>> {
    let prods = pochhammer(phi, a, shape.degree as usize);
    let mut out = DpPoly::zero(shape, &prods[0]);
    for (k, m) in prods.into_iter().enumerate() {
        let mut e = vec![0; shape.nvars()];
        e[shape.index(var)] = k as u32;
        out.insert_add(e, m);
    }
    out
}

#[derive(Debug, Clone)]
pub struct SeriesSum<C> {
    pub sum: Matrix<C>,
    /// Index of the last nonzero term.
    pub last_term: usize,
}

/// The series at a scalar `z`: `Σ_k ∏_{j<k}(φ + ja)·z^k/k!`.
///
/// Summation stops after `window` consecutive vanishing terms; if that never
/// happens before `max_index`, the series is reported as non-convergent.
pub fn op_binomial_series_scalar<C: Coefficient>(
    phi: &Matrix<C>,
    a: &C,
    z: &C,
    max_index: usize,
    window: usize,
) -> Result<SeriesSum<C>> {
    let n = phi.rows();
    let mut sum = Matrix::identity(n, phi.proto());
    let mut prod = Matrix::identity(n, phi.proto());
    let mut z_pow = z.one_like();
    let mut zeros = 0;
    let mut last_term = 0;
    for k in 1..=max_index {
        let shifted = phi.clone() + Matrix::scalar(n, &a.scale_int(k as i64 - 1));
        prod = prod * shifted;
        z_pow = z_pow * z.clone();
        let numer = prod.scale(&z_pow);
        let term = numer
            .div_int_exact(factorial_checked(k)?)
            .ok_or_else(|| Error::NotDivisible(format!("{k}! in binomial series term")))?;
        if term.is_zero_matrix() {
            zeros += 1;
            if zeros >= window.max(1) {
                return Ok(SeriesSum { sum, last_term });
            }
        } else {
            zeros = 0;
            last_term = k;
            sum = sum + term;
        }
    }
    Err(Error::NonConvergence { max_index })
}

fn factorial_checked(k: usize) -> Result<i64> {
    if k > 20 {
        return Err(Error::NonConvergence { max_index: k });
    }
    Ok(factorial(k as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_base_ring, PrimeConfig, Scalar};

    #[test]
    fn zero_operator_gives_identity() {
        let shape = Shape::arith(1, 0, 4);
        let phi = Matrix::zeros(2, 2, &0i64);
        let s = op_binomial_series_symbolic(&phi, &1, shape, Var::X(1));
        assert_eq!(s, DpPoly::constant(shape, Matrix::identity(2, &0i64)));
    }

    #[test]
    fn bk_twist_series_is_binomial_expansion() {
        let r = make_base_ring(&PrimeConfig::new(2, 8, vec![-2, 1]).unwrap()).unwrap();
        let a = Scalar::e_prime_at_pi(&r);
        let shape = Shape::arith(1, 0, 4);
        for n in 1..=3i64 {
            let phi = Matrix::scalar(1, &a.scale_int(-n));
            let s = op_binomial_series_symbolic(&phi, &a, shape, Var::X(1));
            assert_eq!(s.coeff(&[1])[(0, 0)], a.scale_int(-n));
            // (1 - X)^n has X^{[k]} coefficient (-1)^k k! binom(n, k)
            for k in 0..=4u64 {
                let expect = crate::scalar::binomial(n as u64, k) * factorial(k) * if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(s.coeff(&[k as u32])[(0, 0)], Scalar::from_int(&r, expect));
            }
        }
    }

    #[test]
    fn diagonal_products() {
        let phi = Matrix::diagonal(&[0i64, 1], &0);
        let prods = pochhammer(&phi, &1, 2);
        assert_eq!(prods[2], Matrix::diagonal(&[0i64, 2], &0));
    }

    #[test]
    fn scalar_series_terminates_within_bound() {
        for (p, z_int) in [(3u64, 3i64), (5, 5), (2, 4)] {
            let n = 6u32;
            let r = make_base_ring(&PrimeConfig::unramified(p, n).unwrap()).unwrap();
            let a = Scalar::e_prime_at_pi(&r);
            let phi = Matrix::diagonal(&[Scalar::from_int(&r, 0), Scalar::from_int(&r, 2)], &a);
            let z = Scalar::from_int(&r, z_int);
            let vz = crate::scalar::vp_int(z_int, p) as f64;
            let pm1 = (p - 1) as f64;
            let bound = (n as f64 * pm1 / (pm1 * vz - 1.0)).ceil() as usize + 4;
            let s = op_binomial_series_scalar(&phi, &a, &z, 20, (p - 1) as usize).unwrap();
            assert!(s.last_term <= bound, "p={p}: last term {} > {bound}", s.last_term);
        }
    }
}
