//! Smith normal form over the chain ring `O_K/p^W`.
//!
//! Pivots are chosen by minimal π-adic valuation; every other entry in the
//! pivot row and column is then an exact multiple of the pivot, so
//! elimination never needs a gcd.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Scalar;
use crate::scalar::Coefficient;

#[derive(Debug, Clone)]
pub struct Snf {
    /// `U·A·V = D`.
    pub u: Matrix<Scalar>,
    pub v: Matrix<Scalar>,
    pub u_inv: Matrix<Scalar>,
    pub v_inv: Matrix<Scalar>,
    pub d: Matrix<Scalar>,
    /// π-adic valuations of the nonzero diagonal entries, ascending.
    pub divisors: Vec<u32>,
    /// `e·(precision)`: entries of valuation at least this are zero.
    pub top: u32,
}

impl Snf {
    /// Number of divisors strictly below `guard`.
    pub fn rank_below(&self, guard: u32) -> usize {
        self.divisors.iter().filter(|&&v| v < guard).count()
    }
}

/// Divides `x` by `π^k` in the quotient ring; `x` must lie in `(π^k)`.
pub fn div_pi_pow(x: &Scalar, k: u32) -> Result<Scalar> {
    let mut y = x.clone();
    for _ in 0..k {
        y = y.div_pi_in_quotient()?;
    }
    Ok(y)
}

fn valuation(x: &Scalar) -> Result<Option<u32>> {
    x.pi_valuation()
}

pub fn snf(a: &Matrix<Scalar>) -> Result<Snf> {
    let proto = a.proto().clone();
    let ctx = proto.ctx().clone();
    if ctx.zdeg != 1 {
        return Err(Error::NotChainRing(
            "Smith normal form is implemented over O_K/p^N only".into(),
        ));
    }
    let prec = a.entries().iter().map(|x| x.prec()).min().unwrap_or(ctx.exp);
    let top = ctx.e as u32 * prec;
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m, &proto);
    let mut u_inv = Matrix::identity(m, &proto);
    let mut v = Matrix::identity(n, &proto);
    let mut v_inv = Matrix::identity(n, &proto);
    let mut divisors = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if let Some(val) = valuation(&d[(i, j)])? {
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut u_inv, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        swap_rows(&mut v_inv, t, pj);
        let unit = div_pi_pow(&d[(t, t)], val)?;
        let unit_inv = unit.inverse()?;
        for i in t + 1..m {
            if d[(i, t)].is_zero_at_prec() {
                continue;
            }
            let q = div_pi_pow(&d[(i, t)], val)? * unit_inv.clone();
            // row_i -= q·row_t
            add_row(&mut d, i, t, &-q.clone());
            add_row(&mut u, i, t, &-q.clone());
            add_col(&mut u_inv, t, i, &q);
        }
        for j in t + 1..n {
            if d[(t, j)].is_zero_at_prec() {
                continue;
            }
            let q = div_pi_pow(&d[(t, j)], val)? * unit_inv.clone();
            // col_j -= q·col_t
            add_col(&mut d, j, t, &-q.clone());
            add_col(&mut v, j, t, &-q.clone());
            add_row(&mut v_inv, t, j, &q);
        }
        divisors.push(val);
    }
    Ok(Snf {
        u,
        v,
        u_inv,
        v_inv,
        d,
        divisors,
        top,
    })
}

fn swap_rows(m: &mut Matrix<Scalar>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

fn swap_cols(m: &mut Matrix<Scalar>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

/// `row_dst += c·row_src`.
fn add_row(m: &mut Matrix<Scalar>, dst: usize, src: usize, c: &Scalar) {
    for j in 0..m.cols() {
        let s = m[(src, j)].clone();
        if !s.is_zero() {
            m[(dst, j)] = m[(dst, j)].clone() + c.clone() * s;
        }
    }
}

/// `col_dst += c·col_src`.
fn add_col(m: &mut Matrix<Scalar>, dst: usize, src: usize, c: &Scalar) {
    for i in 0..m.rows() {
        let s = m[(i, src)].clone();
        if !s.is_zero() {
            m[(i, dst)] = m[(i, dst)].clone() + s * c.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_base_ring, PrimeConfig, Ring};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, n: u32, e: Vec<i64>) -> Ring {
        make_base_ring(&PrimeConfig::new(p, n, e).unwrap()).unwrap()
    }

    #[test]
    fn one_by_one_examples() {
        let r = ring(3, 6, vec![-3, 1]);
        let m = Matrix::scalar(1, &Scalar::from_int(&r, -2));
        assert_eq!(snf(&m).unwrap().divisors, vec![0]);
        let m = Matrix::scalar(1, &Scalar::from_int(&r, 3));
        assert_eq!(snf(&m).unwrap().divisors, vec![1]);
        let r2 = ring(3, 6, vec![-3, 0, 1]);
        let m = Matrix::scalar(1, &Scalar::from_int(&r2, 3));
        assert_eq!(snf(&m).unwrap().divisors, vec![2]);
        let pi = Scalar::pi(&r2);
        let m = Matrix::diagonal(&[pi.pow(2), pi.clone()], &pi);
        assert_eq!(snf(&m).unwrap().divisors, vec![1, 2]);
    }

    #[test]
    fn reconstruction_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for e in [vec![-2i64, 1], vec![-2, 0, 1]] {
            let r = ring(2, 6, e);
            let z = Scalar::zero(&r);
            for rows in 1..=4 {
                for cols in 1..=4 {
                    let m = Matrix::from_fn(rows, cols, &z, |_, _| Scalar::random(&r, &mut rng) * Scalar::pi(&r));
                    let s = snf(&m).unwrap();
                    assert_eq!(s.u.clone() * m.clone() * s.v.clone(), s.d);
                    assert_eq!(s.u.clone() * s.u_inv.clone(), Matrix::identity(rows, &z));
                    assert_eq!(s.v.clone() * s.v_inv.clone(), Matrix::identity(cols, &z));
                    assert!(s.divisors.windows(2).all(|w| w[0] <= w[1]));
                }
            }
        }
    }

    #[test]
    fn cyclotomic_ring_is_rejected() {
        let r = crate::ring::adjoin_zeta(&ring(3, 4, vec![-3, 1])).unwrap();
        let m = Matrix::scalar(1, &Scalar::from_int(&r, 1));
        assert!(matches!(snf(&m), Err(Error::NotChainRing(_))));
    }
}
