//! Dense matrices over any [`Coefficient`] type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

#[derive(Clone)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    proto: C,
    data: Vec<C>,
}

impl<C: fmt::Debug> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<C> std::ops::Index<(usize, usize)> for Matrix<C> {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<C> std::ops::IndexMut<(usize, usize)> for Matrix<C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<C: Coefficient> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize, proto: &C) -> Self {
        let z = proto.zero_like();
        Matrix {
            rows,
            cols,
            proto: z.clone(),
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(n: usize, proto: &C) -> Self {
        let mut m = Self::zeros(n, n, proto);
        for i in 0..n {
            m[(i, i)] = proto.one_like();
        }
        m
    }

    /// `c·I`.
    pub fn scalar(n: usize, c: &C) -> Self {
        let mut m = Self::zeros(n, n, c);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[C], proto: &C) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len(), proto);
        for (i, c) in entries.iter().enumerate() {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, proto: &C, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            proto: proto.zero_like(),
            data,
        }
    }

    pub fn from_rows(rows: Vec<Vec<C>>, proto: &C) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            proto: proto.zero_like(),
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<C> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn map<D: Coefficient>(&self, proto: &D, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            proto: proto.zero_like(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Coefficient>(&self, proto: &D, f: impl Fn(&C) -> Result<D>) -> Result<Matrix<D>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            proto: proto.zero_like(),
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.proto, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Entrywise `c·m`.
    pub fn scale(&self, c: &C) -> Self {
        self.map(&self.proto, |x| c.clone() * x.clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols, &self.proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_exact_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Dimension(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, &self.proto, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        }))
    }

    /// `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone() - rhs.clone() * self.clone()
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(
            self.rows * rhs.rows,
            self.cols * rhs.cols,
            &self.proto,
            |i, j| self[(i / rhs.rows, j / rhs.cols)].clone() * rhs[(i % rhs.rows, j % rhs.cols)].clone(),
        )
    }

    /// Places `blocks[i][j]` (each `row_sizes[i] x col_sizes[j]`) into one matrix.
    pub fn block(blocks: &[Vec<Option<Self>>], row_sizes: &[usize], col_sizes: &[usize], proto: &C) -> Self {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut m = Self::zeros(rows, cols, proto);
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                if let Some(b) = b {
                    assert_eq!((b.rows, b.cols), (row_sizes[bi], col_sizes[bj]), "block shape");
                    for i in 0..b.rows {
                        for j in 0..b.cols {
                            m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                        }
                    }
                }
                c0 += col_sizes[bj];
            }
            r0 += row_sizes[bi];
        }
        m
    }

    /// Whether `A^k = 0` for some `k <= n`, returning the first such `k`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut power = self.clone();
        for k in 1..=self.rows.max(1) {
            if power.is_zero_matrix() {
                return Some(k);
            }
            power = power * self.clone();
        }
        None
    }
}

impl<C: PartialEq> PartialEq for Matrix<C> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a == b)
    }
}

impl<C: Coefficient> Add for Matrix<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("matrix shapes agree")
    }
}

impl<C: Coefficient> Sub for Matrix<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Neg for Matrix<C> {
    type Output = Self;
    fn neg(self) -> Self {
        let proto = self.proto.clone();
        self.map(&proto, |c| -c.clone())
    }
}

impl<C: Coefficient> Mul for Matrix<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("matrix shapes agree")
    }
}

impl<C: Coefficient> Coefficient for Matrix<C> {
    fn zero_like(&self) -> Self {
        Self::zeros(self.rows, self.cols, &self.proto)
    }

    fn one_like(&self) -> Self {
        assert!(self.is_square(), "identity of a non-square matrix");
        Self::identity(self.rows, &self.proto)
    }

    fn is_zero(&self) -> bool {
        self.is_zero_matrix()
    }

    fn is_exact_zero(&self) -> bool {
        self.data.iter().all(C::is_exact_zero)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.map(&self.proto, |c| c.scale_int(n))
    }

    fn div_int_exact(&self, n: i64) -> Option<Self> {
        let data = self
            .data
            .iter()
            .map(|c| c.div_int_exact(n))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            proto: self.proto.clone(),
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows, &0).unwrap()
    }

    #[test]
    fn product_and_commutator() {
        let e12 = m(vec![vec![0, 1], vec![0, 0]]);
        let phi = m(vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(phi.commutator(&e12), -e12.clone());
        assert_eq!(e12.nilpotency_index(), Some(2));
        assert_eq!(Matrix::identity(2, &0i64).nilpotency_index(), None);
    }

    #[test]
    fn kron_is_bilinear_in_shape() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let b = m(vec![vec![0, 1], vec![1, 0]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k[(0, 1)], 1);
        assert_eq!(k[(3, 2)], 4);
        // mixed-product property
        assert_eq!(a.kron(&b) * b.kron(&a), (a.clone() * b.clone()).kron(&(b * a)));
    }

    #[test]
    fn dimension_errors() {
        let a = Matrix::zeros(2, 3, &0i64);
        assert!(matches!(a.try_mul(&a), Err(Error::Dimension(_))));
        assert!(Matrix::from_rows(vec![vec![1i64], vec![1, 2]], &0).is_err());
    }
}
