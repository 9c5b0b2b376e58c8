//! Cochain complexes of free modules, `C^0 → C^1 → …`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex<C> {
    ranks: Vec<usize>,
    /// `diffs[q]` maps `C^q` to `C^{q+1}` (a `ranks[q+1] x ranks[q]` matrix).
    diffs: Vec<Matrix<C>>,
    proto: C,
}

impl<C: Coefficient> ChainComplex<C> {
    pub fn new(ranks: Vec<usize>, diffs: Vec<Matrix<C>>, proto: &C) -> Result<Self> {
        if ranks.is_empty() || diffs.len() + 1 != ranks.len() {
            return Err(Error::Dimension("a complex with n terms needs n-1 differentials".into()));
        }
        for (q, d) in diffs.iter().enumerate() {
            if d.cols() != ranks[q] || d.rows() != ranks[q + 1] {
                return Err(Error::Dimension(format!(
                    "d^{q} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[q + 1],
                    ranks[q]
                )));
            }
        }
        Ok(ChainComplex {
            ranks,
            diffs,
            proto: proto.zero_like(),
        })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.ranks.clone()
    }

    pub fn rank(&self, q: usize) -> usize {
        self.ranks.get(q).copied().unwrap_or(0)
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    /// `d^q`, or a zero map outside the range.
    pub fn diff(&self, q: isize) -> Matrix<C> {
        if q >= 0 && (q as usize) < self.diffs.len() {
            self.diffs[q as usize].clone()
        } else {
            let src = if q >= 0 { self.rank(q as usize) } else { 0 };
            let dst = if q + 1 >= 0 { self.rank((q + 1) as usize) } else { 0 };
            Matrix::zeros(dst, src, &self.proto)
        }
    }

    pub fn diffs(&self) -> &[Matrix<C>] {
        &self.diffs
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for q in 1..self.diffs.len() {
            let comp = self.diffs[q].clone() * self.diffs[q - 1].clone();
            if !comp.is_zero_matrix() {
                return Err(Error::NotAComplex { degree: q - 1 });
            }
        }
        Ok(())
    }

    /// Prepends `k` zero terms.
    pub fn shift(&self, k: usize) -> Self {
        let mut ranks = vec![0; k];
        ranks.extend(&self.ranks);
        let mut diffs: Vec<Matrix<C>> = (0..k)
            .map(|i| Matrix::zeros(ranks[i + 1], ranks[i], &self.proto))
            .collect();
        diffs.extend(self.diffs.iter().cloned());
        ChainComplex {
            ranks,
            diffs,
            proto: self.proto.clone(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, proto: &D, f: impl Fn(&C) -> D) -> ChainComplex<D> {
        ChainComplex {
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.map(proto, &f)).collect(),
            proto: proto.zero_like(),
        }
    }

    /// Koszul complex of commuting operators on a free module of rank `r`:
    /// `C^q = H ⊗ Λ^q`, `d(x ⊗ e_ω) = Σ_{i∉ω} (-1)^{#{k∈ω, k<i}} T_i x ⊗ e_{ω∪i}`.
    pub fn koszul(ops: &[Matrix<C>], r: usize, proto: &C) -> Self {
        let d = ops.len();
        let subsets: Vec<Vec<u32>> = (0..=d)
            .map(|q| {
                let mut v: Vec<u32> = (0u32..(1 << d)).filter(|m| m.count_ones() as usize == q).collect();
                v.sort_by_key(|m| (0..d).map(|i| (m >> i) & 1 == 0).collect::<Vec<_>>());
                v
            })
            .collect();
        let ranks: Vec<usize> = subsets.iter().map(|s| s.len() * r).collect();
        let mut diffs = Vec::new();
        for q in 0..d {
            let mut m = Matrix::zeros(ranks[q + 1], ranks[q], proto);
            for (ci, &omega) in subsets[q].iter().enumerate() {
                for (i, op) in ops.iter().enumerate() {
                    if omega & (1 << i) != 0 {
                        continue;
                    }
                    let below = (omega & ((1 << i) - 1)).count_ones();
                    let target = omega | (1 << i);
                    let ri = subsets[q + 1].iter().position(|&t| t == target).expect("subset present");
                    for a in 0..r {
                        for b in 0..r {
                            let v = if below % 2 == 0 { op[(a, b)].clone() } else { -op[(a, b)].clone() };
                            m[(ri * r + a, ci * r + b)] = v;
                        }
                    }
                }
            }
            diffs.push(m);
        }
        ChainComplex {
            ranks,
            diffs,
            proto: proto.zero_like(),
        }
    }

    /// Fiber of a chain endomorphism `f`: `C^n = A^n ⊕ A^{n-1}`,
    /// `d(a, b) = (d a, f(a) - d b)`.
    pub fn fiber(a: &ChainComplex<C>, f: &[Matrix<C>]) -> Self {
        let n_terms = a.len() + 1;
        let ar = |q: isize| if q < 0 { 0 } else { a.rank(q as usize) };
        let ranks: Vec<usize> = (0..n_terms as isize).map(|n| ar(n) + ar(n - 1)).collect();
        let mut diffs = Vec::new();
        for n in 0..(n_terms as isize - 1) {
            let fa = f.get(n as usize).cloned();
            let blocks = vec![
                vec![Some(a.diff(n)), None],
                vec![fa, Some(-a.diff(n - 1))],
            ];
            let m = Matrix::block(&blocks, &[ar(n + 1), ar(n)], &[ar(n), ar(n - 1)], &a.proto);
            diffs.push(m);
        }
        ChainComplex {
            ranks,
            diffs,
            proto: a.proto.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_two_operators() {
        let t1 = Matrix::from_rows(vec![vec![0i64, 1], vec![0, 0]], &0).unwrap();
        let t2 = t1.scale(&3);
        let k = ChainComplex::koszul(&[t1.clone(), t2.clone()], 2, &0i64);
        assert_eq!(k.ranks(), vec![2, 4, 2]);
        k.check_square_zero().unwrap();
        // d^1 = (-θ2, θ1)
        let d1 = k.diff(1);
        assert_eq!(d1[(0, 1)], -3);
        assert_eq!(d1[(0, 3)], 1);
        let bad = Matrix::from_rows(vec![vec![0i64, 0], vec![1, 0]], &0).unwrap();
        let k = ChainComplex::koszul(&[t1, bad], 2, &0i64);
        assert_eq!(k.check_square_zero(), Err(Error::NotAComplex { degree: 0 }));
    }

    #[test]
    fn zero_operators_give_zero_koszul() {
        let z = Matrix::zeros(1, 1, &0i64);
        let k = ChainComplex::koszul(&[z.clone(), z], 1, &0i64);
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        assert!(k.diffs().iter().all(|d| d.is_zero_matrix()));
        let k0 = ChainComplex::koszul(&[], 3, &0i64);
        assert_eq!(k0.ranks(), vec![3]);
    }

    #[test]
    fn shift_prepends_zero_terms() {
        let t = Matrix::from_rows(vec![vec![2i64]], &0).unwrap();
        let k = ChainComplex::koszul(&[t], 1, &0i64);
        let s = k.shift(2);
        assert_eq!(s.ranks(), vec![0, 0, 1, 1]);
        s.check_square_zero().unwrap();
    }
}
