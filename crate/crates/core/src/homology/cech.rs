//! Truncated Čech–Alexander complex `H ⊗ A^•` of a stratification.

use std::collections::HashMap;

use super::ChainComplex;
use crate::dp::{face, DpPoly, Shape, Var};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Coefficient;
use crate::stratification::Stratification;

#[derive(Debug, Clone)]
pub struct CechComplex<C: Coefficient> {
    pub complex: ChainComplex<C>,
    /// Ring shape at each cosimplicial level.
    pub levels: Vec<Shape>,
    /// Monomial basis at each level; the basis of `C^n` is `h_b ⊗ m`,
    /// indexed `monomial_index·rank + b`.
    pub monomials: Vec<Vec<Vec<u32>>>,
}

/// Levels `0..=n_max` with differential `Σ(-1)^i p_i`, where `p_0` multiplies
/// by `ε` placed on `X_1, Y_{s,1}` after the ring face map.
pub fn cech_alexander<C: Coefficient>(s: &Stratification<C>, n_max: usize) -> Result<CechComplex<C>> {
    let r = s.rank();
    let proto = s.scalar_proto().clone();
    let d = s.dim();
    let degree = s.degree();
    let a = s.a.clone();
    let levels: Vec<Shape> = (0..=n_max).map(|n| Shape::arith(n, d, degree)).collect();
    let monomials: Vec<Vec<Vec<u32>>> = levels.iter().map(|sh| sh.monomials(degree)).collect();
    let one = proto.one_like();
    let mproto = Matrix::zeros(r, r, &proto);
    let mut diffs = Vec::new();
    for n in 0..n_max {
        let src = levels[n];
        let tgt = levels[n + 1];
        let index: HashMap<&Vec<u32>, usize> = monomials[n + 1].iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut positions = vec![tgt.index(Var::X(1))];
        positions.extend((1..=d).map(|t| tgt.index(Var::Y(t, 1))));
        let eps_emb = s.eps.embed(tgt, &positions);
        let faces: Vec<_> = (0..=n + 1).map(|i| face(src, i)).collect();
        let mut m = Matrix::zeros(monomials[n + 1].len() * r, monomials[n].len() * r, &proto);
        for (ci, mono) in monomials[n].iter().enumerate() {
            let poly = DpPoly::monomial(src, mono.clone(), one.clone())?;
            let mut total = DpPoly::zero(tgt, &mproto);
            for (i, f) in faces.iter().enumerate() {
                let img = f
                    .apply(&poly, &a)
                    .map_coeffs(&mproto, |c| Matrix::scalar(r, c));
                let term = if i == 0 { eps_emb.clone() * img } else { img };
                total = if i % 2 == 0 { total + term } else { total - term };
            }
            for (e, c) in total.terms() {
                let ri = index[e];
                for x in 0..r {
                    for b in 0..r {
                        m[(ri * r + x, ci * r + b)] = c[(x, b)].clone();
                    }
                }
            }
        }
        diffs.push(m);
    }
    let ranks = monomials.iter().map(|m| m.len() * r).collect();
    let complex = ChainComplex::new(ranks, diffs, &proto)?;
    complex.check_square_zero().map_err(|e| match e {
        Error::NotAComplex { degree } => Error::NotAComplex { degree },
        other => other,
    })?;
    Ok(CechComplex {
        complex,
        levels,
        monomials,
    })
}
