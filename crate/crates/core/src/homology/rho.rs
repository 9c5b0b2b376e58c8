//! The series `F(X, Y) = Σ_{k>=1} ∏_{j=1}^{k-1}(Y + ja)·X^{[k]}` and the
//! commuting square relating the Higgs and Čech–Alexander differentials.

use serde::Serialize;

use super::cech_alexander;
use crate::dp::{format_monomial, DpPoly, Shape};
use crate::error::{Error, Result};
use crate::higgs::EnhancedHiggsModule;
use crate::matrix::Matrix;
use crate::scalar::Coefficient;
use crate::series::{op_binomial_series_symbolic, pochhammer};
use crate::dp::Var;
use crate::stratification::Stratification;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoReport {
    pub q: i64,
    pub degree: u32,
    /// `1 + F(X, ψ)·ψ = (1 - aX)^{-ψ/a}` with `ψ = φ + qa`.
    pub series_ok: bool,
    /// `F(X_1, ψ)·ψ` equals the first Čech–Alexander differential of the
    /// twisted module.
    pub square_ok: bool,
    pub witness: Option<String>,
}

impl RhoReport {
    pub fn passed(&self) -> bool {
        self.series_ok && self.square_ok
    }
}

/// `F(X_1, ψ)` on the one-variable arithmetic ring.
pub fn rho_series<C: Coefficient>(psi: &Matrix<C>, a: &C, degree: u32) -> DpPoly<Matrix<C>> {
    let shape = Shape::arith(1, 0, degree);
    let r = psi.rows();
    let shifted = psi.clone() + Matrix::scalar(r, a);
    let prods = pochhammer(&shifted, a, degree as usize);
    let mut f = DpPoly::zero(shape, &Matrix::zeros(r, r, psi.proto()));
    for k in 1..=degree {
        f.insert_add(vec![k], prods[(k - 1) as usize].clone());
    }
    f
}

/// Verifies both forms of the square for `ψ = φ + qa`; θ is ignored.
pub fn rho_check<C: Coefficient>(m: &EnhancedHiggsModule<C>, q: i64, degree: u32) -> Result<RhoReport> {
    let r = m.rank();
    let psi = m.phi.clone() + Matrix::scalar(r, &m.a.scale_int(q));
    let f = rho_series(&psi, &m.a, degree);
    let lhs = f.scale_right(&psi);
    let shape = Shape::arith(1, 0, degree);
    let eps = op_binomial_series_symbolic(&psi, &m.a, shape, Var::X(1));
    let target = eps - DpPoly::constant(shape, Matrix::identity(r, m.proto()));
    let mut witness = lhs
        .first_difference(&target)
        .map(|(e, _)| format!("series at {}", format_monomial(&shape, &e)));
    let series_ok = witness.is_none();

    let twisted = EnhancedHiggsModule::new(m.a.clone(), Vec::new(), psi.clone())?;
    let s = Stratification::build(&twisted, degree)?;
    let c = cech_alexander(&s, 1)?;
    let d0 = c.complex.diff(0);
    let mut square_ok = true;
    for (mi, mono) in c.monomials[1].iter().enumerate() {
        let coeff = lhs.coeff(mono);
        for x in 0..r {
            for b in 0..r {
                let expect = if coeff.rows() == 0 { m.proto().zero_like() } else { coeff[(x, b)].clone() };
                if d0[(mi * r + x, b)] != expect {
                    square_ok = false;
                }
            }
        }
        if !square_ok {
            witness.get_or_insert_with(|| format!("square at {}", format_monomial(&c.levels[1], mono)));
            break;
        }
    }
    Ok(RhoReport {
        q,
        degree,
        series_ok,
        square_ok,
        witness,
    })
}

/// `1 + X·F_X(X, ψ)` with `F_X = Σ_{k>=1} ∏_{j<k}(ψ + ja)/k · X^{[k-1]}`,
/// which needs division by `k`.
pub fn rho_x_form_rational<C: Coefficient>(psi: &Matrix<C>, a: &C, degree: u32) -> Result<DpPoly<Matrix<C>>> {
    let shape = Shape::arith(1, 0, degree);
    let r = psi.rows();
    let prods = pochhammer(psi, a, degree as usize);
    let id = Matrix::identity(r, psi.proto());
    let mut fx = DpPoly::zero(shape, &Matrix::zeros(r, r, psi.proto()));
    for k in 1..=degree {
        let c = prods[k as usize]
            .div_int_exact(k as i64)
            .ok_or_else(|| Error::NotDivisible(format!("{k} in F_X")))?;
        fx.insert_add(vec![k - 1], c);
    }
    let x = DpPoly::var_power(shape, Var::X(1), 1, id.clone())?;
    Ok(DpPoly::constant(shape, id) + x * fx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_base_ring, PrimeConfig, Scalar};
    use num_rational::BigRational;

    #[test]
    fn zero_and_minus_a() {
        let r = make_base_ring(&PrimeConfig::new(3, 6, vec![-3, 0, 1]).unwrap()).unwrap();
        let a = Scalar::e_prime_at_pi(&r);
        let zero = EnhancedHiggsModule::bk_twist_unit(0, &a, 0);
        assert!(rho_check(&zero, 0, 4).unwrap().passed());
        let m = EnhancedHiggsModule::bk_twist_unit(1, &a, 0);
        let f = rho_series(&m.phi, &a, 4);
        // F(X, -a) = X + Σ_{k>=2} ∏_{j=1}^{k-1}(ja - a) X^{[k]} = X
        assert_eq!(f.terms().len(), 1);
        for q in 0..=2 {
            assert!(rho_check(&m, q, 4).unwrap().passed());
        }
    }

    #[test]
    fn x_form_over_rationals() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let psi = Matrix::from_rows(vec![vec![q(3), q(1)], vec![q(0), q(5)]], &q(0)).unwrap();
        let shape = Shape::arith(1, 0, 5);
        let lhs = rho_x_form_rational(&psi, &q(2), 5).unwrap();
        let rhs = op_binomial_series_symbolic(&psi, &q(2), shape, Var::X(1));
        assert_eq!(lhs, rhs);
    }
}
