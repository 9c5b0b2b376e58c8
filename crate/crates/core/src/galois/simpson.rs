//! Exponential and logarithm between commuting nilpotent and commuting
//! unipotent tuples, and the operator `∏ γ_i^{-Y_i}` in the binomial basis.

use serde::Serialize;

use crate::dp::{binomial_to_dp, pascal_shift, BinomialPoly, DpPoly, Shape, Var};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{factorial, vp_factorial, Coefficient};

/// `Σ_k θ^k/k!`; `θ` must be nilpotent.
pub fn exp_nilpotent<C: Coefficient>(theta: &Matrix<C>) -> Result<Matrix<C>> {
    let r = theta.rows();
    let mut acc = Matrix::identity(r, theta.proto());
    let mut power = Matrix::identity(r, theta.proto());
    for k in 1..=r + 1 {
        power = power * theta.clone();
        if power.is_exact_zero() || (k >= r && power.is_zero_matrix()) {
            return Ok(acc);
        }
        let term = power
            .div_int_exact(factorial(k as u64))
            .ok_or_else(|| Error::NotDivisible(format!("{k}! in exp")))?;
        acc = acc + term;
    }
    Err(Error::NotNilpotent("θ".into()))
}

/// `Σ_k (-1)^{k+1}(γ-1)^k/k`; `γ` must be unipotent.
pub fn log_unipotent<C: Coefficient>(gamma: &Matrix<C>) -> Result<Matrix<C>> {
    let r = gamma.rows();
    let n = gamma.clone() - Matrix::identity(r, gamma.proto());
    let mut acc = Matrix::zeros(r, r, gamma.proto());
    let mut power = Matrix::identity(r, gamma.proto());
    for k in 1..=r + 1 {
        power = power * n.clone();
        if power.is_exact_zero() || (k >= r && power.is_zero_matrix()) {
            return Ok(acc);
        }
        let term = power
            .div_int_exact(k as i64)
            .ok_or_else(|| Error::NotDivisible(format!("{k} in log")))?;
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    Err(Error::NotNilpotent("γ - 1".into()))
}

/// `γ^{-1} = Σ_k (1-γ)^k` for unipotent `γ`.
pub fn inverse_unipotent<C: Coefficient>(gamma: &Matrix<C>) -> Result<Matrix<C>> {
    let r = gamma.rows();
    let m = Matrix::identity(r, gamma.proto()) - gamma.clone();
    let mut acc = Matrix::identity(r, gamma.proto());
    let mut power = Matrix::identity(r, gamma.proto());
    for k in 1..=r + 1 {
        power = power * m.clone();
        if power.is_exact_zero() || (k >= r && power.is_zero_matrix()) {
            return Ok(acc);
        }
        acc = acc + power.clone();
    }
    Err(Error::NotNilpotent("γ - 1".into()))
}

/// Least `s` for which `p^{sk}/k!` and `p^{sk}/(k+1)!` are integral for all
/// `1 <= k < r`, so that `exp(p^s θ)` and `(exp(p^s θ) - 1)/(p^s θ)` are integral.
pub fn integral_scaling(p: u64, r: usize) -> u32 {
    (1..r.max(1))
        .map(|k| vp_factorial((k + 1) as u64, p).div_ceil(k as u32))
        .max()
        .unwrap_or(0)
}

fn check_commuting<C: Coefficient>(ms: &[Matrix<C>], what: &str) -> Result<()> {
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if !ms[i].commutator(&ms[j]).is_zero_matrix() {
                return Err(Error::NonCommuting(format!("{what}{} and {what}{}", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub direction: String,
    pub exp_log_ok: bool,
    pub log_exp_ok: bool,
    /// `γ_j·Q(Y + e_j) = Q(Y)` for `Q = ∏ γ_i^{-Y_i}`.
    pub translation_ok: bool,
    /// `Σ_n (γ-1)^n binom(Y, n)` equals `Σ_k θ^k Y^{[k]}`; `None` when the
    /// basis change is not defined over the coefficient ring.
    pub dp_form_ok: Option<bool>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.exp_log_ok && self.log_exp_ok && self.translation_ok && self.dp_form_ok != Some(false)
    }
}

/// Direction A: `γ_i = exp θ_i`, then `log γ_i = θ_i`.
pub fn roundtrip_from_higgs<C: Coefficient>(thetas: &[Matrix<C>]) -> Result<RoundtripReport> {
    check_commuting(thetas, "θ")?;
    let gammas: Vec<Matrix<C>> = thetas.iter().map(exp_nilpotent).collect::<Result<_>>()?;
    let back: Vec<Matrix<C>> = gammas.iter().map(log_unipotent).collect::<Result<_>>()?;
    let log_exp_ok = back == thetas;
    let again: Vec<Matrix<C>> = back.iter().map(exp_nilpotent).collect::<Result<_>>()?;
    let exp_log_ok = again == gammas;
    let mut rep = roundtrip_from_group(&gammas)?;
    rep.direction = "higgs".into();
    rep.exp_log_ok &= exp_log_ok;
    rep.log_exp_ok &= log_exp_ok;
    Ok(rep)
}

/// Direction B: `θ_i = log γ_i`, `exp θ_i = γ_i`, and the translation law of
/// `∏ γ_i^{-Y_i} = Σ ∏(γ_i^{-1}-1)^{n_i} binom(Y, n)`.
pub fn roundtrip_from_group<C: Coefficient>(gammas: &[Matrix<C>]) -> Result<RoundtripReport> {
    check_commuting(gammas, "γ")?;
    let thetas: Vec<Matrix<C>> = gammas.iter().map(log_unipotent).collect::<Result<_>>()?;
    let again: Vec<Matrix<C>> = thetas.iter().map(exp_nilpotent).collect::<Result<_>>()?;
    let exp_log_ok = again == gammas;
    let back: Vec<Matrix<C>> = again.iter().map(log_unipotent).collect::<Result<_>>()?;
    let log_exp_ok = back == thetas;
    let translation_ok = translation_law(gammas)?;
    let dp_form_ok = match dp_form(gammas, &thetas) {
        Ok(b) => Some(b),
        Err(Error::NotDivisible(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RoundtripReport {
        direction: "group".into(),
        exp_log_ok,
        log_exp_ok,
        translation_ok,
        dp_form_ok,
    })
}

fn binomial_series<C: Coefficient>(ops: &[Matrix<C>], proto: &Matrix<C>) -> BinomialPoly<Matrix<C>> {
    let d = ops.len();
    let r = proto.rows();
    let degree = (d * r.saturating_sub(1)) as u32;
    let mut q = BinomialPoly::zero(d, degree, proto);
    let shape = Shape::geo(1, d, degree);
    for n in shape.monomials(degree) {
        let mut c = Matrix::identity(r, proto.proto());
        for (op, &k) in ops.iter().zip(&n) {
            c = c * op.pow(k);
        }
        if !c.is_zero_matrix() {
            q.insert_add(n, c);
        }
    }
    q
}

fn translation_law<C: Coefficient>(gammas: &[Matrix<C>]) -> Result<bool> {
    let Some(first) = gammas.first() else {
        return Ok(true);
    };
    let r = first.rows();
    let proto = Matrix::zeros(r, r, first.proto());
    let id = Matrix::identity(r, first.proto());
    let ops: Vec<Matrix<C>> = gammas
        .iter()
        .map(|g| inverse_unipotent(g).map(|gi| gi - id.clone()))
        .collect::<Result<_>>()?;
    let q = binomial_series(&ops, &proto);
    Ok((0..gammas.len()).all(|j| pascal_shift(&q, j).map_coeffs(|c| gammas[j].clone() * c.clone()) == q))
}

fn dp_form<C: Coefficient>(gammas: &[Matrix<C>], thetas: &[Matrix<C>]) -> Result<bool> {
    let Some(first) = gammas.first() else {
        return Ok(true);
    };
    let r = first.rows();
    let d = gammas.len();
    let proto = Matrix::zeros(r, r, first.proto());
    let id = Matrix::identity(r, first.proto());
    let ops: Vec<Matrix<C>> = gammas.iter().map(|g| g.clone() - id.clone()).collect();
    let q = binomial_series(&ops, &proto);
    let shape = Shape::geo(1, d, q.degree);
    let lhs = binomial_to_dp(&q, shape)?;
    let mut rhs = DpPoly::zero(shape, &proto);
    for n in shape.monomials(q.degree) {
        let mut c = id.clone();
        for (t, &k) in thetas.iter().zip(&n) {
            c = c * t.pow(k);
        }
        let mut e = vec![0; shape.nvars()];
        for (s, &k) in n.iter().enumerate() {
            e[shape.index(Var::Y(s + 1, 1))] = k;
        }
        rhs.insert_add(e, c);
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn e12() -> Matrix<BigRational> {
        Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]], &q(0)).unwrap()
    }

    #[test]
    fn two_term_series() {
        let g = exp_nilpotent(&e12()).unwrap();
        assert_eq!(g, Matrix::identity(2, &q(0)) + e12());
        assert_eq!(log_unipotent(&g).unwrap(), e12());
        assert!(roundtrip_from_higgs(&[e12()]).unwrap().passed());
    }

    #[test]
    fn identity_group_gives_zero_higgs_field() {
        let id = Matrix::identity(3, &q(0));
        assert!(log_unipotent(&id).unwrap().is_zero_matrix());
        let rep = roundtrip_from_group(&[id.clone(), id]).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn common_nilpotent_rank_three() {
        let n = Matrix::from_rows(
            vec![vec![q(0), q(1), q(2)], vec![q(0), q(0), q(3)], vec![q(0), q(0), q(0)]],
            &q(0),
        )
        .unwrap();
        let t1 = n.scale(&q(2));
        let t2 = n.clone() * n.clone() + n.scale(&q(-1));
        let rep = roundtrip_from_higgs(&[t1, t2]).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.dp_form_ok, Some(true));
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        let m = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(0)]], &q(0)).unwrap();
        assert!(matches!(exp_nilpotent(&m), Err(Error::NotNilpotent(_))));
        let g = Matrix::from_rows(vec![vec![q(2), q(0)], vec![q(0), q(1)]], &q(0)).unwrap();
        assert!(matches!(log_unipotent(&g), Err(Error::NotNilpotent(_))));
    }

    #[test]
    fn scaling_makes_series_integral() {
        assert_eq!(integral_scaling(2, 2), 1);
        assert_eq!(integral_scaling(3, 2), 0);
        assert_eq!(integral_scaling(3, 3), 1);
        let t = Matrix::from_rows(
            vec![vec![0i64, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            &0,
        )
        .unwrap();
        let s = 2i64.pow(integral_scaling(2, 3));
        assert!(exp_nilpotent(&t.scale(&s)).is_ok());
    }
}
