//! The Sen operator as the limit of `(τ^{p^n} - 1)/p^n`.

use serde::Serialize;

use super::action::{GaloisModule, LambdaMatrix};
use super::group::GroupElement;
use crate::error::{Error, Result};
use crate::homology::div_pi_pow;
use crate::matrix::Matrix;
use crate::ring::{LambdaSeries, Scalar};
use crate::scalar::Coefficient;
use crate::stratification::MatrixText;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SenStep {
    pub n: u32,
    /// Minimal p-adic valuation of `D_n + π(ζ-1)λφ`; `None` when it vanishes
    /// at the tracked precision.
    pub residual_valuation: Option<u32>,
    pub precision_floor: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SenReport {
    pub steps: Vec<SenStep>,
    pub strictly_increasing: bool,
    /// The λ-linear coefficient of `D_{n_max}` equals `-π(ζ-1)φ`.
    pub linear_term_ok: bool,
    /// Smallest `k₀` with `v(D_{n+1} - D_n) >= n - k₀` for all steps.
    pub offset: i64,
    /// `-φ/E′(π)` over `O_K/p^N`, when `φ` is divisible by `E′(π)`.
    pub operator: Option<String>,
    pub convention: String,
}

impl SenReport {
    pub fn passed(&self) -> bool {
        self.strictly_increasing && self.linear_term_ok
    }
}

fn valuation(m: &LambdaMatrix) -> Option<u32> {
    m.entries().iter().filter_map(|s| s.coeff_valuation()).min()
}

/// `v ↦ v'` is strictly increasing where `None` is `∞`.
fn increasing(vals: &[Option<u32>]) -> bool {
    vals.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b > a,
        (Some(_), None) => true,
        (None, None) => true,
        (None, Some(_)) => false,
    })
}

/// `D_n = (τ^{p^n} - 1)/p^n` for `n = 0..=n_max`.
pub fn sen_operators(g: &GaloisModule, n_max: u32) -> Result<Vec<LambdaMatrix>> {
    let r = g.rank();
    let proto = LambdaSeries::zero(&g.ring, g.bound);
    let id = Matrix::identity(r, &proto);
    let p = g.p();
    (0..=n_max)
        .map(|n| {
            let pn = p.checked_pow(n).ok_or(Error::NotDivisible(format!("p^{n}")))?;
            let t = GroupElement::tau_pow(pn, p, g.modulus());
            let b = g.binomial_operator(&t)? - id.clone();
            b.try_map(&proto, |s| {
                s.div_int_exact(pn as i64)
                    .ok_or_else(|| Error::PrecisionExhausted(format!("division by p^{n}")))
            })
        })
        .collect()
}

/// `x/a` for `x ∈ a·O_K`, at the precision of `x` lowered by `v_π(a)/e`.
pub fn divide_by(x: &Scalar, a: &Scalar) -> Result<Scalar> {
    let v = a.pi_valuation()?.ok_or(Error::NotUnit)?;
    let vx = x.pi_valuation()?;
    if let Some(vx) = vx {
        if vx < v {
            return Err(Error::NotDivisible("E′(π)".into()));
        }
    }
    let unit = div_pi_pow(a, v)?;
    let q = div_pi_pow(x, v)? * unit.inverse()?;
    let e = x.ctx().e as u32;
    Ok(q.with_prec(x.prec().saturating_sub(v.div_ceil(e))))
}

pub fn sen_operator(g: &GaloisModule, base_phi: &Matrix<Scalar>, base_a: &Scalar, n_max: u32) -> Result<SenReport> {
    let ops = sen_operators(g, n_max)?;
    let proto = LambdaSeries::zero(&g.ring, g.bound);
    let lin = -(Scalar::pi(&g.ring) * (Scalar::zeta(&g.ring) - Scalar::from_int(&g.ring, 1)));
    let target = g.phi.map(&proto, |x| {
        LambdaSeries::monomial(x.clone() * lin.clone(), 1, g.bound).expect("bound >= 1")
    });
    let mut steps = Vec::new();
    for (n, d) in ops.iter().enumerate() {
        let residual = d.clone() - target.clone();
        steps.push(SenStep {
            n: n as u32,
            residual_valuation: valuation(&residual),
            precision_floor: GaloisModule::precision_floor(d),
        });
    }
    let vals: Vec<Option<u32>> = steps.iter().map(|s| s.residual_valuation).collect();
    let last = ops.last().expect("n_max >= 0");
    let linear_term_ok = (0..g.rank()).all(|i| {
        (0..g.rank()).all(|j| last[(i, j)].coeff(1) == g.phi[(i, j)].clone() * lin.clone())
    });
    let mut offset = i64::MIN;
    for n in 0..ops.len().saturating_sub(1) {
        if let Some(v) = valuation(&(ops[n + 1].clone() - ops[n].clone())) {
            offset = offset.max(n as i64 - v as i64);
        }
    }
    let operator = base_phi
        .try_map(base_a, |x| divide_by(&-x.clone(), base_a))
        .ok()
        .map(|m| MatrixText(&m).to_string());
    Ok(SenReport {
        steps,
        strictly_increasing: increasing(&vals),
        linear_term_ok,
        offset: if offset == i64::MIN { 0 } else { offset },
        operator,
        convention: "lim (τ^{p^n}-1)/p^n = -π(ζ_p-1)λ·φ; reported operator is -φ/E′(π)".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::LAMBDA_BOUND;
    use crate::higgs::EnhancedHiggsModule;
    use crate::ring::{make_base_ring_with_guard, PrimeConfig};

    #[test]
    fn zero_operator_has_trivial_sen_sequence() {
        let r = make_base_ring_with_guard(&PrimeConfig::new(3, 6, vec![-3, 1]).unwrap(), 8).unwrap();
        let a = Scalar::e_prime_at_pi(&r);
        let m = EnhancedHiggsModule::bk_twist_unit(0, &a, 0);
        let g = GaloisModule::new(&m, LAMBDA_BOUND).unwrap();
        for d in sen_operators(&g, 3).unwrap() {
            assert!(d.is_zero_matrix());
        }
    }

    #[test]
    fn bk_twist_converges_to_n() {
        for e in [vec![-3i64, 1], vec![-3, 0, 1]] {
            let r = make_base_ring_with_guard(&PrimeConfig::new(3, 8, e).unwrap(), 8).unwrap();
            let a = Scalar::e_prime_at_pi(&r);
            let m = EnhancedHiggsModule::bk_twist_unit(1, &a, 0);
            let g = GaloisModule::new(&m, LAMBDA_BOUND).unwrap();
            let rep = sen_operator(&g, &m.phi, &a, 3).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.operator.as_deref(), Some("[[1]]"));
        }
    }

    #[test]
    fn strictness_with_infinity() {
        assert!(increasing(&[Some(1), Some(2), None, None]));
        assert!(!increasing(&[Some(1), Some(1)]));
        assert!(!increasing(&[None, Some(3)]));
    }
}
