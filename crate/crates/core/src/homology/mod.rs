//! Cohomology of complexes over `O_K/p^N`, Koszul complexes for group
//! actions, truncated Čech–Alexander complexes and the comparison map ρ.

mod cech;
mod complex;
mod rho;
mod snf;

use serde::Serialize;

pub use cech::{cech_alexander, CechComplex};
pub use complex::ChainComplex;
pub use rho::{rho_check, rho_series, rho_x_form_rational, RhoReport};
pub use snf::{div_pi_pow, snf, Snf};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Scalar;
use crate::scalar::Coefficient;

/// Cohomology in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub degree: usize,
    /// Number of free summands of the integral cohomology.
    pub free: usize,
    /// π-adic valuations of the torsion summands `R/π^k`, ascending.
    pub torsion: Vec<u32>,
    /// Torsion summands with `k >= guard`, which cannot be told apart from free
    /// summands at this precision.
    pub ambiguous: Vec<u32>,
    /// Rank after inverting p, modelled by discarding divisors below the guard.
    pub rational_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyProfile {
    /// Guard valuation in π-units.
    pub guard: u32,
    /// `e·N`: valuations at or above this are zero.
    pub top: u32,
    pub degrees: Vec<DegreeProfile>,
}

impl CohomologyProfile {
    pub fn rational_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.rational_rank).collect()
    }
}

/// Default guard `e·N/2` in π-units.
pub fn default_guard(proto: &Scalar) -> u32 {
    let ctx = proto.ctx();
    (ctx.e as u32 * ctx.cfg.n).div_ceil(2)
}

/// Integral and rational cohomology of a complex over `O_K/p^W`.
pub fn cohomology(c: &ChainComplex<Scalar>, guard: u32) -> Result<CohomologyProfile> {
    c.check_square_zero()?;
    let proto = c.proto().clone();
    let ctx = proto.ctx().clone();
    let mut snfs = Vec::new();
    for q in 0..c.len().saturating_sub(1) {
        snfs.push(snf(&c.diff(q as isize))?);
    }
    let top = snfs
        .iter()
        .map(|s| s.top)
        .min()
        .unwrap_or(ctx.e as u32 * ctx.exp);
    if guard == 0 || guard > top {
        return Err(Error::PrecisionExhausted(format!(
            "guard {guard} outside the attained precision range 1..={top}"
        )));
    }
    let mut degrees = Vec::new();
    for q in 0..c.len() {
        let n_q = c.rank(q);
        let out = if q < snfs.len() { Some(&snfs[q]) } else { None };
        let inc = if q >= 1 { Some(&snfs[q - 1]) } else { None };
        let rational_rank = n_q - out.map_or(0, |s| s.rank_below(guard)) - inc.map_or(0, |s| s.rank_below(guard));
        let (free, torsion) = integral_cohomology(c, q, out, top)?;
        let ambiguous = torsion.iter().copied().filter(|&k| k >= guard).collect();
        degrees.push(DegreeProfile {
            degree: q,
            free,
            torsion,
            ambiguous,
            rational_rank,
        });
    }
    Ok(CohomologyProfile { guard, top, degrees })
}

/// `ker d^q / im d^{q-1}` as `R^free ⊕ ⊕ R/π^k`.
///
/// With `d^q = U^{-1} D V^{-1}`, the kernel is generated by the columns `g_i`
/// of `V` scaled by `π^{top - δ_i}`, subject to `π^{δ_i} g_i = 0`; the image of
/// `d^{q-1}` is rewritten in those generators and the resulting presentation
/// is reduced once more.
fn integral_cohomology(
    c: &ChainComplex<Scalar>,
    q: usize,
    out: Option<&Snf>,
    top: u32,
) -> Result<(usize, Vec<u32>)> {
    let proto = c.proto().clone();
    let n = c.rank(q);
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let (v_inv, kernel_exps): (Matrix<Scalar>, Vec<u32>) = match out {
        Some(s) => {
            let mut exps = vec![top; n];
            for (i, &dv) in s.divisors.iter().enumerate() {
                exps[i] = dv;
            }
            (s.v_inv.clone(), exps)
        }
        None => (Matrix::identity(n, &proto), vec![top; n]),
    };
    let gens: Vec<usize> = (0..n).filter(|&i| kernel_exps[i] > 0).collect();
    let k = gens.len();
    if k == 0 {
        return Ok((0, Vec::new()));
    }
    let inc = c.diff(q as isize - 1);
    let w = v_inv * inc;
    let m = w.cols();
    let mut pres = Matrix::zeros(k, k + m, &proto);
    for (row, &i) in gens.iter().enumerate() {
        let ann = kernel_exps[i];
        if ann < top {
            pres[(row, row)] = Scalar::pi(proto.ctx()).pow(ann);
        }
        let shift = top - ann;
        for j in 0..m {
            pres[(row, k + j)] = div_pi_pow(&w[(i, j)], shift)?;
        }
    }
    let s = snf(&pres)?;
    let mut free = k - s.divisors.len();
    let mut torsion = Vec::new();
    for &dv in &s.divisors {
        if dv >= top {
            free += 1;
        } else if dv > 0 {
            torsion.push(dv);
        }
    }
    Ok((free, torsion))
}

/// The Koszul complex on `γ_i - 1`.
pub fn koszul_group_cohomology(gammas: &[Matrix<Scalar>], rank: usize, proto: &Scalar) -> Result<ChainComplex<Scalar>> {
    for i in 0..gammas.len() {
        for j in i + 1..gammas.len() {
            if !gammas[i].commutator(&gammas[j]).is_zero_matrix() {
                return Err(Error::NonCommuting(format!("γ{} and γ{}", i + 1, j + 1)));
            }
        }
    }
    let ops: Vec<Matrix<Scalar>> = gammas
        .iter()
        .map(|g| g.clone() - Matrix::identity(rank, proto))
        .collect();
    Ok(ChainComplex::koszul(&ops, rank, proto))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::higgs::EnhancedHiggsModule;
    use crate::ring::{make_base_ring, PrimeConfig, Ring};

    fn ring(p: u64, n: u32, e: Vec<i64>) -> Ring {
        make_base_ring(&PrimeConfig::new(p, n, e).unwrap()).unwrap()
    }

    #[test]
    fn zero_map_has_free_cohomology() {
        let r = ring(3, 6, vec![-3, 1]);
        let z = Scalar::zero(&r);
        let c = ChainComplex::new(vec![2, 2], vec![Matrix::zeros(2, 2, &z)], &z).unwrap();
        let prof = cohomology(&c, 3).unwrap();
        assert_eq!(prof.rational_ranks(), vec![2, 2]);
        assert_eq!(prof.degrees[0].free, 2);
        assert!(prof.degrees[1].torsion.is_empty());
    }

    #[test]
    fn ramified_derivative_complex() {
        let r = ring(3, 6, vec![-3, 0, 1]);
        let a = Scalar::e_prime_at_pi(&r);
        let m = EnhancedHiggsModule::bk_twist_unit(1, &a, 0);
        let c = m.enhanced_higgs_complex().unwrap();
        let prof = cohomology(&c, default_guard(&a)).unwrap();
        assert_eq!(prof.rational_ranks(), vec![0, 0]);
        assert_eq!(prof.degrees[1].torsion, vec![1]);
        assert_eq!(prof.degrees[0].torsion, vec![1]);
    }

    #[test]
    fn bk_twist_cohomology_vanishes() {
        let r = ring(5, 4, vec![-5, 1]);
        let a = Scalar::e_prime_at_pi(&r);
        for n in [-3i64, -2, -1, 1, 2, 3] {
            let c = EnhancedHiggsModule::bk_twist_unit(n, &a, 0).enhanced_higgs_complex().unwrap();
            let prof = cohomology(&c, default_guard(&a)).unwrap();
            assert_eq!(prof.rational_ranks(), vec![0, 0]);
            assert!(prof.degrees.iter().all(|d| d.torsion.is_empty() && d.free == 0));
        }
    }

    #[test]
    fn koszul_identity_and_unipotent() {
        let r = ring(3, 6, vec![-3, 1]);
        let z = Scalar::zero(&r);
        let id = Matrix::identity(1, &z);
        let c = koszul_group_cohomology(&[id.clone(), id], 1, &z).unwrap();
        assert_eq!(cohomology(&c, 3).unwrap().rational_ranks(), vec![1, 2, 1]);
        let mut g = Matrix::identity(2, &z);
        g[(0, 1)] = z.one_like();
        let c = koszul_group_cohomology(&[g], 2, &z).unwrap();
        let prof = cohomology(&c, 3).unwrap();
        assert_eq!(prof.rational_ranks(), vec![1, 1]);
        assert_eq!((prof.degrees[0].free, prof.degrees[1].free), (1, 1));
    }

    #[test]
    fn torsion_in_the_middle() {
        // Z/27 --3--> Z/27 --0--> : H^0 = ann(3) ≅ R/3, H^1 = R/3
        let r = ring(3, 3, vec![-3, 1]);
        let z = Scalar::zero(&r);
        let three = Matrix::scalar(1, &Scalar::from_int(&r, 3));
        let c = ChainComplex::new(vec![1, 1, 1], vec![three, Matrix::zeros(1, 1, &z)], &z).unwrap();
        let prof = cohomology(&c, 2).unwrap();
        assert_eq!(prof.degrees[0].torsion, vec![1]);
        assert_eq!(prof.degrees[1].torsion, vec![1]);
        assert_eq!(prof.degrees[2].free, 1);
        assert_eq!(prof.rational_ranks(), vec![0, 0, 1]);
        // shifting the complex shifts the profile
        let sh = cohomology(&c.shift(1), 2).unwrap();
        assert_eq!(sh.degrees[1..], prof.degrees.iter().map(|d| DegreeProfile { degree: d.degree + 1, ..d.clone() }).collect::<Vec<_>>()[..]);
    }
}
