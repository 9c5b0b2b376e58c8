//! The semilinear action of `Z_p^d ⋊ Ĝ` on `H ⊗ R[λ^{±1}]` attached to an
//! enhanced Higgs module, with `R = O_K[ζ_p]/p^W`.

use rand::Rng;
use serde::Serialize;

use super::group::{FullElement, GroupElement};
use crate::error::{Error, Result};
use crate::higgs::EnhancedHiggsModule;
use crate::matrix::Matrix;
use crate::ring::{adjoin_zeta, LambdaSeries, Ring, Scalar};
use crate::scalar::{factorial, Coefficient};
use crate::series::pochhammer;

/// Default λ-degree bound.
pub const LAMBDA_BOUND: i64 = 10;

pub type LambdaMatrix = Matrix<LambdaSeries>;

#[derive(Debug, Clone)]
pub struct GaloisModule {
    pub ring: Ring,
    pub bound: i64,
    pub a: Scalar,
    pub phi: Matrix<Scalar>,
    pub theta: Vec<Matrix<Scalar>>,
    pi: Scalar,
    zeta_minus_one: Scalar,
    /// `∏_{j<k}(φ + ja)` for `k <= bound`.
    poch: Vec<Matrix<Scalar>>,
}

fn lift(x: &Scalar, target: &Ring) -> Scalar {
    x.lift_exact(target).with_prec(x.prec())
}

fn lift_matrix(m: &Matrix<Scalar>, target: &Ring) -> Matrix<Scalar> {
    m.map(&Scalar::zero(target), |x| lift(x, target))
}

/// `(ζ^χ - 1)/(ζ - 1) = 1 + ζ + ⋯ + ζ^{χ-1}` with `χ` read mod p.
fn cyclotomic_unit(ring: &Ring, chi: u64) -> Scalar {
    let zeta = Scalar::zeta(ring);
    let k = chi % ring.p();
    let mut acc = Scalar::zero(ring);
    let mut zp = Scalar::from_int(ring, 1);
    for _ in 0..k {
        acc = acc + zp.clone();
        zp = zp * zeta.clone();
    }
    acc
}

fn scalar_of(ring: &Ring, n: u64) -> Scalar {
    Scalar::from_int(ring, n as i64)
}

impl GaloisModule {
    /// Requires the module to live over the base ring; entries are carried
    /// over with their precision.
    pub fn new(m: &EnhancedHiggsModule<Scalar>, bound: i64) -> Result<Self> {
        let base = m.proto().ctx().clone();
        if base.cyclotomic {
            return Err(Error::InvalidConfig("module must be given over O_K/p^N".into()));
        }
        let report = m.check_enhanced(0);
        if let Some(f) = report.first_failure() {
            return Err(Error::NotEnhanced(format!(
                "{}: {}",
                f.name,
                f.witness.clone().unwrap_or_default()
            )));
        }
        Self::new_unchecked(m, bound)
    }

    /// Same as [`GaloisModule::new`] without the enhancement check.
    pub fn new_unchecked(m: &EnhancedHiggsModule<Scalar>, bound: i64) -> Result<Self> {
        let base = m.proto().ctx().clone();
        let ring = adjoin_zeta(&base)?;
        let a = lift(&m.a, &ring);
        let phi = lift_matrix(&m.phi, &ring);
        let theta = m.theta.iter().map(|t| lift_matrix(t, &ring)).collect();
        let poch = pochhammer(&phi, &a, bound as usize);
        let zeta_minus_one = Scalar::zeta(&ring) - Scalar::from_int(&ring, 1);
        Ok(GaloisModule {
            pi: Scalar::pi(&ring),
            ring,
            bound,
            a,
            phi,
            theta,
            zeta_minus_one,
            poch,
        })
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    fn series_proto(&self) -> LambdaSeries {
        LambdaSeries::zero(&self.ring, self.bound)
    }

    fn constant_series(&self, c: Scalar) -> LambdaSeries {
        LambdaSeries::constant(c, self.bound)
    }

    /// `π·E′(π)·(ζ-1)·c(g)`.
    fn s_of(&self, g: &GroupElement) -> Scalar {
        self.pi.clone() * self.a.clone() * self.zeta_minus_one.clone() * scalar_of(&self.ring, g.c)
    }

    /// `g(λ) = χ·(ζ-1)/(ζ^χ-1)·λ·(1 + π E′(π)(ζ-1)λc)^{-1}`.
    pub fn act_on_lambda(&self, g: &GroupElement) -> Result<LambdaSeries> {
        let u = cyclotomic_unit(&self.ring, g.chi);
        let lead = scalar_of(&self.ring, g.chi) * u.inverse()?;
        let s_lambda = LambdaSeries::monomial(self.s_of(g), 1, self.bound)?;
        let inv = LambdaSeries::inverse_one_plus(&s_lambda)?;
        Ok(LambdaSeries::monomial(lead, 1, self.bound)? * inv)
    }

    /// `1 + π E′(π)(ζ-1)λc(g)`.
    pub fn one_plus_s_lambda(&self, g: &GroupElement) -> Result<LambdaSeries> {
        Ok(self.constant_series(Scalar::from_int(&self.ring, 1)) + LambdaSeries::monomial(self.s_of(g), 1, self.bound)?)
    }

    /// `Σ_k ∏_{j<k}(φ+ja)·z^{[k]}` with `z = -π(ζ-1)λc(g)`.
    pub fn binomial_operator(&self, g: &GroupElement) -> Result<LambdaMatrix> {
        let w = -(self.pi.clone() * self.zeta_minus_one.clone() * scalar_of(&self.ring, g.c));
        let r = self.rank();
        let proto = self.series_proto();
        let mut out = Matrix::identity(r, &proto);
        let mut wk = Scalar::from_int(&self.ring, 1);
        for k in 1..=self.bound as usize {
            wk = wk * w.clone();
            let qk = wk
                .div_int_exact(factorial(k as u64))
                .ok_or_else(|| Error::NotDivisible(format!("{k}! in the binomial operator")))?;
            let pk = &self.poch[k];
            let term = Matrix::from_fn(r, r, &proto, |i, j| {
                LambdaSeries::monomial(pk[(i, j)].clone() * qk.clone(), k as i64, self.bound).expect("within bound")
            });
            out = out + term;
        }
        Ok(out)
    }

    /// `exp(-(ζ-1)λ·Σ n_i θ_i)`, a finite sum since the θ_i are nilpotent.
    pub fn geometric_operator(&self, geo: &[u64]) -> Result<LambdaMatrix> {
        let r = self.rank();
        let zero = Scalar::zero(&self.ring);
        let mut t = Matrix::zeros(r, r, &zero);
        for (th, &n) in self.theta.iter().zip(geo) {
            t = t + th.scale(&scalar_of(&self.ring, n));
        }
        let proto = self.series_proto();
        let mut out = Matrix::identity(r, &proto);
        let w = -self.zeta_minus_one.clone();
        let mut tk = Matrix::identity(r, &zero);
        let mut wk = Scalar::from_int(&self.ring, 1);
        for k in 1..=r.max(1) {
            tk = tk * t.clone();
            if tk.is_zero_matrix() {
                return Ok(out);
            }
            wk = wk * w.clone();
            let qk = wk
                .div_int_exact(factorial(k as u64))
                .ok_or_else(|| Error::NotDivisible(format!("{k}! in the geometric operator")))?;
            let term = Matrix::from_fn(r, r, &proto, |i, j| {
                LambdaSeries::monomial(tk[(i, j)].clone() * qk.clone(), k as i64, self.bound).expect("within bound")
            });
            out = out + term;
        }
        Err(Error::NotNilpotent(format!("Σ n_i θ_i is not nilpotent of index <= {r}")))
    }

    /// Applies `ζ ↦ ζ^χ`, `λ ↦ g(λ)` entrywise.
    pub fn sigma(&self, g: &GroupElement, m: &LambdaMatrix) -> Result<LambdaMatrix> {
        let x = self.act_on_lambda(g)?;
        let mut powers = vec![self.constant_series(Scalar::from_int(&self.ring, 1))];
        for k in 1..=self.bound as usize {
            let next = powers[k - 1].clone() * x.clone();
            powers.push(next);
        }
        m.try_map(&self.series_proto(), |s| {
            s.map_coeffs(|c| c.sigma(g.chi)).substitute_with_powers(&powers)
        })
    }

    /// The matrix of `(n, g)` on the constant basis: `M_n · B_g`.
    pub fn act_matrix(&self, h: &FullElement) -> Result<LambdaMatrix> {
        Ok(self.geometric_operator(&h.geo)? * self.binomial_operator(&h.g)?)
    }

    /// `h₁(h₂(x)) = M_{n₁}B_{g₁}·σ_{g₁}(M_{n₂}B_{g₂})·x`.
    pub fn compose_actions(&self, h1: &FullElement, h2: &FullElement) -> Result<LambdaMatrix> {
        Ok(self.act_matrix(h1)? * self.sigma(&h1.g, &self.act_matrix(h2)?)?)
    }

    /// Applies `h` to a vector with λ-series entries.
    pub fn act(&self, h: &FullElement, x: &[LambdaSeries]) -> Result<Vec<LambdaSeries>> {
        let r = self.rank();
        if x.len() != r {
            return Err(Error::Dimension(format!("vector of length {} for rank {r}", x.len())));
        }
        let col = Matrix::from_fn(r, 1, &self.series_proto(), |i, _| x[i].clone());
        let moved = self.sigma(&h.g, &col)?;
        let out = self.act_matrix(h)? * moved;
        Ok((0..r).map(|i| out[(i, 0)].clone()).collect())
    }

    /// Lowest coefficient precision appearing in a matrix of series.
    pub fn precision_floor(m: &LambdaMatrix) -> u32 {
        m.entries().iter().map(|s| s.min_prec()).min().unwrap_or(0)
    }

    /// Runs the cocycle, semidirect and θ-equivariance checks on random pairs.
    pub fn verify_cocycle<R: Rng>(&self, rng: &mut R, trials: usize) -> Result<CocycleCheck> {
        let mut out = CocycleCheck {
            trials,
            cocycle_failures: 0,
            semidirect_failures: 0,
            equivariance_failures: 0,
            precision_floor: self.ring.exp,
            witness: None,
        };
        let (p, m) = (self.p(), self.modulus());
        let d = self.dim();
        for t in 0..trials {
            let h1 = FullElement::random(rng, d, p, m);
            let h2 = FullElement::random(rng, d, p, m);
            let lhs = self.compose_actions(&h1, &h2)?;
            let rhs = self.act_matrix(&h1.compose(&h2))?;
            out.precision_floor = out.precision_floor.min(Self::precision_floor(&lhs)).min(Self::precision_floor(&rhs));
            if lhs != rhs {
                out.cocycle_failures += 1;
                out.witness.get_or_insert_with(|| format!("trial {t}: h1(h2(x)) ≠ (h1h2)(x)"));
            }
            let g = h1.g;
            let b = self.binomial_operator(&g)?;
            for i in 0..d {
                let mut e = vec![0; d];
                e[i] = 1;
                let scaled: Vec<u64> = e.iter().map(|x| x * g.chi % m).collect();
                let left = b.clone() * self.sigma(&g, &self.geometric_operator(&e)?)?;
                let right = self.geometric_operator(&scaled)? * b.clone();
                if left != right {
                    out.semidirect_failures += 1;
                    out.witness
                        .get_or_insert_with(|| format!("trial {t}: gγ{}g⁻¹ ≠ γ{}^χ(g)", i + 1, i + 1));
                }
            }
            let shift = self.one_plus_s_lambda(&g)?;
            let proto = self.series_proto();
            for (i, th) in self.theta.iter().enumerate() {
                let th_l = th.map(&proto, |x| self.constant_series(x.clone()));
                let left = b.clone() * th_l.clone();
                let right = (th_l * b.clone()).scale(&shift);
                if left != right {
                    out.equivariance_failures += 1;
                    out.witness.get_or_insert_with(|| {
                        format!("trial {t}: B_g θ{} ≠ θ{} B_g (1 + πE′(π)(ζ-1)λc)", i + 1, i + 1)
                    });
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleCheck {
    pub trials: usize,
    pub cocycle_failures: usize,
    pub semidirect_failures: usize,
    pub equivariance_failures: usize,
    /// Lowest p-adic precision at which the compared coefficients are known.
    pub precision_floor: u32,
    pub witness: Option<String>,
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        self.cocycle_failures == 0 && self.semidirect_failures == 0 && self.equivariance_failures == 0
    }
}
