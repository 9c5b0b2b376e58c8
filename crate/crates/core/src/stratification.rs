//! Stratifications `ε = Σ φ_{k,n} X_1^{[k]} Y_1^{[n]}` attached to enhanced
//! Higgs modules, the cocycle condition and the inverse construction.

use std::fmt::{self, Display};

use crate::dp::{degeneracy, face, format_monomial, total_degree, DpPoly, Shape, Var};
use crate::error::{Error, Result};
use crate::higgs::EnhancedHiggsModule;
use crate::matrix::Matrix;
use crate::scalar::{binomial, Coefficient};
use crate::series::pochhammer;

const MAX_DEGREE: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Stratification<C: Coefficient> {
    pub a: C,
    pub eps: DpPoly<Matrix<C>>,
}

/// `∏_s θ_s^{n_s}`.
fn theta_power<C: Coefficient>(theta: &[Matrix<C>], n: &[u32], r: usize, proto: &C) -> Matrix<C> {
    let mut acc = Matrix::identity(r, proto);
    for (t, &k) in theta.iter().zip(n) {
        if k > 0 {
            acc = acc * t.pow(k);
        }
    }
    acc
}

/// `φ_{k,n} = ∏θ_s^{n_s} · ∏_{j<k}(φ + ja)`, with no enhancement assumed.
pub fn family_coefficient<C: Coefficient>(m: &EnhancedHiggsModule<C>, k: u32, n: &[u32]) -> Matrix<C> {
    let poch = pochhammer(&m.phi, &m.a, k as usize).pop().expect("nonempty");
    theta_power(&m.theta, n, m.rank(), m.proto()) * poch
}

/// The same coefficient written as `∏_{j<k}(φ + (j+|n|)a) · ∏θ_s^{n_s}`.
fn family_coefficient_binomial_first<C: Coefficient>(m: &EnhancedHiggsModule<C>, k: u32, n: &[u32]) -> Matrix<C> {
    let shift: u32 = n.iter().sum();
    let shifted_phi = m.phi.clone() + Matrix::scalar(m.rank(), &m.a.scale_int(shift as i64));
    let poch = pochhammer(&shifted_phi, &m.a, k as usize).pop().expect("nonempty");
    poch * theta_power(&m.theta, n, m.rank(), m.proto())
}

fn level_one(d: usize, degree: u32) -> Shape {
    Shape::arith(1, d, degree)
}

fn split(e: &[u32]) -> (u32, &[u32]) {
    (e[0], &e[1..])
}

impl<C: Coefficient> Stratification<C> {
    /// The stratification of an enhanced module, truncated at total degree `degree`.
    pub fn build(m: &EnhancedHiggsModule<C>, degree: u32) -> Result<Self> {
        let report = m.check_enhanced(0);
        if let Some(f) = report.first_failure() {
            return Err(Error::NotEnhanced(format!(
                "{}: {}",
                f.name,
                f.witness.clone().unwrap_or_default()
            )));
        }
        let s = Self::from_family(m, degree)?;
        for (e, c) in s.eps.terms() {
            let (k, n) = split(e);
            if family_coefficient_binomial_first(m, k, n) != *c {
                return Err(Error::NotEnhanced(format!(
                    "product orders disagree at {}",
                    format_monomial(&s.shape(), e)
                )));
            }
        }
        Ok(s)
    }

    /// The coefficient family of `m` without checking that `m` is enhanced.
    pub fn from_family(m: &EnhancedHiggsModule<C>, degree: u32) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::Truncation {
                requested: degree as i64,
                bound: MAX_DEGREE as i64,
            });
        }
        let shape = level_one(m.dim(), degree);
        let proto = Matrix::zeros(m.rank(), m.rank(), m.proto());
        let mut eps = DpPoly::zero(shape, &proto);
        for e in shape.monomials(degree) {
            let (k, n) = split(&e);
            let c = family_coefficient(m, k, n);
            eps.insert_add(e, c);
        }
        Ok(Stratification { a: m.a.clone(), eps })
    }

    /// A raw family given by its dp-polynomial.
    pub fn from_eps(a: C, eps: DpPoly<Matrix<C>>) -> Result<Self> {
        let shape = eps.shape();
        if !(shape.arith && shape.n == 1) {
            return Err(Error::Dimension("ε must live on the level-one arithmetic ring".into()));
        }
        Ok(Stratification { a, eps })
    }

    pub fn shape(&self) -> Shape {
        self.eps.shape()
    }

    pub fn degree(&self) -> u32 {
        self.shape().degree
    }

    pub fn dim(&self) -> usize {
        self.shape().d
    }

    pub fn rank(&self) -> usize {
        self.eps.proto().rows()
    }

    pub fn scalar_proto(&self) -> &C {
        self.eps.proto().proto()
    }

    /// `φ_{k,n}`.
    pub fn coefficient(&self, k: u32, n: &[u32]) -> Matrix<C> {
        let mut e = vec![k];
        e.extend_from_slice(n);
        let c = self.eps.coeff(&e);
        if c.rows() == 0 && self.rank() > 0 {
            return Matrix::zeros(self.rank(), self.rank(), self.scalar_proto());
        }
        c
    }

    /// `(θ, φ) = ((φ_{0,1_s})_s, φ_{1,0})`.
    pub fn extract(&self) -> Result<EnhancedHiggsModule<C>> {
        let d = self.dim();
        let id = Matrix::identity(self.rank(), self.scalar_proto());
        if self.coefficient(0, &vec![0; d]) != id {
            return Err(Error::Dimension("φ_{0,0} is not the identity".into()));
        }
        let theta = (0..d)
            .map(|s| {
                let mut n = vec![0; d];
                n[s] = 1;
                self.coefficient(0, &n)
            })
            .collect();
        EnhancedHiggsModule::new(self.a.clone(), theta, self.coefficient(1, &vec![0; d]))
    }

    fn scalar_a(&self) -> Matrix<C> {
        Matrix::scalar(self.rank(), &self.a)
    }

    /// `p_2^*(ε)·p_0^*(ε) - p_1^*(ε)` on the level-two ring.
    pub fn cocycle_defect(&self) -> DpPoly<Matrix<C>> {
        let a = self.scalar_a();
        let shape = self.shape();
        let p0 = face(shape, 0).apply(&self.eps, &a);
        let p1 = face(shape, 1).apply(&self.eps, &a);
        let p2 = face(shape, 2).apply(&self.eps, &a);
        p2 * p0 - p1
    }

    pub fn check_cocycle(&self) -> CocycleReport<C> {
        let shape = self.shape();
        let target = shape.with_n(2);
        let defect = self.cocycle_defect();
        let per_degree = (0..=shape.degree)
            .map(|k| defect.homogeneous_part(k).is_zero_poly())
            .collect();
        let witness = defect
            .canonical_terms()
            .first()
            .map(|(e, c)| (format_monomial(&target, e), (*c).clone()));
        let sigma = degeneracy(shape, 0).apply(&self.eps, &self.scalar_a());
        let id = Matrix::identity(self.rank(), self.scalar_proto());
        CocycleReport {
            degree: shape.degree,
            per_degree,
            witness,
            degeneracy_ok: sigma == DpPoly::constant(shape.with_n(0), id),
        }
    }

    /// Coefficient of `X_1 Y_{s,1}` in the cocycle defect.
    pub fn mixed_defect(&self, s: usize) -> Matrix<C> {
        let target = self.shape().with_n(2);
        let mut e = vec![0; target.nvars()];
        e[target.index(Var::X(1))] = 1;
        e[target.index(Var::Y(s, 1))] = 1;
        let c = self.cocycle_defect().coeff(&e);
        if c.rows() == 0 {
            Matrix::zeros(self.rank(), self.rank(), self.scalar_proto())
        } else {
            c
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocycleReport<C: Coefficient> {
    pub degree: u32,
    /// Whether the defect vanishes in each total degree `0..=degree`.
    pub per_degree: Vec<bool>,
    /// First nonzero monomial of the defect, in canonical order.
    pub witness: Option<(String, Matrix<C>)>,
    /// Whether `σ_0^*(ε)` is the identity.
    pub degeneracy_ok: bool,
}

impl<C: Coefficient> CocycleReport<C> {
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.degeneracy_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TechniqueReport<C: Coefficient> {
    pub degree: u32,
    pub checked: usize,
    /// `(k, n)`, the monomial, and the residual coefficient.
    pub failure: Option<(u32, Vec<u32>, String, Matrix<C>)>,
}

impl<C: Coefficient> TechniqueReport<C> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `(1 - aX)^{-t} = Σ_μ binom(t+μ-1, μ)·a^μ·μ!·X^{[μ]}`.
fn geometric_power<C: Coefficient>(shape: Shape, t: u32, a: &C) -> DpPoly<C> {
    let mut p = DpPoly::zero(shape, a);
    let x = shape.index(Var::X(1));
    for mu in 0..=shape.degree {
        let mut e = vec![0; shape.nvars()];
        e[x] = mu;
        let c = if t == 0 {
            if mu == 0 {
                a.one_like()
            } else {
                continue;
            }
        } else {
            a.pow(mu)
                .scale_int(binomial((t + mu - 1) as u64, mu as u64) * crate::scalar::factorial(mu as u64))
        };
        p.insert_add(e, c);
    }
    p
}

/// Checks that for every `k + |n| <= degree`
/// `Σ φ_{i,l} φ_{j+k,m+n} (1-aX)^{-j-k-|m|-|n|} (-1)^{j+|m|} binom(i+j,i) binom(l+m,l) X^{[i+j]} Y^{[l+m]}`
/// equals the constant `φ_{k,n}`, using the coefficient family of `m`.
pub fn verify_technique_equivalence<C: Coefficient>(m: &EnhancedHiggsModule<C>, degree: u32) -> TechniqueReport<C> {
    let d = m.dim();
    let r = m.rank();
    let shape = level_one(d, degree);
    let mproto = Matrix::zeros(r, r, m.proto());
    let a_mat = Matrix::scalar(r, &m.a);
    let indices = shape.monomials(degree);
    let mut checked = 0;
    let mut family = std::collections::HashMap::new();
    let mut coefficient = |k: u32, n: &[u32]| -> Matrix<C> {
        family
            .entry((k, n.to_vec()))
            .or_insert_with(|| family_coefficient(m, k, n))
            .clone()
    };
    let mut geo_cache = std::collections::HashMap::new();
    for kn in &indices {
        let (k, n) = split(kn);
        let target = coefficient(k, n);
        // Terms sharing the exponent t of (1-aX)^{-t} are summed before the product.
        let mut by_t: std::collections::BTreeMap<u32, DpPoly<Matrix<C>>> = std::collections::BTreeMap::new();
        for il in &indices {
            let (i, l) = split(il);
            for jm in &indices {
                let (j, mm) = split(jm);
                if total_degree(il) + total_degree(jm) > degree {
                    continue;
                }
                let abs_m: u32 = mm.iter().sum();
                let abs_n: u32 = n.iter().sum();
                let mut coef = binomial((i + j) as u64, i as u64);
                for (ls, ms) in l.iter().zip(mm) {
                    coef *= binomial((ls + ms) as u64, *ls as u64);
                }
                if (j + abs_m) % 2 == 1 {
                    coef = -coef;
                }
                let shifted: Vec<u32> = mm.iter().zip(n).map(|(x, y)| x + y).collect();
                let c = coefficient(i, l) * coefficient(j + k, &shifted);
                let mut e = vec![i + j];
                e.extend(l.iter().zip(mm).map(|(x, y)| x + y));
                let t = j + k + abs_m + abs_n;
                by_t.entry(t)
                    .or_insert_with(|| DpPoly::zero(shape, &mproto))
                    .insert_add(e, c.scale_int(coef));
            }
        }
        let mut lhs = DpPoly::zero(shape, &mproto);
        for (t, part) in by_t {
            let g = geo_cache
                .entry(t)
                .or_insert_with(|| geometric_power(shape, t, &a_mat))
                .clone();
            lhs = lhs + part * g;
        }
        checked += 1;
        let residual = lhs - DpPoly::constant(shape, target);
        if let Some((e, c)) = residual.canonical_terms().first() {
            return TechniqueReport {
                degree,
                checked,
                failure: Some((k, n.to_vec(), format_monomial(&shape, e), (*c).clone())),
            };
        }
    }
    TechniqueReport {
        degree,
        checked,
        failure: None,
    }
}

/// Canonical text dump: a header of `key = value` lines followed by one
/// `monomial : [[row], ...]` line per nonzero coefficient.
pub fn dump_eps<C: Coefficient + Display>(s: &Stratification<C>, header: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("{k} = {v}\n"));
    }
    let shape = s.shape();
    out.push_str(&format!("d = {}\n", shape.d));
    out.push_str(&format!("rank = {}\n", s.rank()));
    out.push_str(&format!("degree = {}\n", shape.degree));
    out.push_str(&format!("a = {}\n", s.a));
    for (e, c) in s.eps.canonical_terms() {
        out.push_str(&format!("{} : {}\n", format_monomial(&shape, e), MatrixText(c)));
    }
    out
}

/// Renders a matrix as `[[a, b], [c, d]]`.
pub struct MatrixText<'a, C>(pub &'a Matrix<C>);

impl<C: Coefficient + Display> Display for MatrixText<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.0.rows() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.0.cols() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.0[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_base_ring, PrimeConfig, Scalar};

    fn base(p: u64, n: u32, e: Vec<i64>) -> (Scalar, Scalar) {
        let r = make_base_ring(&PrimeConfig::new(p, n, e).unwrap()).unwrap();
        (Scalar::zero(&r), Scalar::e_prime_at_pi(&r))
    }

    fn e12(z: &Scalar) -> Matrix<Scalar> {
        let mut m = Matrix::zeros(2, 2, z);
        m[(0, 1)] = z.one_like();
        m
    }

    fn two_by_two(z: &Scalar, a: &Scalar) -> EnhancedHiggsModule<Scalar> {
        EnhancedHiggsModule::new(a.clone(), vec![e12(z)], Matrix::diagonal(&[z.clone(), a.clone()], z)).unwrap()
    }

    #[test]
    fn bk_twist_is_binomial() {
        let (_, a) = base(3, 6, vec![-3, 0, 1]);
        for n in -3..=3i64 {
            let m = EnhancedHiggsModule::bk_twist_unit(n, &a, 0);
            let s = Stratification::build(&m, 4).unwrap();
            assert_eq!(s.coefficient(1, &[])[(0, 0)], a.scale_int(-n));
            assert!(s.check_cocycle().passed());
            let back = s.extract().unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn mixed_coefficient_example() {
        let (z, a) = base(2, 8, vec![-2, 1]);
        let m = two_by_two(&z, &a);
        let s = Stratification::build(&m, 4).unwrap();
        let mut expect = Matrix::zeros(2, 2, &z);
        expect[(0, 1)] = a.clone();
        assert_eq!(s.coefficient(1, &[1]), expect);
        let rep = s.check_cocycle();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.per_degree, vec![true; 5]);
        assert_eq!(s.extract().unwrap(), m);
    }

    #[test]
    fn broken_relation_is_witnessed() {
        let (z, a) = base(3, 6, vec![-3, 1]);
        let m = EnhancedHiggsModule::new(a.clone(), vec![e12(&z)], Matrix::zeros(2, 2, &z)).unwrap();
        assert!(matches!(Stratification::build(&m, 3), Err(Error::NotEnhanced(_))));
        let s = Stratification::from_family(&m, 3).unwrap();
        let rep = s.check_cocycle();
        assert!(!rep.passed());
        assert_eq!(rep.witness.as_ref().unwrap().0, "X1*Y1,1");
        let defect = m.phi.commutator(&m.theta[0]) + m.theta[0].scale(&a);
        assert_eq!(s.mixed_defect(1), -defect);
    }

    #[test]
    fn identity_stratification() {
        let (z, a) = base(5, 4, vec![-5, 1]);
        let m = EnhancedHiggsModule::new(a, vec![Matrix::zeros(2, 2, &z); 2], Matrix::zeros(2, 2, &z)).unwrap();
        let s = Stratification::build(&m, 4).unwrap();
        assert_eq!(s.eps, DpPoly::constant(s.shape(), Matrix::identity(2, &z)));
        assert!(s.check_cocycle().passed());
    }

    #[test]
    fn technique_identity() {
        let (z, a) = base(2, 8, vec![-2, 1]);
        let m = two_by_two(&z, &a);
        assert!(verify_technique_equivalence(&m, 4).passed());
        let bk = EnhancedHiggsModule::bk_twist_unit(2, &a, 0);
        assert!(verify_technique_equivalence(&bk, 5).passed());
        let bad = EnhancedHiggsModule::new(a.clone(), vec![e12(&z)], Matrix::zeros(2, 2, &z)).unwrap();
        assert!(!verify_technique_equivalence(&bad, 3).passed());
    }

    #[test]
    fn rational_technique_identity() {
        use num_rational::BigRational;
        let q = |n: i64| BigRational::from_integer(n.into());
        let theta = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]], &q(0)).unwrap();
        let phi = Matrix::diagonal(&[q(3), q(3) + q(2)], &q(0));
        let m = EnhancedHiggsModule::new(q(2), vec![theta], phi).unwrap();
        assert!(verify_technique_equivalence(&m, 4).passed());
        assert!(Stratification::build(&m, 5).unwrap().check_cocycle().passed());
    }

    #[test]
    fn dump_is_canonical() {
        let (_, a) = base(3, 4, vec![-3, 1]);
        let s = Stratification::build(&EnhancedHiggsModule::bk_twist_unit(1, &a, 0), 2).unwrap();
        let text = dump_eps(&s, &[]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[..4], ["d = 0", "rank = 1", "degree = 2", "a = 1"]);
        assert_eq!(lines[4], "1 : [[1]]");
        assert_eq!(lines[5], "X1 : [[-1]]");
        assert_eq!(lines.len(), 6);
    }
}
