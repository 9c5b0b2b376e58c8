//! Enhanced Higgs modules `(H, θ_1, …, θ_d, φ)` as matrix data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::ChainComplex;
use crate::matrix::Matrix;
use crate::series::pochhammer;
use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq)]
pub struct EnhancedHiggsModule<C> {
    pub a: C,
    pub theta: Vec<Matrix<C>>,
    pub phi: Matrix<C>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnhancementCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnhancementReport {
    pub checks: Vec<EnhancementCheck>,
    /// Least `n` with `∏_{i<n}(φ + ia) = 0`, if found within the bound.
    pub nilpotence_index: Option<usize>,
    pub nilpotence_bound: usize,
}

impl EnhancementReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&EnhancementCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl<C: Coefficient> EnhancedHiggsModule<C> {
    pub fn new(a: C, theta: Vec<Matrix<C>>, phi: Matrix<C>) -> Result<Self> {
        let r = phi.rows();
        if !phi.is_square() {
            return Err(Error::Dimension("φ is not square".into()));
        }
        for (i, t) in theta.iter().enumerate() {
            if t.rows() != r || t.cols() != r {
                return Err(Error::Dimension(format!(
                    "θ{} is {}x{}, expected {r}x{r}",
                    i + 1,
                    t.rows(),
                    t.cols()
                )));
            }
        }
        Ok(EnhancedHiggsModule { a, theta, phi })
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn proto(&self) -> &C {
        self.phi.proto()
    }

    /// The rank-one module `(R, 0, -n·a)`.
    pub fn bk_twist_unit(n: i64, a: &C, d: usize) -> Self {
        let z = Matrix::zeros(1, 1, a);
        EnhancedHiggsModule {
            a: a.clone(),
            theta: vec![z; d],
            phi: Matrix::scalar(1, &a.scale_int(-n)),
        }
    }

    /// `φ ↦ φ - n·a`.
    pub fn twist(&self, n: i64) -> Self {
        let shift = Matrix::scalar(self.rank(), &self.a.scale_int(-n));
        EnhancedHiggsModule {
            a: self.a.clone(),
            theta: self.theta.clone(),
            phi: self.phi.clone() + shift,
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("tensor of modules with different d".into()));
        }
        let i1 = Matrix::identity(self.rank(), self.proto());
        let i2 = Matrix::identity(other.rank(), other.proto());
        let sum = |x: &Matrix<C>, y: &Matrix<C>| x.kron(&i2) + i1.kron(y);
        Ok(EnhancedHiggsModule {
            a: self.a.clone(),
            theta: self.theta.iter().zip(&other.theta).map(|(x, y)| sum(x, y)).collect(),
            phi: sum(&self.phi, &other.phi),
        })
    }

    pub fn dual(&self) -> Self {
        EnhancedHiggsModule {
            a: self.a.clone(),
            theta: self.theta.iter().map(|t| -t.transpose()).collect(),
            phi: -self.phi.transpose(),
        }
    }

    /// Checks the defining identities; `nilpotence_bound` caps the search for
    /// `∏(φ + ia) = 0`.
    pub fn check_enhanced(&self, nilpotence_bound: usize) -> EnhancementReport {
        let mut checks = Vec::new();
        let d = self.dim();
        let mut comm_fail = None;
        'outer: for i in 0..d {
            for j in i + 1..d {
                let c = self.theta[i].commutator(&self.theta[j]);
                if !c.is_zero_matrix() {
                    comm_fail = Some(format!("[θ{},θ{}] = {:?}", i + 1, j + 1, c));
                    break 'outer;
                }
            }
        }
        checks.push(EnhancementCheck {
            name: "[θi,θj] = 0".into(),
            passed: comm_fail.is_none(),
            witness: comm_fail,
        });
        let mut pt_fail = None;
        for (i, t) in self.theta.iter().enumerate() {
            let defect = self.phi.commutator(t) + t.scale(&self.a);
            if !defect.is_zero_matrix() {
                pt_fail = Some(format!("[φ,θ{}] + aθ{} = {:?}", i + 1, i + 1, defect));
                break;
            }
        }
        checks.push(EnhancementCheck {
            name: "[φ,θi] = -aθi".into(),
            passed: pt_fail.is_none(),
            witness: pt_fail,
        });
        let mut nil_fail = None;
        for (i, t) in self.theta.iter().enumerate() {
            if !t.pow(self.rank() as u32).is_zero_matrix() {
                nil_fail = Some(format!("θ{}^{} ≠ 0", i + 1, self.rank()));
                break;
            }
        }
        checks.push(EnhancementCheck {
            name: "θi^r = 0".into(),
            passed: nil_fail.is_none(),
            witness: nil_fail,
        });
        let nilpotence_index = pochhammer(&self.phi, &self.a, nilpotence_bound)
            .iter()
            .position(|m| m.is_zero_matrix());
        EnhancementReport {
            checks,
            nilpotence_index,
            nilpotence_bound,
        }
    }

    /// Whether all identities hold (topological nilpotence is not required).
    pub fn is_enhanced(&self) -> bool {
        self.check_enhanced(0).passed()
    }

    /// The Koszul complex of `θ_1, …, θ_d` on `H`.
    pub fn higgs_complex(&self) -> ChainComplex<C> {
        ChainComplex::koszul(&self.theta, self.rank(), self.proto())
    }

    /// The fiber of `φ` on the Higgs complex, with `φ + q·a` in degree `q`.
    pub fn enhanced_higgs_complex(&self) -> Result<ChainComplex<C>> {
        let report = self.check_enhanced(0);
        if let Some(f) = report.first_failure() {
            return Err(Error::NotEnhanced(format!("{}: {}", f.name, f.witness.clone().unwrap_or_default())));
        }
        let r = self.rank();
        let koszul = self.higgs_complex();
        let maps: Vec<Matrix<C>> = (0..koszul.len())
            .map(|q| {
                let block = self.phi.clone() + Matrix::scalar(r, &self.a.scale_int(q as i64));
                let copies = koszul.rank(q) / r;
                Matrix::identity(copies, self.proto()).kron(&block)
            })
            .collect();
        let fib = ChainComplex::fiber(&koszul, &maps);
        fib.check_square_zero()?;
        Ok(fib)
    }
}
