use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime, the target absolute precision `N`, and the Eisenstein polynomial
/// `E(u)` (coefficients in ascending degree, monic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeConfig {
    pub p: u64,
    pub n: u32,
    pub e_coeffs: Vec<i64>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl PrimeConfig {
    pub fn new(p: u64, n: u32, e_coeffs: Vec<i64>) -> Result<Self> {
        let cfg = Self { p, n, e_coeffs };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `E(u) = u - p`.
    pub fn unramified(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, vec![-(p as i64), 1])
    }

    /// `E(u) = u^2 - p`.
    pub fn quadratic(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, vec![-(p as i64), 0, 1])
    }

    pub fn ramification(&self) -> usize {
        self.e_coeffs.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidConfig(format!("{} is not prime", self.p)));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig("precision N must be at least 2".into()));
        }
        let p = self.p as i64;
        let eis = |reason: &str| Error::NotEisenstein {
            p: self.p,
            reason: reason.to_string(),
        };
        if self.e_coeffs.len() < 2 {
            return Err(eis("degree must be at least 1"));
        }
        if *self.e_coeffs.last().unwrap() != 1 {
            return Err(eis("leading coefficient must be 1"));
        }
        let deg = self.e_coeffs.len() - 1;
        if self.e_coeffs[..deg].iter().any(|c| c % p != 0) {
            return Err(eis("non-leading coefficients must be divisible by p"));
        }
        if self.e_coeffs[0] % (p * p) == 0 {
            return Err(eis("constant term must not be divisible by p^2"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_validation() {
        assert!(PrimeConfig::new(2, 8, vec![-2, 1]).is_ok());
        assert!(PrimeConfig::new(3, 6, vec![-3, 0, 1]).is_ok());
        assert!(matches!(PrimeConfig::new(3, 6, vec![-9, 0, 1]), Err(Error::NotEisenstein { .. })));
        assert!(matches!(PrimeConfig::new(3, 6, vec![-3, 1, 1]), Err(Error::NotEisenstein { .. })));
        assert!(matches!(PrimeConfig::new(3, 6, vec![-3, 2]), Err(Error::NotEisenstein { .. })));
        assert!(matches!(PrimeConfig::new(4, 6, vec![-2, 1]), Err(Error::InvalidConfig(_))));
        assert!(matches!(PrimeConfig::new(5, 1, vec![-5, 1]), Err(Error::InvalidConfig(_))));
    }
}
