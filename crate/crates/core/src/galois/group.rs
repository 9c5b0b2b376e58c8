//! `Ĝ` as pairs `(χ, c)` with the law of upper-triangular 2×2 matrices
//! `(χ c; 0 1)`, and its semidirect product with the geometric part `Z_p^d`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// `(χ, c)` with `χ` a unit and `c` arbitrary, both mod `modulus = p^W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupElement {
    pub chi: u64,
    pub c: u64,
    #[serde(skip)]
    pub p: u64,
    #[serde(skip)]
    pub modulus: u64,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl GroupElement {
    pub fn new(chi: i64, c: i64, p: u64, modulus: u64) -> Result<Self> {
        let chi = chi.rem_euclid(modulus as i64) as u64;
        if chi.is_multiple_of(p) {
            return Err(Error::NotUnit);
        }
        Ok(GroupElement {
            chi,
            c: c.rem_euclid(modulus as i64) as u64,
            p,
            modulus,
        })
    }

    pub fn identity(p: u64, modulus: u64) -> Self {
        GroupElement { chi: 1, c: 0, p, modulus }
    }

    /// The Kummer generator: `χ = 1`, `c = 1`.
    pub fn tau(p: u64, modulus: u64) -> Self {
        GroupElement { chi: 1, c: 1, p, modulus }
    }

    /// `τ^k = (1, k)`.
    pub fn tau_pow(k: u64, p: u64, modulus: u64) -> Self {
        GroupElement {
            chi: 1,
            c: k % modulus,
            p,
            modulus,
        }
    }

    /// `(χ₁, c₁)·(χ₂, c₂) = (χ₁χ₂, χ₁c₂ + c₁)`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = self.modulus;
        GroupElement {
            chi: mulmod(self.chi, other.chi, m),
            c: (mulmod(self.chi, other.c, m) + self.c) % m,
            p: self.p,
            modulus: m,
        }
    }

    pub fn random<R: Rng>(rng: &mut R, p: u64, modulus: u64) -> Self {
        let chi = loop {
            let x = rng.gen_range(1..modulus);
            if x % p != 0 {
                break x;
            }
        };
        GroupElement {
            chi,
            c: rng.gen_range(0..modulus),
            p,
            modulus,
        }
    }
}

/// `γ^n · g` with `γ^n = γ_1^{n_1}⋯γ_d^{n_d}`; `gγ_ig^{-1} = γ_i^{χ(g)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullElement {
    pub geo: Vec<u64>,
    pub g: GroupElement,
}

impl FullElement {
    pub fn arithmetic(g: GroupElement, d: usize) -> Self {
        FullElement { geo: vec![0; d], g }
    }

    pub fn geometric(geo: Vec<u64>, p: u64, modulus: u64) -> Self {
        FullElement {
            geo,
            g: GroupElement::identity(p, modulus),
        }
    }

    /// `(n₁, g₁)(n₂, g₂) = (n₁ + χ(g₁)n₂, g₁g₂)`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = self.g.modulus;
        let geo = self
            .geo
            .iter()
            .zip(&other.geo)
            .map(|(a, b)| (a + mulmod(self.g.chi, *b, m)) % m)
            .collect();
        FullElement {
            geo,
            g: self.g.compose(&other.g),
        }
    }

    pub fn random<R: Rng>(rng: &mut R, d: usize, p: u64, modulus: u64) -> Self {
        let g = GroupElement::random(rng, p, modulus);
        let geo = (0..d).map(|_| rng.gen_range(0..modulus)).collect();
        FullElement { geo, g }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_law() {
        let m = 3u64.pow(6);
        let g1 = GroupElement::new(2, 5, 3, m).unwrap();
        let g2 = GroupElement::new(4, 7, 3, m).unwrap();
        // (2 5; 0 1)(4 7; 0 1) = (8 19; 0 1)
        assert_eq!(g1.compose(&g2), GroupElement::new(8, 19, 3, m).unwrap());
        assert!(GroupElement::new(3, 0, 3, m).is_err());
    }

    #[test]
    fn associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = 5u64.pow(4);
        for _ in 0..50 {
            let a = FullElement::random(&mut rng, 2, 5, m);
            let b = FullElement::random(&mut rng, 2, 5, m);
            let c = FullElement::random(&mut rng, 2, 5, m);
            assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }
    }

    #[test]
    fn tau_powers() {
        let m = 2u64.pow(8);
        let t = GroupElement::tau(2, m);
        let mut acc = GroupElement::identity(2, m);
        for _ in 0..4 {
            acc = acc.compose(&t);
        }
        assert_eq!(acc, GroupElement::tau_pow(4, 2, m));
    }
}
