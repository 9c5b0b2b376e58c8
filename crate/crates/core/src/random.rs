//! Seeded random enhanced Higgs modules and single-relation mutations.
//!
//! A module is built on a weight grading `w_1, …, w_r >= 1`: `φ = -a·diag(w)`,
//! each `θ_s` raises the weight by one, and the whole datum is conjugated by a
//! random unimodular matrix. Then `-φ/a` is integral and `∏(φ + ia)` vanishes
//! exactly once `i` passes the largest weight.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::galois::inverse_unipotent;
use crate::higgs::EnhancedHiggsModule;
use crate::matrix::Matrix;
use crate::ring::{PrimeConfig, Ring, Scalar};
use crate::scalar::Coefficient;

/// The generator for instance `id` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// `E = u - p` and `E = u^2 - p` for `p ∈ {2, 3, 5}`.
pub fn standard_configs(n: u32) -> Vec<PrimeConfig> {
    [2u64, 3, 5]
        .iter()
        .flat_map(|&p| {
            [PrimeConfig::unramified(p, n), PrimeConfig::quadratic(p, n)]
        })
        .collect::<Result<_>>()
        .expect("standard configurations are Eisenstein")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// `[θ_1, θ_2] ≠ 0`, everything else intact.
    Commutator,
    /// `[φ, θ_1] ≠ -aθ_1`, everything else intact.
    PhiTheta,
}

#[derive(Debug, Clone)]
pub struct Mutation {
    pub kind: MutationKind,
    /// `[θ_1, θ_2]` or `[φ, θ_1] + aθ_1`.
    pub defect: Matrix<Scalar>,
}

#[derive(Debug, Clone)]
pub struct RandomModule {
    pub module: EnhancedHiggsModule<Scalar>,
    pub weights: Vec<u32>,
    pub mutation: Option<Mutation>,
}

fn small<R: Rng>(ring: &Ring, rng: &mut R) -> Scalar {
    Scalar::random_small(ring, rng, 3)
}

fn nonzero_small<R: Rng>(ring: &Ring, rng: &mut R) -> Scalar {
    loop {
        let x = small(ring, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random `P` with `det P = 1` and its inverse.
fn unimodular<R: Rng>(ring: &Ring, r: usize, rng: &mut R) -> (Matrix<Scalar>, Matrix<Scalar>) {
    let zero = Scalar::zero(ring);
    let lower = Matrix::from_fn(r, r, &zero, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => zero.one_like(),
        std::cmp::Ordering::Greater => small(ring, rng),
        std::cmp::Ordering::Less => zero.clone(),
    });
    let upper = Matrix::from_fn(r, r, &zero, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => zero.one_like(),
        std::cmp::Ordering::Less => small(ring, rng),
        std::cmp::Ordering::Greater => zero.clone(),
    });
    let inv = inverse_unipotent(&upper).expect("unipotent") * inverse_unipotent(&lower).expect("unipotent");
    (lower * upper, inv)
}

fn conjugate(m: EnhancedHiggsModule<Scalar>, p: &Matrix<Scalar>, pinv: &Matrix<Scalar>) -> EnhancedHiggsModule<Scalar> {
    let c = |x: &Matrix<Scalar>| p.clone() * x.clone() * pinv.clone();
    EnhancedHiggsModule {
        a: m.a.clone(),
        theta: m.theta.iter().map(c).collect(),
        phi: c(&m.phi),
    }
}

fn phi_from_weights(ring: &Ring, weights: &[u32]) -> Matrix<Scalar> {
    let a = Scalar::e_prime_at_pi(ring);
    let zero = Scalar::zero(ring);
    let diag: Vec<Scalar> = weights.iter().map(|&w| -(a.scale_int(w as i64))).collect();
    Matrix::diagonal(&diag, &zero)
}

/// Graded data before conjugation: weights and commuting weight-raising `θ_s`.
fn graded<R: Rng>(ring: &Ring, d: usize, r: usize, rng: &mut R) -> (Vec<u32>, Vec<Matrix<Scalar>>) {
    let zero = Scalar::zero(ring);
    let offset = rng.gen_range(1..=2u32);
    let chain = r >= 3 && rng.gen_bool(0.5);
    if chain {
        // θ_s = c_s·N for one weight-raising N on the chain e_1 → e_2 → ⋯.
        let weights: Vec<u32> = (0..r as u32).map(|k| offset + k).collect();
        let n = Matrix::from_fn(r, r, &zero, |i, j| if i == j + 1 { nonzero_small(ring, rng) } else { zero.clone() });
        let theta = (0..d).map(|_| n.scale(&small(ring, rng))).collect();
        (weights, theta)
    } else {
        // Two levels: any maps from level 0 to level 1 commute, all products vanish.
        let mut levels: Vec<u32> = (0..r).map(|_| rng.gen_range(0..=1)).collect();
        if r >= 2 {
            levels[0] = 0;
            levels[r - 1] = 1;
        }
        let weights: Vec<u32> = levels.iter().map(|l| offset + l).collect();
        let theta = (0..d)
            .map(|_| {
                Matrix::from_fn(r, r, &zero, |i, j| {
                    if levels[i] == 1 && levels[j] == 0 {
                        small(ring, rng)
                    } else {
                        zero.clone()
                    }
                })
            })
            .collect();
        (weights, theta)
    }
}

/// A random enhanced module of rank `r` with `d` Higgs fields.
pub fn random_enhanced<R: Rng>(ring: &Ring, d: usize, r: usize, rng: &mut R) -> RandomModule {
    let (weights, theta) = graded(ring, d, r, rng);
    let m = EnhancedHiggsModule {
        a: Scalar::e_prime_at_pi(ring),
        theta,
        phi: phi_from_weights(ring, &weights),
    };
    let (p, pinv) = unimodular(ring, r, rng);
    RandomModule {
        module: conjugate(m, &p, &pinv),
        weights,
        mutation: None,
    }
}

/// Rank 3, `d = 2`, weights `(w, w+1, w+2)`, `θ_1 = c_1 E_{21}`, `θ_2 = c_2 E_{32}`:
/// only `[θ_1, θ_2] = 0` fails.
pub fn mutate_commutator<R: Rng>(ring: &Ring, rng: &mut R) -> RandomModule {
    let zero = Scalar::zero(ring);
    let offset = rng.gen_range(1..=2u32);
    let weights = vec![offset, offset + 1, offset + 2];
    let mut t1 = Matrix::zeros(3, 3, &zero);
    t1[(1, 0)] = unit_small(ring, rng);
    let mut t2 = Matrix::zeros(3, 3, &zero);
    t2[(2, 1)] = unit_small(ring, rng);
    let m = EnhancedHiggsModule {
        a: Scalar::e_prime_at_pi(ring),
        theta: vec![t1, t2],
        phi: phi_from_weights(ring, &weights),
    };
    let (p, pinv) = unimodular(ring, 3, rng);
    let module = conjugate(m, &p, &pinv);
    let defect = module.theta[0].commutator(&module.theta[1]);
    RandomModule {
        module,
        weights,
        mutation: Some(Mutation {
            kind: MutationKind::Commutator,
            defect,
        }),
    }
}

fn unit_small<R: Rng>(ring: &Ring, rng: &mut R) -> Scalar {
    loop {
        let x = small(ring, rng);
        if x.is_unit() {
            return x;
        }
    }
}

/// A random enhanced module of rank `r >= 2` whose weight grading is shifted at
/// one basis vector touched by `θ_1`; `θ_2, …` are set to zero so that only
/// `[φ, θ_1] = -aθ_1` fails.
pub fn mutate_phi<R: Rng>(ring: &Ring, d: usize, r: usize, rng: &mut R) -> RandomModule {
    assert!(r >= 2 && d >= 1);
    let zero = Scalar::zero(ring);
    let (mut weights, mut theta) = graded(ring, d, r, rng);
    // θ_1 must be nonzero with a unit entry so the defect survives at precision N.
    let (i, j) = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .find(|&(i, j)| weights[i] == weights[j] + 1)
        .expect("grading has two adjacent levels");
    theta[0] = Matrix::zeros(r, r, &zero);
    theta[0][(i, j)] = unit_small(ring, rng);
    for t in theta.iter_mut().skip(1) {
        *t = Matrix::zeros(r, r, &zero);
    }
    weights[i] += 1;
    let m = EnhancedHiggsModule {
        a: Scalar::e_prime_at_pi(ring),
        theta,
        phi: phi_from_weights(ring, &weights),
    };
    let (p, pinv) = unimodular(ring, r, rng);
    let module = conjugate(m, &p, &pinv);
    let defect = module.phi.commutator(&module.theta[0]) + module.theta[0].scale(&module.a);
    RandomModule {
        module,
        weights,
        mutation: Some(Mutation {
            kind: MutationKind::PhiTheta,
            defect,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_base_ring_with_guard;

    #[test]
    fn random_modules_are_enhanced_and_nilpotent() {
        for cfg in standard_configs(6) {
            let ring = make_base_ring_with_guard(&cfg, 4).unwrap();
            for id in 0..20 {
                let mut rng = instance_rng(7, id);
                let d = 1 + (id as usize % 2);
                let r = 1 + (id as usize % 3);
                let rm = random_enhanced(&ring, d, r, &mut rng);
                let rep = rm.module.check_enhanced(8);
                assert!(rep.passed(), "{rep:?}");
                let top = *rm.weights.iter().max().unwrap() as usize;
                assert_eq!(rep.nilpotence_index, Some(top + 1));
            }
        }
    }

    #[test]
    fn mutations_break_exactly_one_relation() {
        let ring = make_base_ring_with_guard(&PrimeConfig::quadratic(3, 6).unwrap(), 4).unwrap();
        for id in 0..20 {
            let mut rng = instance_rng(11, id);
            let c = mutate_commutator(&ring, &mut rng);
            let fails: Vec<String> = c.module.check_enhanced(0).checks.into_iter().filter(|c| !c.passed).map(|c| c.name).collect();
            assert_eq!(fails, vec!["[θi,θj] = 0".to_string()]);
            let m = mutate_phi(&ring, 2, 3, &mut rng);
            let fails: Vec<String> = m.module.check_enhanced(0).checks.into_iter().filter(|c| !c.passed).map(|c| c.name).collect();
            assert_eq!(fails, vec!["[φ,θi] = -aθi".to_string()]);
            assert!(!m.mutation.unwrap().defect.is_zero_matrix());
        }
    }

    #[test]
    fn same_seed_same_module() {
        let ring = make_base_ring_with_guard(&PrimeConfig::unramified(5, 6).unwrap(), 4).unwrap();
        let a = random_enhanced(&ring, 2, 3, &mut instance_rng(1, 9)).module;
        let b = random_enhanced(&ring, 2, 3, &mut instance_rng(1, 9)).module;
        let c = random_enhanced(&ring, 2, 3, &mut instance_rng(1, 10)).module;
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
