//! Exhaustive check of the cosimplicial identities on monomials.

use serde::Serialize;

use super::maps::{degeneracy, face, face_corrupted, HomSpec};
use super::{format_monomial, DpPoly, Shape};
use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialWitness {
    pub identity: String,
    pub level: usize,
    pub monomial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialReport {
    pub checked: usize,
    pub failures: Vec<SimplicialWitness>,
}

impl SimplicialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Side = Vec<HomSpec>;

/// All identity instances whose source is level `m`, as pairs of composites
/// (maps listed in application order).
fn instances(base: Shape, m: usize, corrupt: bool) -> Vec<(String, Side, Side)> {
    let at = |n: usize| base.with_n(n);
    let d = |n: usize, i: usize| {
        if corrupt && i == 0 {
            face_corrupted(at(n))
        } else {
            face(at(n), i)
        }
    };
    let s = |n: usize, j: usize| degeneracy(at(n), j);
    let mut out = Vec::new();
    // d^j d^i = d^i d^{j-1}, i < j
    for j in 0..=m + 2 {
        for i in 0..j {
            out.push((
                format!("p{j}p{i} = p{i}p{}", j - 1),
                vec![d(m, i), d(m + 1, j)],
                vec![d(m, j - 1), d(m + 1, i)],
            ));
        }
    }
    // s^j s^i = s^i s^{j+1}, i <= j
    if m >= 2 {
        for j in 0..=m - 2 {
            for i in 0..=j {
                out.push((
                    format!("s{j}s{i} = s{i}s{}", j + 1),
                    vec![s(m, i), s(m - 1, j)],
                    vec![s(m, j + 1), s(m - 1, i)],
                ));
            }
        }
    }
    // s^j d^i
    for i in 0..=m + 1 {
        for j in 0..=m {
            let lhs = vec![d(m, i), s(m + 1, j)];
            if i < j {
                out.push((format!("s{j}p{i} = p{i}s{}", j - 1), lhs, vec![s(m, j - 1), d(m - 1, i)]));
            } else if i == j || i == j + 1 {
                out.push((format!("s{j}p{i} = id"), lhs, Vec::new()));
            } else {
                out.push((format!("s{j}p{i} = p{}s{j}", i - 1), lhs, vec![s(m, j), d(m - 1, i - 1)]));
            }
        }
    }
    out
}

fn run<C: Coefficient>(side: &Side, f: &DpPoly<C>, a: &C) -> DpPoly<C> {
    side.iter().fold(f.clone(), |acc, h| h.apply(&acc, a))
}

/// Checks the face/degeneracy identities on every monomial of degree
/// `<= base.degree` at levels `0..=max_level`.
pub fn verify_simplicial_identities<C: Coefficient>(
    base: Shape,
    max_level: usize,
    a: &C,
    corrupt_p0: bool,
) -> SimplicialReport {
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 0..=max_level {
        let src = base.with_n(m);
        let monos = src.monomials(base.degree);
        for (name, lhs, rhs) in instances(base, m, corrupt_p0) {
            for e in &monos {
                let f = DpPoly::monomial(src, e.clone(), a.one_like()).expect("within bound");
                checked += 1;
                if run(&lhs, &f, a) != run(&rhs, &f, a) {
                    failures.push(SimplicialWitness {
                        identity: name.clone(),
                        level: m,
                        monomial: format_monomial(&src, e),
                    });
                    break;
                }
            }
        }
    }
    SimplicialReport { checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_over_integers() {
        for shape in [Shape::arith(0, 1, 4), Shape::geo(0, 2, 4)] {
            let r = verify_simplicial_identities(shape, 2, &3i64, false);
            assert!(r.passed(), "{:?}", r.failures);
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn corrupted_face_is_caught_at_x1() {
        let r = verify_simplicial_identities(Shape::arith(0, 1, 4), 2, &1i64, true);
        assert!(!r.passed());
        assert_eq!(r.failures[0].monomial, "X1");
    }
}
