//! Cosimplicial face and degeneracy maps.
//!
//! Every generator is sent to `(A - B)·G^t` where `A`, `B` are variables of the
//! target (either may be absent), `t ∈ {0, 1}`, and `G = (1 - aX_1)^{-1}`. The
//! image of `V^{[k]}` is then `(A - B)^{[k]}·G^{tk}`, which stays integral.

use std::collections::HashMap;

use super::{DpPoly, Shape, Var};
use crate::scalar::{binomial, factorial, Coefficient};

/// Image of one generator: `(plus - minus)·G^{twist}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarImage {
    pub plus: Option<usize>,
    pub minus: Option<usize>,
    pub twist: bool,
}

impl VarImage {
    fn same(idx: usize) -> Self {
        VarImage {
            plus: Some(idx),
            minus: None,
            twist: false,
        }
    }

    fn zero() -> Self {
        VarImage {
            plus: None,
            minus: None,
            twist: false,
        }
    }
}

/// A dp-ring homomorphism between two shapes, given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpec {
    pub source: Shape,
    pub target: Shape,
    pub images: Vec<VarImage>,
}

fn shift(v: Var, by: usize) -> Var {
    match v {
        Var::X(j) => Var::X(j + by),
        Var::Y(s, j) => Var::Y(s, j + by),
    }
}

fn first_of_block(v: Var) -> Var {
    match v {
        Var::X(_) => Var::X(1),
        Var::Y(s, _) => Var::Y(s, 1),
    }
}

fn position(v: Var) -> usize {
    match v {
        Var::X(j) | Var::Y(_, j) => j,
    }
}

/// The face map `p_i` from level `n` to level `n + 1`, `0 <= i <= n + 1`.
pub fn face(source: Shape, i: usize) -> HomSpec {
    face_impl(source, i, false)
}

/// `p_0` with the twist factor removed from the image of `X_1` only; used to
/// check that the identity checker notices a broken structure map.
pub fn face_corrupted(source: Shape) -> HomSpec {
    face_impl(source, 0, true)
}

fn face_impl(source: Shape, i: usize, corrupt: bool) -> HomSpec {
    assert!(i <= source.n + 1, "face index {i} out of range at level {}", source.n);
    let target = source.with_n(source.n + 1);
    let images = (0..source.nvars())
        .map(|idx| {
            let v = source.var(idx);
            if i == 0 {
                let twist = source.arith && !(corrupt && v == Var::X(1));
                VarImage {
                    plus: Some(target.index(shift(v, 1))),
                    minus: Some(target.index(first_of_block(v))),
                    twist,
                }
            } else if i <= position(v) {
                VarImage::same(target.index(shift(v, 1)))
            } else {
                VarImage::same(target.index(v))
            }
        })
        .collect();
    HomSpec { source, target, images }
}

/// The degeneracy map `σ_i` from level `n` to level `n - 1`, `0 <= i < n`.
pub fn degeneracy(source: Shape, i: usize) -> HomSpec {
    assert!(source.n >= 1 && i < source.n, "degeneracy index {i} out of range at level {}", source.n);
    let target = source.with_n(source.n - 1);
    let images = (0..source.nvars())
        .map(|idx| {
            let v = source.var(idx);
            let j = position(v);
            if i == 0 && j == 1 {
                VarImage::zero()
            } else if i < j {
                VarImage::same(target.index(shift_down(v)))
            } else {
                VarImage::same(target.index(v))
            }
        })
        .collect();
    HomSpec { source, target, images }
}

fn shift_down(v: Var) -> Var {
    match v {
        Var::X(j) => Var::X(j - 1),
        Var::Y(s, j) => Var::Y(s, j - 1),
    }
}

struct Cache<C> {
    diff_powers: HashMap<(usize, u32), DpPoly<C>>,
    g_powers: HashMap<u32, DpPoly<C>>,
}

impl HomSpec {
    /// Applies the homomorphism; `a` is the constant in `G = (1 - aX_1)^{-1}`.
    pub fn apply<C: Coefficient>(&self, f: &DpPoly<C>, a: &C) -> DpPoly<C> {
        assert_eq!(f.shape(), self.source, "polynomial shape does not match the map");
        let mut cache = Cache {
            diff_powers: HashMap::new(),
            g_powers: HashMap::new(),
        };
        let mut out = DpPoly::zero(self.target, f.proto());
        for (e, c) in f.terms() {
            let img = self.monomial_image(e, a, f.proto(), &mut cache);
            out = out + img.scale_left(c);
        }
        if f.truncated() {
            out = out + mark_truncated(self.target, f.proto());
        }
        out
    }

    fn monomial_image<C: Coefficient>(&self, e: &[u32], a: &C, proto: &C, cache: &mut Cache<C>) -> DpPoly<C> {
        let mut acc = DpPoly::constant(self.target, proto.one_like());
        let mut twist = 0;
        for (v, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let img = self.images[v];
            if img.twist {
                twist += k;
            }
            let p = cache
                .diff_powers
                .entry((v, k))
                .or_insert_with(|| diff_power(self.target, img, k, proto))
                .clone();
            acc = acc * p;
        }
        if twist > 0 {
            let g = cache
                .g_powers
                .entry(twist)
                .or_insert_with(|| g_power(self.target, twist, a))
                .clone();
            acc = acc * g;
        }
        acc
    }

    /// `self ∘ other` is not materialized; this applies `other` then `self`.
    pub fn after<C: Coefficient>(&self, other: &HomSpec, f: &DpPoly<C>, a: &C) -> DpPoly<C> {
        assert_eq!(other.target, self.source, "maps do not compose");
        self.apply(&other.apply(f, a), a)
    }
}

fn mark_truncated<C: Coefficient>(shape: Shape, proto: &C) -> DpPoly<C> {
    let mut p = DpPoly::zero(shape, proto);
    let mut e = vec![0; shape.nvars()];
    if let Some(first) = e.first_mut() {
        *first = shape.degree + 1;
        p.insert_add(e, proto.one_like());
    }
    p
}

/// `(A - B)^{[k]} = Σ_{i+l=k} (-1)^l A^{[i]} B^{[l]}`.
fn diff_power<C: Coefficient>(shape: Shape, img: VarImage, k: u32, proto: &C) -> DpPoly<C> {
    let mut p = DpPoly::zero(shape, proto);
    if k > shape.degree {
        return p;
    }
    let one = proto.one_like();
    match (img.plus, img.minus) {
        (None, None) => {}
        (Some(x), None) => {
            let mut e = vec![0; shape.nvars()];
            e[x] = k;
            p.insert_add(e, one);
        }
        (None, Some(y)) => {
            let mut e = vec![0; shape.nvars()];
            e[y] = k;
            p.insert_add(e, if k.is_multiple_of(2) { one } else { -one });
        }
        (Some(x), Some(y)) => {
            for l in 0..=k {
                let mut e = vec![0; shape.nvars()];
                e[x] += k - l;
                e[y] += l;
                let c = if l % 2 == 0 { one.clone() } else { -one.clone() };
                p.insert_add(e, c);
            }
        }
    }
    p
}

/// `G^t = Σ_m binom(t+m-1, m) a^m m! X_1^{[m]}`.
fn g_power<C: Coefficient>(shape: Shape, t: u32, a: &C) -> DpPoly<C> {
    let mut p = DpPoly::zero(shape, a);
    let x1 = shape.index(Var::X(1));
    let mut a_pow = a.one_like();
    for m in 0..=shape.degree {
        let mut e = vec![0; shape.nvars()];
        e[x1] = m;
        let mult = binomial((t + m - 1) as u64, m as u64) * factorial(m as u64);
        p.insert_add(e, a_pow.scale_int(mult));
        a_pow = a_pow * a.clone();
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::format_monomial;

    fn x(shape: Shape, j: usize, k: u32) -> DpPoly<i64> {
        DpPoly::var_power(shape, Var::X(j), k, 1).unwrap()
    }

    #[test]
    fn p1_shifts_x1() {
        let s = Shape::arith(1, 0, 3);
        let t = s.with_n(2);
        assert_eq!(face(s, 1).apply(&x(s, 1, 1), &1), x(t, 2, 1));
    }

    #[test]
    fn p0_expands_twist() {
        let s = Shape::arith(1, 0, 3);
        let t = s.with_n(2);
        let img = face(s, 0).apply(&x(s, 1, 1), &1);
        // (X2 - X1)(1 + X1 + X1^2 + ...) truncated at degree 3
        assert_eq!(img.coeff(&[0, 1]), 1);
        assert_eq!(img.coeff(&[1, 0]), -1);
        assert_eq!(img.coeff(&[1, 1]), 1);
        assert_eq!(img.coeff(&[2, 0]), -2);
        assert_eq!(img.coeff(&[2, 1]), 2);
        assert_eq!(img.coeff(&[3, 0]), -6);
        assert_eq!(img.terms().len(), 6);
        assert_eq!(img.shape(), t);
    }

    #[test]
    fn geometric_maps() {
        let s = Shape::geo(1, 2, 4);
        let y = |shape: Shape, sidx, j| DpPoly::var_power(shape, Var::Y(sidx, j), 1, 1i64).unwrap();
        let t = s.with_n(2);
        assert_eq!(face(s, 0).apply(&y(s, 2, 1), &1), y(t, 2, 2) - y(t, 2, 1));
        assert_eq!(face(s, 2).apply(&y(s, 1, 1), &1), y(t, 1, 1));
        let s2 = Shape::arith(2, 1, 4);
        let img = degeneracy(s2, 1).apply(&y(s2, 1, 2), &1);
        assert_eq!(format_monomial(&img.shape(), img.terms().keys().next().unwrap()), "Y1,1");
        assert!(degeneracy(s2, 0).apply(&x(s2, 1, 1), &1).is_zero_poly());
    }
}
