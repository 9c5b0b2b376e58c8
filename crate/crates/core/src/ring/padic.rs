//! Residue rings `O_K / p^W` and `O_K[z]/(Φ_p(z), p^W)` with per-element
//! precision tracking.
//!
//! An element is stored as its coordinates in the basis `u^i z^j`
//! (`0 <= i < e`, `0 <= j < zdeg`), each reduced modulo `p^W`. The field
//! `prec` records how many p-adic digits of those coordinates are actually
//! known; division by `p^m` lowers it by `m` and every comparison happens at
//! the smaller precision of the two operands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use super::config::PrimeConfig;
use crate::error::{Error, Result};
use crate::scalar::{vp_int, Coefficient};

#[derive(Debug, PartialEq, Eq)]
pub struct RingCtx {
    pub cfg: PrimeConfig,
    /// Working exponent `W`; arithmetic is modulo `p^W`.
    pub exp: u32,
    pub modulus: u64,
    /// `p^k` for `k = 0..=exp`.
    pows: Vec<u64>,
    /// Ramification degree `e = deg E`.
    pub e: usize,
    /// `p - 1` once `ζ_p` is adjoined, `1` otherwise.
    pub zdeg: usize,
    pub cyclotomic: bool,
    /// `E(u) - u^e`, reduced mod `p^W`.
    e_tail: Vec<u64>,
}

pub type Ring = Arc<RingCtx>;

fn modpow_len(p: u64, exp: u32) -> Result<Vec<u64>> {
    let mut pows = vec![1u64];
    for _ in 0..exp {
        let next = pows.last().unwrap().checked_mul(p).filter(|m| *m < (1u64 << 62));
        match next {
            Some(m) => pows.push(m),
            None => return Err(Error::ModulusTooLarge { exp }),
        }
    }
    Ok(pows)
}

impl RingCtx {
    fn build(cfg: &PrimeConfig, exp: u32, cyclotomic: bool) -> Result<Ring> {
        cfg.validate()?;
        let pows = modpow_len(cfg.p, exp)?;
        let modulus = pows[exp as usize];
        let e = cfg.ramification();
        let e_tail = cfg.e_coeffs[..e]
            .iter()
            .map(|c| c.rem_euclid(modulus as i64) as u64)
            .collect();
        Ok(Arc::new(RingCtx {
            cfg: cfg.clone(),
            exp,
            modulus,
            pows,
            e,
            zdeg: if cyclotomic { (cfg.p - 1) as usize } else { 1 },
            cyclotomic,
            e_tail,
        }))
    }

    pub fn p(&self) -> u64 {
        self.cfg.p
    }

    pub fn dim(&self) -> usize {
        self.e * self.zdeg
    }

    pub fn p_pow(&self, k: u32) -> u64 {
        self.pows[k as usize]
    }

    fn reduce_i(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }
}

/// Builds `O_K/p^N` at the configured precision.
pub fn make_base_ring(cfg: &PrimeConfig) -> Result<Ring> {
    RingCtx::build(cfg, cfg.n, false)
}

/// `O_K/p^{N+extra}`; the extra digits absorb factorial divisions.
pub fn make_base_ring_with_guard(cfg: &PrimeConfig, extra: u32) -> Result<Ring> {
    RingCtx::build(cfg, cfg.n + extra, false)
}

/// `base[z]/Φ_p(z)`, same working precision.
pub fn adjoin_zeta(base: &Ring) -> Result<Ring> {
    RingCtx::build(&base.cfg, base.exp, true)
}

#[derive(Clone)]
pub struct Scalar {
    ctx: Ring,
    coeffs: Vec<u64>,
    prec: u32,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [prec {}]", self, self.prec)
    }
}

impl Scalar {
    pub fn zero(ctx: &Ring) -> Self {
        Scalar {
            ctx: ctx.clone(),
            coeffs: vec![0; ctx.dim()],
            prec: ctx.exp,
        }
    }

    pub fn from_int(ctx: &Ring, n: i64) -> Self {
        let mut s = Self::zero(ctx);
        s.coeffs[0] = ctx.reduce_i(n as i128);
        s
    }

    /// Builds `Σ c u^i z^j` from `(i, j, c)` triples, reducing powers beyond
    /// the basis.
    pub fn from_poly(ctx: &Ring, coeffs: &[(usize, usize, i64)]) -> Self {
        let u = Self::pi(ctx);
        let mut acc = Self::zero(ctx);
        for &(i, j, c) in coeffs {
            let mut t = Self::from_int(ctx, c) * u.pow(i as u32);
            if j > 0 {
                t = t * Self::zeta(ctx).pow(j as u32);
            }
            acc = acc + t;
        }
        acc
    }

    /// The uniformizer `π`, the class of `u`.
    pub fn pi(ctx: &Ring) -> Self {
        let mut s = Self::zero(ctx);
        if ctx.e == 1 {
            // u = -E_0 when E is linear.
            s.coeffs[0] = (ctx.modulus - ctx.e_tail[0]) % ctx.modulus;
        } else {
            s.coeffs[ctx.zdeg] = 1;
        }
        s
    }

    /// `ζ_p`, the class of `z`. In the base ring (no ζ adjoined) this is
    /// only meaningful for `p = 2`, where `ζ_2 = -1`.
    pub fn zeta(ctx: &Ring) -> Self {
        if ctx.zdeg == 1 {
            assert!(ctx.cfg.p == 2, "zeta requires the cyclotomic ring");
            return Self::from_int(ctx, -1);
        }
        let mut s = Self::zero(ctx);
        s.coeffs[1] = 1;
        s
    }

    /// `a = E'(π)`.
    pub fn e_prime_at_pi(ctx: &Ring) -> Self {
        let pi = Self::pi(ctx);
        let mut acc = Self::zero(ctx);
        for (i, &c) in ctx.cfg.e_coeffs.iter().enumerate().skip(1) {
            acc = acc + Self::from_int(ctx, c * i as i64) * pi.pow(i as u32 - 1);
        }
        acc
    }

    pub fn random<R: Rng>(ctx: &Ring, rng: &mut R) -> Self {
        let mut s = Self::zero(ctx);
        for c in s.coeffs.iter_mut() {
            *c = rng.gen_range(0..ctx.modulus);
        }
        s
    }

    /// Random element with small integer coordinates in `[-bound, bound]`.
    pub fn random_small<R: Rng>(ctx: &Ring, rng: &mut R, bound: i64) -> Self {
        let mut s = Self::zero(ctx);
        for c in s.coeffs.iter_mut() {
            *c = ctx.reduce_i(rng.gen_range(-bound..=bound) as i128);
        }
        s
    }

    pub fn ctx(&self) -> &Ring {
        &self.ctx
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coordinates reduced to the known precision.
    pub fn known_coeffs(&self) -> Vec<u64> {
        let m = self.ctx.p_pow(self.prec);
        self.coeffs.iter().map(|c| c % m).collect()
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = self.prec.min(prec);
        self
    }

    /// Re-embeds the integer representatives into another ring (possibly of
    /// larger working precision or with `ζ_p` adjoined), treating them as exact.
    pub fn lift_exact(&self, target: &Ring) -> Self {
        assert_eq!(self.ctx.cfg, target.cfg, "lift across different E(u)");
        let mut s = Scalar::zero(target);
        for i in 0..self.ctx.e {
            for j in 0..self.ctx.zdeg.min(target.zdeg) {
                let c = self.coeffs[i * self.ctx.zdeg + j] as i128;
                let half = (self.ctx.modulus / 2) as i128;
                let signed = if c > half { c - self.ctx.modulus as i128 } else { c };
                s.coeffs[i * target.zdeg + j] = target.reduce_i(signed);
            }
        }
        assert!(
            self.ctx.zdeg <= target.zdeg,
            "lifting from a cyclotomic ring into the base ring"
        );
        s
    }

    fn check_ctx(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx,
            "mixing scalars from different rings"
        );
    }

    pub fn is_zero_at_prec(&self) -> bool {
        let m = self.ctx.p_pow(self.prec);
        self.coeffs.iter().all(|c| c % m == 0)
    }

    /// Minimum p-adic valuation of the coordinates, or `None` when the element
    /// vanishes at its precision.
    pub fn coeff_valuation(&self) -> Option<u32> {
        let p = self.ctx.p();
        let m = self.ctx.p_pow(self.prec);
        self.coeffs
            .iter()
            .filter_map(|&c| {
                let c = c % m;
                (c != 0).then(|| vp_int(c as i64, p))
            })
            .min()
    }

    /// π-adic valuation in the base ring. `None` means zero at precision.
    pub fn pi_valuation(&self) -> Result<Option<u32>> {
        if self.ctx.zdeg != 1 {
            return Err(Error::NotChainRing(
                "π-adic valuation is only tracked on O_K/p^N".into(),
            ));
        }
        let p = self.ctx.p();
        let m = self.ctx.p_pow(self.prec);
        let e = self.ctx.e as u32;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| {
                let c = c % m;
                (c != 0).then(|| e * vp_int(c as i64, p) + i as u32)
            })
            .min())
    }

    /// Image in the residue field `F_p` (u ↦ 0, z ↦ 1).
    pub fn residue(&self) -> u64 {
        let p = self.ctx.p();
        self.coeffs[..self.ctx.zdeg]
            .iter()
            .fold(0, |acc, c| (acc + c % p) % p)
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && self.residue() != 0
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let r_inv = inv_mod(self.residue(), self.ctx.modulus);
        let r_inv_s = Scalar::from_int(&self.ctx, r_inv as i64);
        let one = self.one_like();
        // self · r^{-1} = 1 - m with m topologically nilpotent
        let m = one.clone() - self.clone() * r_inv_s.clone();
        let mut acc = one.clone();
        let mut power = m;
        let mut rounds = 0;
        while !power.exact_zero() {
            acc = acc * (one.clone() + power.clone());
            power = power.clone() * power;
            rounds += 1;
            assert!(rounds < 64, "maximal ideal element failed to become nilpotent");
        }
        Ok((acc * r_inv_s).with_prec(self.prec))
    }

    fn exact_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `self / p^m`, lowering the precision by `m`.
    pub fn div_p_pow(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Ok(self.clone());
        }
        if m > self.prec {
            return Err(Error::NotDivisible(format!("p^{m} (precision {})", self.prec)));
        }
        let known = self.ctx.p_pow(self.prec);
        let pm = self.ctx.p_pow(m);
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            let k = *c % known;
            if !k.is_multiple_of(pm) {
                return Err(Error::NotDivisible(format!("p^{m}")));
            }
            *c = k / pm;
        }
        out.prec -= m;
        Ok(out)
    }

    /// Applies `z ↦ z^k` (the Galois automorphism `ζ_p ↦ ζ_p^k`), `k` coprime to p.
    pub fn sigma(&self, k: u64) -> Self {
        let p = self.ctx.p();
        let k = k % p;
        assert!(k != 0, "σ_k needs k prime to p");
        if self.ctx.zdeg == 1 || k == 1 {
            return self.clone();
        }
        let zk = Scalar::zeta(&self.ctx).pow(k as u32);
        let mut acc = Scalar::zero(&self.ctx);
        let zd = self.ctx.zdeg;
        for i in 0..self.ctx.e {
            let mut zpow = self.one_like();
            for j in 0..zd {
                let c = self.coeffs[i * zd + j];
                if c != 0 {
                    let mut t = zpow.clone();
                    t = t.scale_u(c);
                    acc = acc + t * Scalar::pi_power_basis(&self.ctx, i);
                }
                zpow = zpow * zk.clone();
            }
        }
        acc.with_prec(self.prec)
    }

    fn pi_power_basis(ctx: &Ring, i: usize) -> Self {
        let mut s = Scalar::zero(ctx);
        s.coeffs[i * ctx.zdeg] = 1;
        s
    }

    fn scale_u(mut self, k: u64) -> Self {
        let m = self.ctx.modulus;
        for c in self.coeffs.iter_mut() {
            *c = ((*c as u128 * k as u128) % m as u128) as u64;
        }
        self
    }

    /// Some `y` with `π·y = self` in the quotient ring `O_K/p^W`. Requires
    /// `self ∈ (π)`. Precision is not lowered: any such `y` serves for
    /// elimination over the chain ring.
    pub fn div_pi_in_quotient(&self) -> Result<Self> {
        let ctx = &self.ctx;
        if ctx.zdeg != 1 {
            return Err(Error::NotChainRing("division by π in cyclotomic ring".into()));
        }
        let p = ctx.p();
        if !self.coeffs[0].is_multiple_of(p) {
            return Err(Error::NotDivisible("π".into()));
        }
        let e = ctx.e;
        let mut y = Scalar::zero(ctx);
        if e == 1 {
            // π = p·w with w = -E_0/p a unit
            let w = Scalar::pi(ctx).div_p_pow_in_quotient(1);
            let c0 = self.coeffs[0] / p;
            y.coeffs[0] = c0;
            return Ok((y * w.inverse()?).with_prec(self.prec));
        }
        for i in 1..e {
            y.coeffs[i - 1] = self.coeffs[i];
        }
        // c_0 = p·c'; p/π = -(π^{e-1} + E_{e-1}π^{e-2} + ... + E_1) / (E_0/p)
        let c_prime = self.coeffs[0] / p;
        let e0_over_p = Scalar::from_int(ctx, ctx.cfg.e_coeffs[0] / p as i64);
        let mut tail = Scalar::zero(ctx);
        tail.coeffs[(e - 1) * ctx.zdeg] = 1;
        for i in 1..e {
            tail = tail + Scalar::from_int(ctx, ctx.cfg.e_coeffs[i]) * Scalar::pi_power_basis(ctx, i - 1);
        }
        let p_over_pi = -(tail * e0_over_p.inverse()?);
        y = y + Scalar::from_int(ctx, c_prime as i64) * p_over_pi;
        Ok(y.with_prec(self.prec))
    }

    fn div_p_pow_in_quotient(&self, m: u32) -> Self {
        let pm = self.ctx.p_pow(m);
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c /= pm;
        }
        out
    }

    /// Symmetric integer representatives of the known coordinates.
    pub fn signed_coeffs(&self) -> Vec<i64> {
        let m = self.ctx.p_pow(self.prec);
        self.coeffs
            .iter()
            .map(|&c| {
                let c = c % m;
                if c > m / 2 {
                    c as i64 - m as i64
                } else {
                    c as i64
                }
            })
            .collect()
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {m}");
    t.rem_euclid(m as i128) as u64
}

impl fmt::Display for Scalar {
    /// Canonical form, e.g. `3 + 2*u - u*z^2`; terms ordered by `(i, j)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zd = self.ctx.zdeg;
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (idx, c) in self.signed_coeffs().into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (i, j) = (idx / zd, idx % zd);
            let mut mono = Vec::new();
            if i > 0 {
                mono.push(if i == 1 { "u".to_string() } else { format!("u^{i}") });
            }
            if j > 0 {
                mono.push(if j == 1 { "z".to_string() } else { format!("z^{j}") });
            }
            let abs = c.unsigned_abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs == 1 {
                mono.join("*")
            } else {
                format!("{abs}*{}", mono.join("*"))
            };
            parts.push((c < 0, body));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, body)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.check_ctx(other);
        let m = self.ctx.p_pow(self.prec.min(other.prec));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a % m == b % m)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self.check_ctx(&rhs);
        let m = self.ctx.modulus;
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = (*a + b) % m;
        }
        self.prec = self.prec.min(rhs.prec);
        self
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self + (-rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        let m = self.ctx.modulus;
        for a in self.coeffs.iter_mut() {
            *a = (m - *a) % m;
        }
        self
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.check_ctx(&rhs);
        let ctx = &self.ctx;
        let m = ctx.modulus as u128;
        let (e, zd) = (ctx.e, ctx.zdeg);
        let (pe, pz) = (2 * e - 1, 2 * zd - 1);
        let mut prod = vec![0u128; pe * pz];
        for (ia, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let (i1, j1) = (ia / zd, ia % zd);
            for (ib, &b) in rhs.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let (i2, j2) = (ib / zd, ib % zd);
                let slot = &mut prod[(i1 + i2) * pz + j1 + j2];
                *slot = (*slot + (a as u128 * b as u128) % m) % m;
            }
        }
        // z^{zd} = -(1 + z + ... + z^{zd-1})
        for i in 0..pe {
            for j in (zd..pz).rev() {
                let c = prod[i * pz + j];
                if c == 0 {
                    continue;
                }
                prod[i * pz + j] = 0;
                let neg = (m - c) % m;
                for t in 0..zd {
                    let slot = &mut prod[i * pz + j - zd + t];
                    *slot = (*slot + neg) % m;
                }
            }
        }
        // u^e = -(E_0 + E_1 u + ... + E_{e-1} u^{e-1})
        for i in (e..pe).rev() {
            for j in 0..zd {
                let c = prod[i * pz + j];
                if c == 0 {
                    continue;
                }
                prod[i * pz + j] = 0;
                for (t, &et) in ctx.e_tail.iter().enumerate() {
                    let slot = &mut prod[(i - e + t) * pz + j];
                    *slot = (*slot + m - (c * et as u128) % m) % m;
                }
            }
        }
        let mut coeffs = vec![0u64; e * zd];
        for i in 0..e {
            for j in 0..zd {
                coeffs[i * zd + j] = prod[i * pz + j] as u64;
            }
        }
        Scalar {
            ctx: self.ctx.clone(),
            coeffs,
            prec: self.prec.min(rhs.prec),
        }
    }
}

impl Coefficient for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero(&self.ctx)
    }

    fn one_like(&self) -> Self {
        Scalar::from_int(&self.ctx, 1)
    }

    fn is_zero(&self) -> bool {
        self.is_zero_at_prec()
    }

    fn is_exact_zero(&self) -> bool {
        self.prec >= self.ctx.exp && self.is_zero_at_prec()
    }

    fn scale_int(&self, n: i64) -> Self {
        let k = self.ctx.reduce_i(n as i128);
        self.clone().scale_u(k)
    }

    fn div_int_exact(&self, n: i64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let p = self.ctx.p();
        let v = vp_int(n, p);
        let unit = n / (p as i64).pow(v);
        let q = self.div_p_pow(v).ok()?;
        let unit_inv = inv_mod(self.ctx.reduce_i(unit as i128), self.ctx.modulus);
        Some(q.scale_u(unit_inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, n: u32, e: Vec<i64>) -> Ring {
        make_base_ring(&PrimeConfig::new(p, n, e).unwrap()).unwrap()
    }

    #[test]
    fn linear_eisenstein_has_unit_derivative() {
        let r = ring(2, 8, vec![-2, 1]);
        assert_eq!(Scalar::e_prime_at_pi(&r), Scalar::from_int(&r, 1));
        let r5 = ring(5, 4, vec![-5, 1]);
        assert_eq!(Scalar::pi(&r5), Scalar::from_int(&r5, 5));
    }

    #[test]
    fn ramified_derivative_is_two_pi() {
        let r = ring(3, 6, vec![-3, 0, 1]);
        let a = Scalar::e_prime_at_pi(&r);
        assert_eq!(a, Scalar::pi(&r).scale_int(2));
        assert_eq!(a.pi_valuation().unwrap(), Some(1));
        // π^2 = 3
        assert_eq!(Scalar::pi(&r).pow(2), Scalar::from_int(&r, 3));
        assert_eq!(Scalar::from_int(&r, 3).pi_valuation().unwrap(), Some(2));
    }

    #[test]
    fn zeta_identities() {
        let r2 = adjoin_zeta(&ring(2, 8, vec![-2, 1])).unwrap();
        let z = Scalar::zeta(&r2);
        assert_eq!(z, Scalar::from_int(&r2, -1));
        assert_eq!(z.clone() - z.one_like(), Scalar::from_int(&r2, -2));

        let r3 = adjoin_zeta(&ring(3, 6, vec![-3, 1])).unwrap();
        let z = Scalar::zeta(&r3);
        assert_eq!(z.pow(3), z.one_like());
        let zm1 = z.clone() - z.one_like();
        assert_eq!(zm1.pow(2), z.scale_int(-3));
        // (ζ-1)^{p-1}/p is a unit
        let q = zm1.pow(2).div_p_pow(1).unwrap();
        assert!(q.is_unit());
    }

    #[test]
    fn inverse_and_division_audit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(2u64, vec![-2i64, 1]), (3, vec![-3, 0, 1]), (5, vec![-5, 5, 1])] {
            let base = ring(p, 6, e);
            let cyc = adjoin_zeta(&base).unwrap();
            for r in [&base, &cyc] {
                for _ in 0..20 {
                    let x = Scalar::random(r, &mut rng);
                    if x.is_unit() {
                        let inv = x.inverse().unwrap();
                        assert_eq!(x.clone() * inv, x.one_like());
                    } else {
                        assert_eq!(x.inverse(), Err(Error::NotUnit));
                    }
                    let m = 2;
                    let y = x.scale_int((p as i64).pow(m));
                    let q = y.div_p_pow(m).unwrap();
                    assert_eq!(q.prec(), r.exp - m);
                    assert_eq!(q.scale_int((p as i64).pow(m)), y);
                }
            }
        }
    }

    #[test]
    fn division_requires_divisibility() {
        let r = ring(3, 4, vec![-3, 1]);
        let x = Scalar::from_int(&r, 4);
        assert!(x.div_p_pow(1).is_err());
        assert!(x.div_int_exact(3).is_none());
        assert_eq!(x.div_int_exact(2).unwrap().scale_int(2), x);
    }

    #[test]
    fn pi_division_in_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for e in [vec![-3i64, 1], vec![-3, 0, 1], vec![-3, 3, 3, 1]] {
            let r = ring(3, 5, e);
            let pi = Scalar::pi(&r);
            for _ in 0..20 {
                let x = Scalar::random(&r, &mut rng) * pi.clone();
                let y = x.div_pi_in_quotient().unwrap();
                assert_eq!(y * pi.clone(), x);
            }
        }
    }

    #[test]
    fn sigma_is_ring_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cyc = adjoin_zeta(&ring(5, 4, vec![-5, 1])).unwrap();
        for k in 1..5 {
            for _ in 0..10 {
                let x = Scalar::random(&cyc, &mut rng);
                let y = Scalar::random(&cyc, &mut rng);
                assert_eq!((x.clone() * y.clone()).sigma(k), x.sigma(k) * y.sigma(k));
            }
            assert_eq!(Scalar::zeta(&cyc).sigma(k), Scalar::zeta(&cyc).pow(k as u32));
        }
    }

    #[test]
    fn display_is_canonical() {
        let r = ring(3, 4, vec![-3, 0, 1]);
        let x = Scalar::from_poly(&r, &[(0, 0, 3), (1, 0, -2)]);
        assert_eq!(x.to_string(), "3 - 2*u");
        assert_eq!(Scalar::zero(&r).to_string(), "0");
    }
}
