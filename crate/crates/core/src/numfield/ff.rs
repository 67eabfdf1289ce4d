//! Finite fields `F_p` and `F_p[t]/(m(t))`.

use std::fmt::Debug;

use num_bigint::BigUint;
use rand::Rng;

use super::fpoly;

pub trait FiniteField {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn characteristic(&self) -> u64;
    /// `k` with `|F| = p^k`.
    fn ext_degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;
    /// Coordinates over `F_p` (length `ext_degree`), each in `0..p`.
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.ext_degree())
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn ext_degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F_{}", self.p);
        // extended Euclid on i128
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(self.p as i128) as u64
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn coords(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
}

/// `F_p[t]/(m)` for a monic irreducible `m` of degree `d >= 1`; elements are length-`d` coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    pub base: PrimeField,
    /// Ascending coefficients, monic, degree `d`.
    pub modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert!(modulus.len() >= 2 && *modulus.last().unwrap() == 1, "modulus must be monic of degree >= 1");
        ExtField { base: PrimeField::new(p), modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Embeds a polynomial in `t` (any length) by reduction.
    pub fn from_poly(&self, a: &[u64]) -> Vec<u64> {
        let f = &self.base;
        let d = self.degree();
        let mut r: Vec<u64> = a.iter().map(|x| x % f.p).collect();
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c != 0 {
                for j in 0..d {
                    let t = f.mul(&c, &self.modulus[j]);
                    r[i - d + j] = f.sub(&r[i - d + j], &t);
                }
                r[i] = 0;
            }
        }
        r.resize(d, 0);
        r
    }

    /// The class of `t`.
    pub fn generator(&self) -> Vec<u64> {
        self.from_poly(&[0, 1])
    }
}

impl FiniteField for ExtField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn ext_degree(&self) -> u32 {
        self.degree() as u32
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.from_poly(&[1])
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.base;
        let mut prod = vec![0u64; 2 * self.degree()];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        self.from_poly(&prod)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero");
        let f = &self.base;
        let a_poly = fpoly::trim(f, a.clone());
        let (g, s, _) = fpoly::xgcd(f, &a_poly, &self.modulus);
        // g is a nonzero constant since the modulus is irreducible
        assert_eq!(g.len(), 1, "modulus is not irreducible");
        let c = f.inv(&g[0]);
        let s: Vec<u64> = s.iter().map(|x| f.mul(x, &c)).collect();
        self.from_poly(&s)
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.from_poly(&[self.base.from_i64(n)])
    }
    fn random<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }
    fn coords(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(101);
        for a in 1..101 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 100);
    }

    #[test]
    fn gf8_is_a_field() {
        // t^3 + t + 1 over F_2
        let k = ExtField::new(2, vec![1, 1, 0, 1]);
        let elems: Vec<Vec<u64>> = (0..8u64).map(|i| vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]).collect();
        for a in elems.iter().skip(1) {
            assert_eq!(k.mul(a, &k.inv(a)), k.one());
            // a^7 = 1
            assert_eq!(k.pow(a, &BigUint::from(7u32)), k.one());
        }
        let t = k.generator();
        let t3 = k.mul(&k.mul(&t, &t), &t);
        assert_eq!(k.add(&k.add(&t3, &t), &k.one()), k.zero());
    }

    #[test]
    fn gf49() {
        // t^2 + 1 is irreducible mod 7
        let k = ExtField::new(7, vec![1, 0, 1]);
        let mut count = 0;
        for a in 0..7u64 {
            for b in 0..7u64 {
                let x = vec![a, b];
                if k.is_zero(&x) {
                    continue;
                }
                assert_eq!(k.mul(&x, &k.inv(&x)), k.one());
                assert_eq!(k.pow(&x, &BigUint::from(48u32)), k.one());
                count += 1;
            }
        }
        assert_eq!(count, 48);
    }
}
