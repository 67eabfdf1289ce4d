//! Dense univariate polynomials over a finite field: arithmetic, squarefree
//! decomposition, distinct-degree and equal-degree factorization.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ff::FiniteField;

/// Ascending coefficients with no trailing zeros; the zero polynomial is empty.
pub type Poly<E> = Vec<E>;

pub fn trim<F: FiniteField>(f: &F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn deg<E>(a: &Poly<E>) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn from_i64s<F: FiniteField>(f: &F, coeffs: &[i64]) -> Poly<F::Elem> {
    trim(f, coeffs.iter().map(|&c| f.from_i64(c)).collect())
}

pub fn x<F: FiniteField>(f: &F) -> Poly<F::Elem> {
    vec![f.zero(), f.one()]
}

pub fn is_one<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> bool {
    a.len() == 1 && a[0] == f.one()
}

pub fn add<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn sub<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn mul<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: FiniteField>(f: &F, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn monic<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc)),
    }
}

/// Quotient and remainder; panics when dividing by zero.
pub fn divrem<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = deg(b).expect("division by the zero polynomial");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv_lc = f.inv(&b[db]);
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(&r[i], &inv_lc);
        if f.is_zero(&c) {
            continue;
        }
        for j in 0..=db {
            r[i - db + j] = f.sub(&r[i - db + j], &f.mul(&c, &b[j]));
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    divrem(f, a, b).1
}

pub fn div_exact<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let (q, r) = divrem(f, a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub fn mulmod<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: FiniteField>(f: &F, base: &Poly<F::Elem>, e: &BigUint, m: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut acc = rem(f, &vec![f.one()], m);
    let b = rem(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &b, m);
        }
    }
    acc
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd<F: FiniteField>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// `(g, s, t)` with `s a + t b = g`, `g` not normalized.
pub fn xgcd<F: FiniteField>(
    f: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = sub(f, &t0, &mul(f, &q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

pub fn derivative<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_i64((i as u64 % f.characteristic()) as i64)))
        .collect();
    trim(f, out)
}

pub fn eval<F: FiniteField>(f: &F, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn is_squarefree<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> bool {
    let d = derivative(f, a);
    !d.is_empty() && gcd(f, a, &d).len() == 1
}

/// `a(x) = b(x^p)` to `b^{1/p}`; every exponent of `a` must be divisible by p.
fn pth_root<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = f.characteristic() as usize;
    // c^{1/p} = c^{q/p}
    let e = BigUint::from(f.characteristic()).pow(f.ext_degree() - 1);
    let out = a.iter().step_by(p).map(|c| f.pow(c, &e)).collect();
    trim(f, out)
}

/// Squarefree decomposition of a monic polynomial: `(g_i, m_i)` with `a = prod g_i^{m_i}`.
pub fn squarefree_decomposition<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let a = monic(f, a);
    let mut out = Vec::new();
    if deg(&a).unwrap_or(0) == 0 {
        return out;
    }
    let d = derivative(f, &a);
    let mut c = gcd(f, &a, &d);
    let mut w = div_exact(f, &a, &c);
    let mut i = 1;
    while !is_one(f, &w) {
        let y = gcd(f, &w, &c);
        let z = div_exact(f, &w, &y);
        if deg(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = div_exact(f, &c, &w);
    }
    if !is_one(f, &c) {
        let p = f.characteristic() as usize;
        for (g, m) in squarefree_decomposition(f, &pth_root(f, &c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial: `(product of all
/// irreducible factors of degree d, d)`.
pub fn distinct_degree<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let q = f.order();
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let xx = x(f);
    let mut h = rem(f, &xx, &rest);
    let mut i = 1;
    while deg(&rest).unwrap_or(0) >= 2 * i {
        h = powmod(f, &h, &q, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &xx));
        if !is_one(f, &g) {
            rest = div_exact(f, &rest, &g);
            h = rem(f, &h, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = deg(&rest) {
        if d > 0 {
            out.push((rest, d));
        }
    }
    out
}

/// Splits a monic product of distinct irreducibles of degree `d` (Cantor–Zassenhaus).
pub fn equal_degree<F: FiniteField>(f: &F, a: &Poly<F::Elem>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<F::Elem>> {
    let n = deg(a).unwrap_or(0);
    if n == d {
        return vec![monic(f, a)];
    }
    let q = f.order();
    let two = f.characteristic() == 2;
    loop {
        let r: Poly<F::Elem> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if deg(&r).unwrap_or(0) == 0 {
            continue;
        }
        let b = if two {
            // trace from F_{q^d} to F_2: r + r^2 + ... + r^{2^{kd-1}}
            let steps = f.ext_degree() as usize * d;
            let mut term = r.clone();
            let mut acc = r.clone();
            for _ in 1..steps {
                term = mulmod(f, &term, &term, a);
                acc = add(f, &acc, &term);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) >> 1;
            sub(f, &powmod(f, &r, &e, a), &vec![f.one()])
        };
        let g = gcd(f, a, &b);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &div_exact(f, a, &g), d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities, ordered by
/// (degree, multiplicity, coordinates).
pub fn factor<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = Vec::new();
    for (sq, m) in squarefree_decomposition(f, a) {
        for (g, d) in distinct_degree(f, &sq) {
            for h in equal_degree(f, &g, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by_key(|(g, m)| (g.len(), *m, g.iter().map(|c| f.coords(c)).collect::<Vec<_>>()));
    out
}

/// Degrees of the irreducible factors of a squarefree polynomial, or `None` if it is not squarefree.
pub fn degree_multiset<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> Option<Vec<usize>> {
    if !is_squarefree(f, a) {
        return None;
    }
    let mut degs = Vec::new();
    for (g, d) in distinct_degree(f, a) {
        let k = deg(&g).unwrap_or(0) / d;
        degs.extend(std::iter::repeat_n(d, k));
    }
    degs.sort_unstable();
    Some(degs)
}

pub fn is_irreducible<F: FiniteField>(f: &F, a: &Poly<F::Elem>) -> bool {
    let n = deg(a).unwrap_or(0);
    n >= 1 && degree_multiset(f, a).is_some_and(|d| d == vec![n])
}

#[cfg(test)]
mod tests {
    use super::super::ff::{ExtField, PrimeField};
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p)
    }

    #[test]
    fn degree_multisets() {
        assert_eq!(degree_multiset(&fp(5), &from_i64s(&fp(5), &[1, 0, 1])), Some(vec![1, 1]));
        assert_eq!(degree_multiset(&fp(7), &from_i64s(&fp(7), &[1, 0, 1])), Some(vec![2]));
        assert_eq!(degree_multiset(&fp(7), &from_i64s(&fp(7), &[-2, 0, 0, 1])), Some(vec![3]));
        assert_eq!(degree_multiset(&fp(2), &from_i64s(&fp(2), &[1, 0, 1])), None);
    }

    #[test]
    fn factor_reconstructs() {
        for p in [2u64, 3, 5, 7, 13] {
            let f = fp(p);
            // (x^2+1)^2 (x^3-2) (x+3)^p
            let mut a = from_i64s(&f, &[1, 0, 1]);
            a = mul(&f, &a, &a);
            a = mul(&f, &a, &from_i64s(&f, &[-2, 0, 0, 1]));
            let lin = from_i64s(&f, &[3, 1]);
            for _ in 0..p {
                a = mul(&f, &a, &lin);
            }
            let fac = factor(&f, &a);
            let mut prod = vec![f.one()];
            for (g, m) in &fac {
                assert!(is_irreducible(&f, g));
                for _ in 0..*m {
                    prod = mul(&f, &prod, g);
                }
            }
            assert_eq!(prod, monic(&f, &a), "p = {p}");
        }
    }

    #[test]
    fn factor_over_extension() {
        // x^2 + 1 splits over F_49 = F_7[t]/(t^2+1), roots ±t
        let k = ExtField::new(7, vec![1, 0, 1]);
        let a = from_i64s(&k, &[1, 0, 1]);
        let fac = factor(&k, &a);
        assert_eq!(fac.len(), 2);
        for (g, m) in &fac {
            assert_eq!((g.len(), *m), (2, 1));
            let root = k.neg(&g[0]);
            assert!(k.is_zero(&eval(&k, &a, &root)));
        }
        // over F_4: x^2 + x + 1 splits, x^3 + x + 1 stays irreducible (odd degree)
        let f4 = ExtField::new(2, vec![1, 1, 1]);
        assert_eq!(degree_multiset(&f4, &from_i64s(&f4, &[1, 1, 1])), Some(vec![1, 1]));
        assert_eq!(degree_multiset(&f4, &from_i64s(&f4, &[1, 1, 0, 1])), Some(vec![3]));
        let sq = mul(&f4, &from_i64s(&f4, &[1, 1, 1]), &from_i64s(&f4, &[1, 1, 1]));
        let fac = factor(&f4, &sq);
        assert_eq!(fac.iter().map(|(g, m)| (g.len() - 1, *m)).collect::<Vec<_>>(), vec![(1, 2), (1, 2)]);
    }

    #[test]
    fn degree_counts_match_brute_force_small_p() {
        // number of monic irreducible quadratics over F_p is (p^2-p)/2
        for p in [2u64, 3, 5, 7] {
            let f = fp(p);
            let mut n = 0;
            for a in 0..p {
                for b in 0..p {
                    if is_irreducible(&f, &vec![a, b, 1]) {
                        n += 1;
                        assert!((0..p).all(|x| (x * x + b * x + a) % p != 0));
                    }
                }
            }
            assert_eq!(n, (p * p - p) / 2);
        }
    }
}
