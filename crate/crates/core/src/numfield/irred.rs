//! Irreducibility of monic integer polynomials over Q.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ff::PrimeField;
use super::fpoly;
use super::intpoly::{div_exact_z, eval, to_big};
use crate::arith::{factorize_u64, primes_up_to};
use crate::error::{resource, Result};

/// Primes used for the mod-p witness and the degree sieve.
pub const WITNESS_PRIME_BOUND: u64 = 200;
/// Cap on divisor combinations tried for one candidate factor degree.
pub const KRONECKER_COMBO_CAP: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    /// `f mod p` is squarefree and irreducible.
    ModPWitness(u64),
    /// Degree sieve and exact factor search found nothing.
    FactorSearch,
    /// An explicit factor over Z.
    Reducible(Vec<BigInt>),
}

fn subset_sums(degs: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0]);
    for &d in degs {
        let next: Vec<usize> = s.iter().map(|x| x + d).collect();
        s.extend(next);
    }
    s
}

fn signed_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m = n.abs().to_u64()?;
    let mut divs = vec![1u64];
    for (p, e) in factorize_u64(m, None) {
        let cur = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(cur.iter().map(|d| d * pk));
        }
    }
    let mut out = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        out.push(BigInt::from(d));
        out.push(-BigInt::from(d));
    }
    Some(out)
}

/// Lagrange interpolation through `(x_j, y_j)`; `None` unless the result has integer coefficients.
fn interpolate_integral(xs: &[BigInt], ys: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = xs.len();
    let mut acc = vec![BigRational::zero(); n];
    for j in 0..n {
        // basis polynomial prod_{m != j} (x - x_m) / (x_j - x_m)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for m in 0..n {
            if m == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, c) in basis.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * BigRational::from_integer(xs[m].clone());
            }
            basis = next;
            denom *= BigRational::from_integer(&xs[j] - &xs[m]);
        }
        let scale = BigRational::from_integer(ys[j].clone()) / denom;
        for (i, c) in basis.into_iter().enumerate() {
            acc[i] += c * &scale;
        }
    }
    if acc.iter().any(|c| !c.is_integer()) {
        return None;
    }
    let mut out: Vec<BigInt> = acc.into_iter().map(|c| c.to_integer()).collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    Some(out)
}

/// Kronecker's method for a factor of exact degree `k`.
fn kronecker_factor(f: &[BigInt], k: usize) -> Result<Option<Vec<BigInt>>> {
    // k+1 sample points with the fewest divisors of f(x)
    let mut cands: Vec<(usize, BigInt, Vec<BigInt>)> = Vec::new();
    for x in -40i64..=40 {
        let xb = BigInt::from(x);
        let v = eval(f, &xb);
        if v.is_zero() {
            return Ok(Some(vec![-xb, BigInt::one()]));
        }
        if let Some(d) = signed_divisors(&v) {
            cands.push((d.len(), xb, d));
        }
    }
    cands.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.abs().cmp(&b.1.abs())));
    cands.truncate(k + 1);
    if cands.len() < k + 1 {
        return resource("not enough sample points for factor search");
    }
    let work: u128 = cands.iter().map(|c| c.0 as u128).product();
    if work > KRONECKER_COMBO_CAP * 2 {
        return resource(format!("factor search of degree {k} needs {work} combinations"));
    }
    let xs: Vec<BigInt> = cands.iter().map(|c| c.1.clone()).collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        // the first value is taken positive to fix the sign of the factor
        if idx[0].is_multiple_of(2) {
            let ys: Vec<BigInt> = idx.iter().zip(&cands).map(|(&i, c)| c.2[i].clone()).collect();
            if let Some(h) = interpolate_integral(&xs, &ys) {
                if h.len() == k + 1 && div_exact_z(f, &h).is_some() {
                    return Ok(Some(h));
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < cands[pos].2.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Decides irreducibility of a monic integer polynomial of degree >= 1.
pub fn check_irreducible(f: &[i64]) -> Result<Irreducibility> {
    let n = f.len() - 1;
    let mut possible: BTreeSet<usize> = (1..=n / 2).collect();
    for p in primes_up_to(WITNESS_PRIME_BOUND) {
        let k = PrimeField::new(p);
        if let Some(degs) = fpoly::degree_multiset(&k, &fpoly::from_i64s(&k, f)) {
            if degs.len() == 1 {
                return Ok(Irreducibility::ModPWitness(p));
            }
            let sums = subset_sums(&degs);
            possible.retain(|d| sums.contains(d));
        }
    }
    let fb = to_big(f);
    for k in possible {
        if let Some(h) = kronecker_factor(&fb, k)? {
            return Ok(Irreducibility::Reducible(h));
        }
    }
    Ok(Irreducibility::FactorSearch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses() {
        assert!(matches!(check_irreducible(&[1, 0, 1]).unwrap(), Irreducibility::ModPWitness(3)));
        assert!(matches!(check_irreducible(&[-2, 0, 0, 1]).unwrap(), Irreducibility::ModPWitness(_)));
    }

    #[test]
    fn sextic_needs_factor_search() {
        // A4 acting on 6 points has no 6-cycle, so no prime is a witness
        assert_eq!(check_irreducible(&[-1, 0, -2, 0, 1, 0, 1]).unwrap(), Irreducibility::FactorSearch);
        // x^4 + 1 is reducible mod every prime but irreducible over Q
        assert_eq!(check_irreducible(&[1, 0, 0, 0, 1]).unwrap(), Irreducibility::FactorSearch);
    }

    #[test]
    fn reducible_found() {
        // (x^2+1)(x^2+2)
        match check_irreducible(&[2, 0, 3, 0, 1]).unwrap() {
            Irreducibility::Reducible(h) => assert!(div_exact_z(&to_big(&[2, 0, 3, 0, 1]), &h).is_some()),
            other => panic!("{other:?}"),
        }
        // (x^3 - 2)(x^3 + x + 1)
        let f = [-2, -2, 0, -1, 1, 0, 1];
        assert!(matches!(check_irreducible(&f).unwrap(), Irreducibility::Reducible(_)));
        assert!(matches!(check_irreducible(&[-4, 0, 1]).unwrap(), Irreducibility::Reducible(_)));
    }
}
