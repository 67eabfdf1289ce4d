//! Integer and rational polynomials: discriminant, Sturm sequences, evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ascending `BigInt` coefficients.
pub fn to_big(coeffs: &[i64]) -> Vec<BigInt> {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn trim_big(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn derivative(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

pub fn eval(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Fraction-free (Bareiss) determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    // rows hold descending coefficients
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            s[n + i][i + j] = c.clone();
        }
    }
    det_bareiss(s)
}

/// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
pub fn discriminant(a: &[BigInt]) -> BigInt {
    let n = a.len() - 1;
    let r = resultant(a, &derivative(a));
    let d = r / a.last().expect("nonzero polynomial");
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

fn rat_trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &c * bc;
        }
        r.pop();
        r = rat_trim(r);
    }
    r
}

/// Sturm chain `f, f', -rem(f, f'), ...`.
pub fn sturm_chain(a: &[BigInt]) -> Vec<Vec<BigRational>> {
    let to_rat = |v: &[BigInt]| rat_trim(v.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let mut chain = vec![to_rat(a), to_rat(&derivative(a))];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r: Vec<BigRational> = rat_rem(&chain[n - 2], &chain[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(a: &[BigInt]) -> usize {
    let chain = sturm_chain(a);
    let at_pos = chain.iter().map(|p| sign_of(p.last().unwrap()));
    let at_neg = chain.iter().map(|p| {
        let s = sign_of(p.last().unwrap());
        if (p.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    });
    sign_changes(at_neg) - sign_changes(at_pos)
}

/// `(r1, r2)` for a squarefree polynomial of degree n.
pub fn real_signature(a: &[BigInt]) -> (usize, usize) {
    let n = a.len() - 1;
    let r1 = count_real_roots(a);
    (r1, (n - r1) / 2)
}

/// Exact division over Z; `None` if not exact.
pub fn div_exact_z(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    let lc = b.last().unwrap();
    let mut r = a.to_vec();
    if r.len() <= db {
        return if r.iter().all(Zero::is_zero) { Some(vec![]) } else { None };
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        if !(&r[i] % lc).is_zero() {
            return None;
        }
        let c = &r[i] / lc;
        for (j, bc) in b.iter().enumerate() {
            r[i - db + j] = &r[i - db + j] - &c * bc;
        }
        q[i - db] = c;
    }
    r[..db].iter().all(Zero::is_zero).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(c: &[i64]) -> BigInt {
        discriminant(&to_big(c))
    }

    #[test]
    fn discriminants() {
        assert_eq!(disc(&[1, 0, 1]), BigInt::from(-4));
        assert_eq!(disc(&[-2, 0, 0, 1]), BigInt::from(-108));
        assert_eq!(disc(&[-1, -2, 1, 1]), BigInt::from(49));
        assert_eq!(disc(&[-1, 0, -2, 0, 1, 0, 1]), BigInt::from(153_664));
        // b^2 - 4ac for quadratics
        for a in -5i64..5 {
            for b in -5i64..5 {
                assert_eq!(disc(&[a, b, 1]), BigInt::from(b * b - 4 * a));
            }
        }
    }

    #[test]
    fn cubic_discriminant_formula() {
        // x^3 + p x + q: -4p^3 - 27q^2
        for p in -4i64..4 {
            for q in -4i64..4 {
                assert_eq!(disc(&[q, p, 0, 1]), BigInt::from(-4 * p * p * p - 27 * q * q));
            }
        }
    }

    #[test]
    fn signatures() {
        assert_eq!(real_signature(&to_big(&[1, 0, 1])), (0, 1));
        assert_eq!(real_signature(&to_big(&[-2, 0, 0, 1])), (1, 1));
        assert_eq!(real_signature(&to_big(&[-1, 0, -2, 0, 1, 0, 1])), (2, 2));
        assert_eq!(real_signature(&to_big(&[-1, -2, 1, 1])), (3, 0));
        // (x-1)(x-2)(x-3)(x^2+1)
        assert_eq!(real_signature(&to_big(&[-6, 11, -12, 12, -6, 1])), (3, 1));
    }

    #[test]
    fn exact_division() {
        let a = to_big(&[-1, 0, 1]);
        assert_eq!(div_exact_z(&a, &to_big(&[-1, 1])), Some(to_big(&[1, 1])));
        assert_eq!(div_exact_z(&a, &to_big(&[2, 1])), None);
    }
}
