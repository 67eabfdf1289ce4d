//! Rational points on `s x0^2 + t x1^2 = x2^2` by Legendre reduction and a Holzer-bounded search.

use num_integer::Integer;

use super::local::PairST;
use crate::arith::{factorize_u64, isqrt_u128};
use crate::error::{resource, Result, StabError};

/// Hard cap on search iterations before giving up with a resource error.
pub const POINT_SEARCH_CAP: u128 = 2_000_000_000;

/// A diagonal ternary form `sum c_i y_i^2 = 0` with the substitution `y_i = den_i x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreForm {
    pub coeffs: [i128; 3],
    pub dens: [i128; 3],
}

fn fits(x: i128) -> Result<i128> {
    if x.unsigned_abs() > i64::MAX as u128 {
        return resource(format!("reduced coefficient {x} exceeds 64 bits"));
    }
    Ok(x)
}

/// Reduces `c0 x0^2 + c1 x1^2 + c2 x2^2 = 0` to squarefree, pairwise coprime coefficients.
pub fn legendre_reduce(c: [i64; 3]) -> Result<LegendreForm> {
    let mut coeffs = c.map(|x| x as i128);
    let mut dens = [1i128; 3];
    if coeffs.contains(&0) {
        return Err(StabError::Domain("zero coefficient in ternary form".into()));
    }
    loop {
        let g = coeffs[0].gcd(&coeffs[1]).gcd(&coeffs[2]);
        if g > 1 {
            for x in &mut coeffs {
                *x /= g;
            }
        }
        // strip squares: c = f^2 c' turns c x^2 into c' (f x)^2
        for i in 0..3 {
            let mut f = 1i128;
            let mut rest = 1i128;
            for (p, e) in factorize_u64(coeffs[i].unsigned_abs() as u64, None) {
                let p = p as i128;
                f *= p.pow(e / 2);
                if e % 2 == 1 {
                    rest *= p;
                }
            }
            if f > 1 {
                coeffs[i] = coeffs[i].signum() * rest;
                dens[i] = fits(dens[i] * f)?;
            }
        }
        // a common factor of a pair moves onto the third coefficient
        let mut order = [0usize, 1, 2];
        order.sort_by_key(|&i| std::cmp::Reverse(coeffs[i].abs()));
        let mut changed = false;
        'pairs: for &i in &order {
            for j in 0..3 {
                if j == i {
                    continue;
                }
                let g = coeffs[i].gcd(&coeffs[j]);
                if g > 1 {
                    let k = 3 - i - j;
                    coeffs[i] /= g;
                    coeffs[j] /= g;
                    coeffs[k] = fits(coeffs[k] * g)?;
                    dens[i] = fits(dens[i] * g)?;
                    dens[j] = fits(dens[j] * g)?;
                    changed = true;
                    break 'pairs;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(LegendreForm { coeffs, dens })
}

fn is_square(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_u128(n as u128) as i128;
    (r * r == n).then_some(r)
}

/// 0, 1, -1, 2, -2, ... up to `bound`.
fn zigzag(bound: i128) -> impl Iterator<Item = i128> {
    (0..=2 * bound).map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) })
}

/// Holzer-bounded search on a reduced form; a nontrivial integer solution or `None`.
pub fn holzer_search(form: &LegendreForm) -> Result<Option<[i128; 3]>> {
    let c = form.coeffs;
    if (c[0] > 0) == (c[1] > 0) && (c[1] > 0) == (c[2] > 0) {
        return Ok(None);
    }
    let bound = |i: usize| -> i128 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        isqrt_u128((c[j] * c[k]).unsigned_abs()) as i128
    };
    let bounds = [bound(0), bound(1), bound(2)];
    // iterate over the two smallest boxes, later index first on ties
    let mut idx = [0usize, 1, 2];
    idx.sort_by_key(|&i| (bounds[i], std::cmp::Reverse(i)));
    let solve = idx[2];
    let (mut outer, mut inner) = (idx[0], idx[1]);
    if outer > inner && bounds[outer] == bounds[inner] {
        std::mem::swap(&mut outer, &mut inner);
    }
    let work = (bounds[outer] as u128 + 1) * (2 * bounds[inner] as u128 + 1);
    if work > POINT_SEARCH_CAP {
        return resource(format!("Holzer box of {work} points exceeds the search cap"));
    }
    for u in 0..=bounds[outer] {
        for v in zigzag(bounds[inner]) {
            if u == 0 && v == 0 {
                continue;
            }
            let rest = -(c[outer] * u * u + c[inner] * v * v);
            if rest % c[solve] != 0 {
                continue;
            }
            if let Some(w) = is_square(rest / c[solve]) {
                let mut sol = [0i128; 3];
                sol[outer] = u;
                sol[inner] = v;
                sol[solve] = w;
                return Ok(Some(sol));
            }
        }
    }
    Ok(None)
}

/// A primitive nonnegative point `(x0, x1, x2)` with `s x0^2 + t x1^2 = x2^2`, or `None` when
/// the Holzer box is empty, which certifies that the conic has no rational point.
pub fn find_rational_point(pair: PairST) -> Result<Option<(i64, i64, i64)>> {
    let form = legendre_reduce([pair.s, pair.t, -1])?;
    let Some(y) = holzer_search(&form)? else {
        return Ok(None);
    };
    // x_i = y_i / den_i, scaled by lcm of the denominators
    let l = form.dens.iter().fold(1i128, |acc, d| acc.lcm(d));
    let mut x = [0i128; 3];
    for i in 0..3 {
        x[i] = (y[i] * (l / form.dens[i])).abs();
    }
    let g = x[0].gcd(&x[1]).gcd(&x[2]);
    for xi in &mut x {
        *xi /= g;
    }
    let lhs = (pair.s as i128)
        .checked_mul(x[0] * x[0])
        .and_then(|a| (pair.t as i128).checked_mul(x[1] * x[1]).and_then(|b| a.checked_add(b)));
    match lhs {
        Some(v) if v == x[2] * x[2] => {}
        _ => return resource(format!("point for ({}, {}) could not be verified in 128 bits", pair.s, pair.t)),
    }
    let conv = |v: i128| i64::try_from(v).map_err(|_| StabError::Resource("point exceeds 64 bits".into()));
    Ok(Some((conv(x[0])?, conv(x[1])?, conv(x[2])?)))
}
