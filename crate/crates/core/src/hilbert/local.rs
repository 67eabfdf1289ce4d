use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, kronecker, valuation_split};
use crate::error::{domain, Result};

/// The conic `s x0^2 + t x1^2 = x2^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairST {
    pub s: i64,
    pub t: i64,
}

impl PairST {
    pub fn new(s: i64, t: i64) -> Result<Self> {
        if s == 0 || t == 0 {
            return domain(format!("pair ({s}, {t}) has a zero entry"));
        }
        Ok(PairST { s, t })
    }
}

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Real,
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => write!(f, "inf"),
        }
    }
}

fn nonzero(a: i64, b: i64) -> Result<()> {
    if a == 0 || b == 0 {
        return domain(format!("Hilbert symbol needs nonzero arguments, got ({a}, {b})"));
    }
    Ok(())
}

pub fn hilbert_real(a: i64, b: i64) -> Result<i8> {
    nonzero(a, b)?;
    Ok(if a < 0 && b < 0 { -1 } else { 1 })
}

#[inline]
fn eps(u: i64) -> u32 {
    // (u-1)/2 mod 2 for odd u
    ((u.rem_euclid(4) - 1) / 2) as u32
}

#[inline]
fn omega(u: i64) -> u32 {
    // (u^2-1)/8 mod 2 for odd u
    matches!(u.rem_euclid(8), 3 | 5) as u32
}

/// Symbol at p = 2 from the valuation/unit decomposition.
pub(crate) fn hilbert_two_parts(alpha: u32, u: i64, beta: u32, v: i64) -> i8 {
    let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Symbol at an odd prime from the valuation/unit decomposition.
pub(crate) fn hilbert_odd_parts(alpha: u32, u: i64, beta: u32, v: i64, p: u64) -> i8 {
    let mut r = 1i8;
    if (alpha * beta) % 2 == 1 && p % 4 == 3 {
        r = -r;
    }
    if beta % 2 == 1 {
        r *= kronecker(u, p as i64);
    }
    if alpha % 2 == 1 {
        r *= kronecker(v, p as i64);
    }
    r
}

/// `(a, b)` over `Q_p`.
pub fn hilbert_p(a: i64, b: i64, p: u64) -> Result<i8> {
    nonzero(a, b)?;
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let (alpha, u) = valuation_split(a, p)?;
    let (beta, v) = valuation_split(b, p)?;
    Ok(if p == 2 {
        hilbert_two_parts(alpha, u, beta, v)
    } else {
        hilbert_odd_parts(alpha, u, beta, v, p)
    })
}

pub fn hilbert_at(a: i64, b: i64, place: Place) -> Result<i8> {
    match place {
        Place::Real => hilbert_real(a, b),
        Place::Finite(p) => hilbert_p(a, b, p),
    }
}

pub fn is_conic_soluble_at(pair: PairST, place: Place) -> Result<bool> {
    Ok(hilbert_at(pair.s, pair.t, place)? == 1)
}

/// Places at which the symbol of `(a, b)` can be nontrivial: the real place, 2, and odd primes dividing `ab`.
pub fn relevant_places(a: i64, b: i64) -> Result<Vec<Place>> {
    nonzero(a, b)?;
    let mut ps: Vec<u64> = factorize(a, None)?.primes().collect();
    ps.extend(factorize(b, None)?.primes());
    ps.push(2);
    ps.sort_unstable();
    ps.dedup();
    let mut out = vec![Place::Real];
    out.extend(ps.into_iter().map(Place::Finite));
    Ok(out)
}

/// Hasse–Minkowski: soluble over Q iff soluble at every place.
pub fn is_conic_soluble_q(pair: PairST) -> Result<bool> {
    for place in relevant_places(pair.s, pair.t)? {
        if hilbert_at(pair.s, pair.t, place)? == -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product of the local symbols over every place where one can be nontrivial.
pub fn product_over_places(a: i64, b: i64) -> Result<i8> {
    let mut acc = 1;
    for place in relevant_places(a, b)? {
        acc *= hilbert_at(a, b, place)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use proptest::prelude::*;

    /// Brute force over Z/p^k: a primitive solution of a x^2 + b y^2 = z^2 that
    /// is nonsingular enough to lift (checked at modulus p^k with k large).
    fn brute_symbol(a: i64, b: i64, p: u64, k: u32) -> i8 {
        let m = (p as i64).pow(k);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let primitive = x % p as i64 != 0 || y % p as i64 != 0 || z % p as i64 != 0;
                    if primitive && (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn examples() {
        assert_eq!(hilbert_real(-1, -1).unwrap(), -1);
        assert_eq!(hilbert_real(1, -1).unwrap(), 1);
        assert_eq!(hilbert_real(3, 5).unwrap(), 1);
        assert_eq!(hilbert_p(3, -1, 3).unwrap(), -1);
        assert_eq!(brute_symbol(3, -1, 3, 3), -1);
        assert_eq!(hilbert_p(2, 7, 2).unwrap(), 1);
        assert_eq!(hilbert_p(-1, -1, 2).unwrap(), -1);
        assert_eq!(brute_symbol(-1, -1, 2, 2), -1);
        for p in [2, 3, 5, 7, 11] {
            for b in [-12, -1, 3, 50] {
                assert_eq!(hilbert_p(1, b, p).unwrap(), 1);
            }
        }
        assert!(hilbert_p(0, 1, 3).is_err());
        assert!(hilbert_p(1, 1, 9).is_err());
        assert!(hilbert_real(0, 1).is_err());
    }

    #[test]
    fn soluble_examples() {
        let p = |s, t| PairST::new(s, t).unwrap();
        assert!(is_conic_soluble_at(p(2, 7), Place::Finite(2)).unwrap());
        assert!(!is_conic_soluble_at(p(3, 3), Place::Finite(3)).unwrap());
        assert!(!is_conic_soluble_at(p(-1, -1), Place::Real).unwrap());
        assert!(is_conic_soluble_q(p(2, 7)).unwrap());
        assert!(!is_conic_soluble_q(p(3, 3)).unwrap());
        assert!(is_conic_soluble_q(p(5, -1)).unwrap());
        assert!(PairST::new(0, 2).is_err());
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_over_places(6, 10).unwrap(), 1);
        assert_eq!(product_over_places(-1, -1).unwrap(), 1);
        assert_eq!(product_over_places(15, -7).unwrap(), 1);
        let at = |pl| hilbert_at(15, -7, pl).unwrap();
        let direct: i8 = [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7)]
            .into_iter()
            .map(at)
            .product();
        assert_eq!(direct, 1);
    }

    /// The closed form at 2 against exhaustive search mod 32 for all classes
    /// (valuation 0/1, unit mod 8) of both arguments.
    #[test]
    fn two_adic_closed_form_vs_search_mod_32() {
        let mut classes = 0;
        for alpha in 0..2u32 {
            for u in [1i64, 3, 5, 7] {
                for beta in 0..2u32 {
                    for v in [1i64, 3, 5, 7] {
                        let a = (1 << alpha) * u;
                        let b = (1 << beta) * v;
                        assert_eq!(hilbert_p(a, b, 2).unwrap(), brute_symbol(a, b, 2, 5), "({a},{b})");
                        classes += 1;
                    }
                }
            }
        }
        assert_eq!(classes, 64);
        // Units mod 32 with every valuation pattern up to 3.
        for a in [1i64, 3, 5, 7, 9, 11, 13, 15, 2, 6, 10, 14, 4, 12, 8, 24] {
            for b in [1i64, 3, 5, 7, 9, 11, 13, 15, 2, 6, 10, 14, 4, 12, 8, 24] {
                let va = a.trailing_zeros();
                let vb = b.trailing_zeros();
                if va.min(vb) == 0 {
                    assert_eq!(hilbert_p(a, b, 2).unwrap(), brute_symbol(a, b, 2, 5), "({a},{b})");
                }
            }
        }
    }

    #[test]
    fn odd_formula_vs_search() {
        for p in [3u64, 5] {
            for a in [1i64, 2, 3, 6, 5, 10, 15, -1, -3] {
                for b in [1i64, 2, 3, 7, 5, -5, 15, -2] {
                    assert_eq!(hilbert_p(a, b, p).unwrap(), brute_symbol(a, b, p, 3), "({a},{b},{p})");
                }
            }
        }
    }

    #[test]
    fn a_minus_a_trivial_everywhere() {
        for a in (-200i64..200).filter(|&a| a != 0) {
            for pl in relevant_places(a, -a).unwrap() {
                assert_eq!(hilbert_at(a, -a, pl).unwrap(), 1);
            }
        }
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        proptest::sample::select(primes_up_to(200))
    }

    fn nz(r: i64) -> impl Strategy<Value = i64> {
        (-r..=r).prop_filter("nonzero", |x| *x != 0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20_000))]
        #[test]
        fn symmetry(a in nz(1_000_000), b in nz(1_000_000), p in small_prime()) {
            prop_assert_eq!(hilbert_p(a, b, p).unwrap(), hilbert_p(b, a, p).unwrap());
        }

        #[test]
        fn bilinear(a in nz(3000), a2 in nz(3000), b in nz(1_000_000), p in small_prime()) {
            prop_assert_eq!(
                hilbert_p(a * a2, b, p).unwrap(),
                hilbert_p(a, b, p).unwrap() * hilbert_p(a2, b, p).unwrap()
            );
        }

        #[test]
        fn square_invariance(a in nz(1_000_000), b in nz(1_000_000), c in nz(1000), p in small_prime()) {
            prop_assert_eq!(hilbert_p(a * c * c, b, p).unwrap(), hilbert_p(a, b, p).unwrap());
        }

        #[test]
        fn reciprocity(a in nz(1_000_000), b in nz(1_000_000)) {
            prop_assert_eq!(product_over_places(a, b).unwrap(), 1);
        }

        /// Congruent lifts with bounded valuations share the symbol (odd p: modulus p^{1+k}; p = 2: 2^{3+k}).
        #[test]
        fn periodicity(p in proptest::sample::select(primes_up_to(47)), k in 2u32..4, s in nz(100_000), t in nz(100_000), ls in -50i64..50, lt in -50i64..50) {
            let m: i64 = if p == 2 { 1 << (3 + k) } else { (p as i64).pow(1 + k) };
            let (vs, _) = valuation_split(s, p).unwrap();
            let (vt, _) = valuation_split(t, p).unwrap();
            prop_assume!(vs <= k && vt <= k);
            let sigma = s.rem_euclid(m);
            let tau = t.rem_euclid(m);
            prop_assume!(sigma != 0 && tau != 0);
            let s2 = s + ls * m;
            let t2 = t + lt * m;
            prop_assume!(s2 != 0 && t2 != 0);
            let h = hilbert_p(s, t, p).unwrap();
            prop_assert_eq!(h, hilbert_p(sigma, tau, p).unwrap());
            prop_assert_eq!(h, hilbert_p(s2, t2, p).unwrap());
        }
    }
}
