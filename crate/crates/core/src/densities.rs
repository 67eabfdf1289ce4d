//! Local densities `mu_p`: the Haar measure of pairs in `Z_p^2` with trivial Hilbert symbol.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::is_prime;
use crate::error::{domain, resource, Result};
use crate::hilbert::hilbert_p;

/// Largest `p^m` the oracle will enumerate.
pub const ORACLE_RESIDUE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityValue {
    pub exact: BigRational,
}

impl DensityValue {
    pub fn to_f64(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::NAN)
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Closed form: `11/18` at 2 and `(2p^2+2p+1)/(2(p+1)^2)` at odd p.
///
/// At 2 the valuation-parity classes (even, even), (even, odd), (odd, even), (odd, odd)
/// carry mass 4/9, 2/9, 2/9, 1/9 and the symbol is trivial on 12, 8, 8 and 8 of the
/// 16 unit classes mod 8, giving `(12 + 4 + 4 + 2) / 36`.
pub fn mu_exact(p: u64) -> Result<DensityValue> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if p == 2 {
        return Ok(DensityValue { exact: ratio(11, 18) });
    }
    let p = BigInt::from(p);
    let num = BigInt::from(2) * &p * &p + BigInt::from(2) * &p + 1;
    let den = BigInt::from(2) * (&p + 1) * (&p + 1);
    Ok(DensityValue { exact: BigRational::new(num, den) })
}

/// Floating-point `mu_p`, for products over many primes.
pub fn mu_f64(p: u64) -> f64 {
    if p == 2 {
        11.0 / 18.0
    } else {
        let p = p as f64;
        (2.0 * p * p + 2.0 * p + 1.0) / (2.0 * (p + 1.0) * (p + 1.0))
    }
}

/// A certified enclosure `lo <= mu_p <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl OracleInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Counts residue pairs mod `p^m` whose symbol is fixed by the valuation and the leading
/// unit (mod p, or mod 8 at 2); pairs with a valuation above `m-3` stay unclassified.
pub fn mu_oracle(p: u64, m: u32) -> Result<OracleInterval> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if m < 3 {
        return domain(format!("oracle depth must be at least 3, got {m}"));
    }
    let modulus = match p.checked_pow(m) {
        Some(q) if q <= ORACLE_RESIDUE_CAP => q,
        _ => return resource(format!("{p}^{m} residues exceed the oracle cap {ORACLE_RESIDUE_CAP}")),
    };
    let unit_mod = if p == 2 { 8 } else { p };
    let vmax = m - 3;
    // bucket every residue by (valuation, unit class)
    let mut buckets: BTreeMap<(u32, u64), u64> = BTreeMap::new();
    for x in 1..modulus {
        let mut v = 0;
        let mut u = x;
        while u % p == 0 {
            u /= p;
            v += 1;
        }
        if v <= vmax {
            *buckets.entry((v, u % unit_mod)).or_insert(0) += 1;
        }
    }
    let reps: Vec<(i64, u64)> = buckets
        .iter()
        .map(|(&(v, c), &n)| ((p as i64).pow(v) * c as i64, n))
        .collect();
    let mut good: u128 = 0;
    let mut classified: u128 = 0;
    for &(a, na) in &reps {
        for &(b, nb) in &reps {
            let w = na as u128 * nb as u128;
            classified += w;
            if hilbert_p(a, b, p)? == 1 {
                good += w;
            }
        }
    }
    let total = modulus as u128 * modulus as u128;
    let den = BigInt::from(total);
    let lo = BigRational::new(BigInt::from(good), den.clone());
    let hi = BigRational::new(BigInt::from(good + (total - classified)), den);
    Ok(OracleInterval { lo, hi })
}

/// Deepens the oracle until the interval is at most `max_width` wide.
pub fn certify_mu(p: u64, max_width: &BigRational) -> Result<(u32, OracleInterval)> {
    let mut m = 3;
    loop {
        let iv = mu_oracle(p, m)?;
        if &iv.width() <= max_width {
            return Ok((m, iv));
        }
        m += 1;
    }
}

/// `2 mu_p - 1`, the factor attached to primes outside a prime set.
pub fn two_mu_minus_one(p: u64) -> Result<BigRational> {
    Ok(mu_exact(p)?.exact * BigInt::from(2) - BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    #[test]
    fn closed_form_values() {
        assert_eq!(mu_exact(2).unwrap().exact, ratio(11, 18));
        assert_eq!(mu_exact(3).unwrap().exact, ratio(25, 32));
        assert_eq!(mu_exact(5).unwrap().exact, ratio(61, 72));
        assert_eq!(mu_exact(7).unwrap().exact, ratio(113, 128));
        assert!(mu_exact(9).is_err());
        assert!((mu_f64(7) - 113.0 / 128.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_examples() {
        let i = mu_oracle(3, 7).unwrap();
        assert!(i.contains(&ratio(25, 32)));
        assert!(i.width() <= ratio(2, 243));
        let two = mu_oracle(2, 9).unwrap();
        assert!(two.contains(&ratio(11, 18)));
        // 13/18 lies outside the certified interval
        assert!(!two.contains(&ratio(13, 18)));
        assert!(mu_oracle(5, 5).unwrap().contains(&ratio(61, 72)));
        assert!(mu_oracle(3, 2).is_err());
        assert!(matches!(mu_oracle(7, 12), Err(crate::error::StabError::Resource(_))));
    }

    #[test]
    fn oracle_width_bound() {
        for (p, m) in [(2u64, 8u32), (3, 6), (5, 5), (11, 4)] {
            let i = mu_oracle(p, m).unwrap();
            assert!(i.contains(&mu_exact(p).unwrap().exact));
            assert!(i.width() <= ratio(2, p.pow(m - 2)));
        }
    }

    #[test]
    fn certification_reaches_width() {
        let w = ratio(1, 1000);
        for p in [2, 3, 5, 7] {
            let (_, iv) = certify_mu(p, &w).unwrap();
            assert!(iv.width() <= w && iv.contains(&mu_exact(p).unwrap().exact));
        }
    }

    #[test]
    fn two_adic_unit_class_counts() {
        // symbol trivial on 12, 8, 8, 8 of the 16 odd unit pairs mod 8 per valuation parity class
        let units = [1i64, 3, 5, 7];
        let mut counts = Vec::new();
        for (a, b) in [(0u32, 0u32), (0, 1), (1, 0), (1, 1)] {
            let mut c = 0;
            for &u in &units {
                for &v in &units {
                    if hilbert_p((1 << a) * u, (1 << b) * v, 2).unwrap() == 1 {
                        c += 1;
                    }
                }
            }
            counts.push(c);
        }
        assert_eq!(counts, vec![12, 8, 8, 8]);
    }

    #[test]
    fn shape_bounds_for_odd_primes() {
        for p in primes_up_to(10_000).into_iter().skip(1) {
            let mu = mu_exact(p).unwrap().exact;
            let pr = ratio(1, p);
            let pr2 = ratio(1, p * p);
            let one = BigRational::one();
            assert!(&one - &pr - &pr2 < mu);
            assert!(mu < &one - &pr + &pr2 * BigInt::from(2));
            let t = two_mu_minus_one(p).unwrap();
            assert!(t > BigRational::from_integer(0.into()) && t < one);
        }
        let t2 = two_mu_minus_one(2).unwrap();
        assert_eq!(t2, ratio(2, 9));
    }
}
