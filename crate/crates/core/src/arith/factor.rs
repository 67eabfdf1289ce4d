use super::primes::split_u64;
use super::spf::SpfTable;
use crate::error::{domain, Result};

/// `sign * prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Rebuilds the integer; `None` on overflow.
    pub fn value(&self) -> Option<i128> {
        let mut acc: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                acc = acc.checked_mul(p as i128)?;
            }
        }
        Some(acc)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

/// Factorization of |n| as a u64 (n > 0).
pub fn factorize_u64(n: u64, table: Option<&SpfTable>) -> Vec<(u64, u32)> {
    if let Some(t) = table {
        if n <= t.limit() {
            return t.factor(n);
        }
    }
    let mut raw = Vec::new();
    split_u64(n, &mut raw);
    raw.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in raw {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn factorize(n: i64, table: Option<&SpfTable>) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    Ok(Factorization {
        sign: if n < 0 { -1 } else { 1 },
        factors: factorize_u64(n.unsigned_abs(), table),
    })
}

/// Writes `n = p^e * u` with `p` not dividing `u`.
pub fn valuation_split(n: i64, p: u64) -> Result<(u32, i64)> {
    if n == 0 {
        return domain("valuation of 0 is undefined");
    }
    if p < 2 {
        return domain(format!("{p} is not a prime"));
    }
    let p = p as i128;
    let mut u = n as i128;
    let mut e = 0;
    while u % p == 0 {
        u /= p;
        e += 1;
    }
    Ok((e, u as i64))
}

/// Squarefree part with sign, e.g. -72 -> -2.
pub fn squarefree_part(n: i64) -> Result<i64> {
    let f = factorize(n, None)?;
    let mut acc: i64 = f.sign as i64;
    for (p, e) in f.factors {
        if e % 2 == 1 {
            acc *= p as i64;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::spf::build_spf_table;

    #[test]
    fn examples() {
        let f = factorize(360, None).unwrap();
        assert_eq!((f.sign, f.factors), (1, vec![(2, 3), (3, 2), (5, 1)]));
        let f = factorize(-24, None).unwrap();
        assert_eq!((f.sign, f.factors), (-1, vec![(2, 3), (3, 1)]));
        assert_eq!(factorize(561, None).unwrap().factors, vec![(3, 1), (11, 1), (17, 1)]);
        assert!(factorize(0, None).is_err());
        assert_eq!(factorize(1, None).unwrap().factors, vec![]);
        let m = factorize(i64::MIN, None).unwrap();
        assert_eq!((m.sign, m.factors), (-1, vec![(2, 63)]));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation_split(-24, 2).unwrap(), (3, -3));
        assert_eq!(valuation_split(7, 5).unwrap(), (0, 7));
        assert_eq!(valuation_split(250, 5).unwrap(), (3, 2));
        assert!(valuation_split(0, 3).is_err());
    }

    #[test]
    fn exhaustive_reconstruction_to_1e6() {
        let t = build_spf_table(1_000_000).unwrap();
        for n in 2..=1_000_000i64 {
            let f = factorize(n, Some(&t)).unwrap();
            assert_eq!(f.value(), Some(n as i128));
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn table_and_rho_agree() {
        let t = build_spf_table(10_000).unwrap();
        for n in (9_000..10_000).chain([999_999_937 * 3, 1 << 40]) {
            let a = factorize(n, Some(&t)).unwrap();
            let b = factorize(n, None).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(-72).unwrap(), -2);
        assert_eq!(squarefree_part(49).unwrap(), 1);
    }
}
