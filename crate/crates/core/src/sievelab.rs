//! Sieve harness: local densities `omega(l)` of a set by residue enumeration, the large-sieve
//! sum `L(z)` and its bound, and exact counts of pairs with a large common prime factor.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{build_spf_table, is_prime, primes_up_to};
use crate::counting::{pair_soluble_in, PrimeSet, PrimeSetSpec};
use crate::error::{domain, resource, Result, StabError};
use crate::hilbert::hilbert_p;

/// Largest number of residue tuples `l^(nm)` the oracle enumerates.
pub const OMEGA_TUPLE_CAP: u64 = 100_000_000;
/// Largest bound accepted by the exact pair scan.
pub const GLS_CEILING: u64 = 1 << 14;

type Pattern = Arc<dyn Fn(&[u64], u64, u64) -> bool + Send + Sync>;

/// A set `Omega` in `Z^n` described by its images modulo prime powers.
#[derive(Clone)]
pub enum OmegaSpec {
    FullLattice(usize),
    /// Pairs with trivial Hilbert symbol at every prime of the set, signs unconstrained.
    SolubilityPairs(PrimeSetSpec),
    /// Tuples whose residues satisfy `pred(residues, l, l^m)`.
    DivisibilityPattern { n: usize, label: String, pred: Pattern },
}

impl OmegaSpec {
    /// Tuples not all divisible by `l`.
    pub fn not_all_divisible(n: usize) -> Self {
        OmegaSpec::DivisibilityPattern {
            n,
            label: "not-all-divisible".into(),
            pred: Arc::new(|xs: &[u64], l: u64, _| xs.iter().any(|x| x % l != 0)),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            OmegaSpec::FullLattice(n) => *n,
            OmegaSpec::SolubilityPairs(_) => 2,
            OmegaSpec::DivisibilityPattern { n, .. } => *n,
        }
    }

    /// Membership of an integer tuple.
    pub fn contains(&self, xs: &[i64]) -> Result<bool> {
        match self {
            OmegaSpec::FullLattice(_) => Ok(true),
            OmegaSpec::SolubilityPairs(p) => {
                if xs.contains(&0) {
                    return Ok(false);
                }
                let limit = xs.iter().map(|x| x.unsigned_abs()).max().unwrap_or(2).max(2);
                pair_soluble_in(xs[0], xs[1], &PrimeSet::resolve(p.clone(), limit.min(1 << 16))?)
            }
            OmegaSpec::DivisibilityPattern { .. } => {
                domain("membership of a divisibility pattern is only defined on residues")
            }
        }
    }
}

impl fmt::Debug for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaSpec::FullLattice(n) => write!(f, "full-lattice({n})"),
            OmegaSpec::SolubilityPairs(p) => write!(f, "solubility({p})"),
            OmegaSpec::DivisibilityPattern { n, label, .. } => write!(f, "{label}({n})"),
        }
    }
}

/// `omega(l)` for the primes of a range, at a fixed level `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaTable {
    pub m: u32,
    pub entries: BTreeMap<u64, BigRational>,
}

impl OmegaTable {
    /// Oracle values for every prime `<= z`.
    pub fn build(spec: &OmegaSpec, m: u32, z: u64) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for l in primes_up_to(z) {
            entries.insert(l, omega_oracle(spec, l, m)?);
        }
        Ok(OmegaTable { m, entries })
    }

    /// A table from a formula, for toy examples.
    pub fn from_fn(m: u32, z: u64, f: impl Fn(u64) -> BigRational) -> Self {
        OmegaTable { m, entries: primes_up_to(z).into_iter().map(|l| (l, f(l))).collect() }
    }
}

fn checked_pow(l: u64, e: u64) -> Option<u64> {
    l.checked_pow(u32::try_from(e).ok()?)
}

/// Valuation-parity and unit classes reachable by lifts of `x mod l^m`.
/// Odd `l`: bit `2 vpar + (unit non-square)`; `l = 2`: bit `4 vpar + (unit mod 8) / 2`.
fn lift_classes(x: u64, l: u64, m: u32, lm: u64) -> u8 {
    if x.is_multiple_of(lm) {
        return if l == 2 { 0xff } else { 0x0f };
    }
    let mut v = 0;
    let mut u = x;
    while u.is_multiple_of(l) {
        u /= l;
        v += 1;
    }
    let vpar = (v % 2) as u8;
    if l == 2 {
        // unit known modulo 2^(m - v)
        let known = 1u64 << (m - v).min(3);
        let mut mask = 0u8;
        for r in (1..8u64).step_by(2) {
            if r % known == u % known {
                mask |= 1 << (4 * vpar + (r / 2) as u8);
            }
        }
        mask
    } else {
        let nonsq = crate::arith::legendre_euler(u as i64, l) < 0;
        1 << (2 * vpar + nonsq as u8)
    }
}

fn class_rep(l: u64, class: u8) -> i64 {
    if l == 2 {
        let v = (class / 4) as u32;
        2i64.pow(v) * (2 * (class % 4) as i64 + 1)
    } else {
        let nonres = (2..l).find(|&r| crate::arith::legendre_euler(r as i64, l) < 0).unwrap_or(2);
        let unit = if class % 2 == 1 { nonres as i64 } else { 1 };
        if class / 2 == 1 {
            unit * l as i64
        } else {
            unit
        }
    }
}

/// Exact `omega(l)` with `#Omega(Z/l^m) = l^(nm) (1 - omega(l))`, where `Omega(Z/l^m)` is the
/// image of the set modulo `l^m`.
pub fn omega_oracle(spec: &OmegaSpec, l: u64, m: u32) -> Result<BigRational> {
    if !is_prime(l) {
        return domain(format!("{l} is not prime"));
    }
    if m == 0 {
        return domain("level m must be positive");
    }
    let n = spec.dimension() as u64;
    let lm = checked_pow(l, m as u64).ok_or_else(|| StabError::Resource(format!("{l}^{m} overflows")))?;
    let total = checked_pow(l, n * m as u64)
        .filter(|&t| t <= OMEGA_TUPLE_CAP)
        .ok_or_else(|| StabError::Resource(format!("{l}^{} residue tuples exceed the enumeration cap", n * m as u64)))?;
    let image: u64 = match spec {
        OmegaSpec::FullLattice(_) => total,
        OmegaSpec::SolubilityPairs(p) => {
            if !p.contains(l)? {
                total
            } else {
                let nclass = if l == 2 { 8 } else { 4 };
                let mut good = [[false; 8]; 8];
                for (a, row) in good.iter_mut().enumerate().take(nclass) {
                    for (b, g) in row.iter_mut().enumerate().take(nclass) {
                        *g = hilbert_p(class_rep(l, a as u8), class_rep(l, b as u8), l)? == 1;
                    }
                }
                let mut by_mask: BTreeMap<u8, u64> = BTreeMap::new();
                for x in 0..lm {
                    *by_mask.entry(lift_classes(x, l, m, lm)).or_default() += 1;
                }
                let mut count = 0u64;
                for (&ma, &ca) in &by_mask {
                    for (&mb, &cb) in &by_mask {
                        let hit = (0..nclass)
                            .any(|a| ma >> a & 1 == 1 && (0..nclass).any(|b| mb >> b & 1 == 1 && good[a][b]));
                        if hit {
                            count += ca * cb;
                        }
                    }
                }
                count
            }
        }
        OmegaSpec::DivisibilityPattern { n, pred, .. } => {
            let mut xs = vec![0u64; *n];
            let mut count = 0u64;
            for idx in 0..total {
                let mut r = idx;
                for x in xs.iter_mut() {
                    *x = r % lm;
                    r /= lm;
                }
                if pred(&xs, l, lm) {
                    count += 1;
                }
            }
            count
        }
    };
    Ok(BigRational::one() - BigRational::new(BigInt::from(image), BigInt::from(total)))
}

/// `L(z) = sum over squarefree q <= z of prod_{l | q} omega(l) / (1 - omega(l))`, exactly.
pub fn l_function(z: u64, table: &OmegaTable) -> Result<BigRational> {
    let primes = primes_up_to(z);
    let mut weights = Vec::with_capacity(primes.len());
    for &l in &primes {
        let w = table
            .entries
            .get(&l)
            .ok_or_else(|| StabError::Domain(format!("omega({l}) missing from the table")))?;
        if w.is_one() {
            return domain(format!("omega({l}) = 1: the set is degenerate"));
        }
        weights.push(w / (BigRational::one() - w));
    }
    // depth-first over squarefree q by increasing prime index
    fn walk(i: usize, q: u64, z: u64, primes: &[u64], w: &[BigRational], acc: &BigRational, sum: &mut BigRational) {
        *sum += acc;
        for j in i..primes.len() {
            let Some(q2) = q.checked_mul(primes[j]).filter(|&q2| q2 <= z) else { break };
            if w[j].is_zero() {
                continue;
            }
            walk(j + 1, q2, z, primes, w, &(acc * &w[j]), sum);
        }
    }
    let mut sum = BigRational::zero();
    walk(0, 1, z, &primes, &weights, &BigRational::one(), &mut sum);
    Ok(sum)
}

/// Largest integer `z` with `z^k <= b`.
fn int_root(b: u64, k: u32) -> u64 {
    let mut z = (b as f64).powf(1.0 / k as f64) as u64 + 1;
    while z > 0 && checked_pow(z, k as u64).is_none_or(|v| v > b) {
        z -= 1;
    }
    z
}

/// `(2B)^n / L(B^(1/2m))` with a precomputed table.
pub fn large_sieve_bound_with(b: u64, n: usize, table: &OmegaTable) -> Result<f64> {
    if b == 0 {
        return domain("B must be at least 1");
    }
    let z = int_root(b, 2 * table.m);
    let l = l_function(z, table)?;
    Ok((2.0 * b as f64).powi(n as i32) / l.to_f64().unwrap_or(f64::NAN))
}

pub fn large_sieve_bound(b: u64, m: u32, spec: &OmegaSpec) -> Result<f64> {
    let table = OmegaTable::build(spec, m, int_root(b.max(1), 2 * m))?;
    large_sieve_bound_with(b, spec.dimension(), &table)
}

/// Largest prime factor for every `n <= b`.
fn largest_prime_factors(b: u64) -> Result<Vec<u32>> {
    let spf = build_spf_table(b.max(2))?;
    let mut lpf = vec![0u32; b as usize + 1];
    for k in 2..=b as usize {
        let p = spf.get(k as u64).unwrap_or(k as u64) as usize;
        lpf[k] = lpf[k / p].max(p as u32);
    }
    Ok(lpf)
}

/// Pairs in `[1, B]^2` belonging to `Omega` whose gcd has a prime factor `> z`, by direct scan.
pub fn gls_exact_count(b: u64, z: u64, spec: &OmegaSpec) -> Result<u64> {
    if spec.dimension() != 2 {
        return domain("the pair scan needs n = 2");
    }
    if matches!(spec, OmegaSpec::DivisibilityPattern { .. }) {
        return domain("the pair scan needs an integer membership test");
    }
    if b > GLS_CEILING {
        return resource(format!("bound {b} exceeds the scan ceiling {GLS_CEILING}"));
    }
    if z >= b {
        return Ok(0);
    }
    let lpf = largest_prime_factors(b)?;
    let set = match spec {
        OmegaSpec::SolubilityPairs(p) => Some(PrimeSet::resolve(p.clone(), b.max(2))?),
        _ => None,
    };
    let mut count = 0u64;
    for s in 1..=b {
        for t in 1..=b {
            let g = s.gcd(&t);
            if (lpf[g as usize] as u64) <= z {
                continue;
            }
            let inside = match &set {
                Some(set) => pair_soluble_in(s as i64, t as i64, set)?,
                None => true,
            };
            if inside {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Full-lattice count by inclusion-exclusion over squarefree products of primes in `(z, B]`.
pub fn gls_inclusion_exclusion(b: u64, z: u64) -> Result<u64> {
    let primes: Vec<u64> = primes_up_to(b).into_iter().filter(|&p| p > z).collect();
    fn walk(i: usize, d: u64, sign: i64, b: u64, primes: &[u64], sum: &mut i64) {
        for j in i..primes.len() {
            let Some(d2) = d.checked_mul(primes[j]).filter(|&d2| d2 <= b) else { break };
            let k = (b / d2) as i64;
            *sum += sign * k * k;
            walk(j + 1, d2, -sign, b, primes, sum);
        }
    }
    let mut sum = 0i64;
    walk(0, 1, 1, b, &primes, &mut sum);
    Ok(sum as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlsRow {
    pub b: u64,
    pub z: u64,
    pub lhs: u64,
    pub rhs_shape: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlsReport {
    pub family: String,
    pub m: u32,
    pub rows: Vec<GlsRow>,
    /// Largest `lhs / rhs_shape`: an empirical implied constant.
    pub max_ratio: f64,
}

/// Exact left side against `B^2 / (z log z L(B^(1/4m))) + B^(2 - 1/4m)` (codimension 2, constant 1).
pub fn gls_ratio_report(bs: &[u64], zs: &[u64], spec: &OmegaSpec, m: u32) -> Result<GlsReport> {
    if bs.len() < 4 || zs.len() < 4 {
        return domain("ladders need at least 4 points");
    }
    if zs.iter().any(|&z| z < 2) {
        return domain("z must be at least 2");
    }
    let bmax = bs.iter().copied().max().unwrap_or(1);
    let table = OmegaTable::build(spec, m, int_root(bmax, 4 * m).max(2))?;
    let mut rows = Vec::new();
    for &b in bs {
        let l = l_function(int_root(b, 4 * m), &table)?.to_f64().unwrap_or(f64::NAN);
        let bf = b as f64;
        for &z in zs {
            let lhs = gls_exact_count(b, z, spec)?;
            let zf = z as f64;
            let rhs = bf * bf / (zf * zf.ln() * l) + bf.powf(2.0 - 1.0 / (4.0 * m as f64));
            rows.push(GlsRow { b, z, lhs, rhs_shape: rhs, ratio: lhs as f64 / rhs });
        }
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(GlsReport { family: spec.to_string(), m, rows, max_ratio })
}
