//! Frobenius statistics, local degrees, the set of primes with only even local degrees,
//! and the stability trichotomy.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ff::PrimeField;
use super::field::FieldSpec;
use super::fpoly;
use super::intpoly;
use super::local::{dedekind_degrees, newton_degrees, valuation_big, LocalSplitting, SplitSource};
use crate::arith::{factorize_u64, primes_up_to};
use crate::error::{Result, StabError};
use crate::permgroup::delta_of_group;

pub fn discriminant(poly: &[i64]) -> BigInt {
    intpoly::discriminant(&intpoly::to_big(poly))
}

/// Degrees of the irreducible factors of `poly mod p`, or `None` when the reduction is not squarefree.
pub fn degree_multiset_mod_p(poly: &[i64], p: u64) -> Option<Vec<usize>> {
    let k = PrimeField::new(p);
    fpoly::degree_multiset(&k, &fpoly::from_i64s(&k, poly))
}

pub fn real_signature(poly: &[i64]) -> (usize, usize) {
    intpoly::real_signature(&intpoly::to_big(poly))
}

/// Primes dividing the discriminant of the defining polynomial.
pub fn disc_primes(spec: &FieldSpec) -> Vec<u64> {
    let d = spec.disc.magnitude().to_u64().expect("discriminant fits in 64 bits for desk-scale fields");
    factorize_u64(d, None).into_iter().map(|(p, _)| p).collect()
}

fn disc_valuation(spec: &FieldSpec, p: u64) -> u32 {
    valuation_big(&spec.disc, p).unwrap_or(0)
}

/// Local degrees at `p`, forcing the Newton-polygon route.
pub fn local_degrees_newton(spec: &FieldSpec, p: u64) -> Result<LocalSplitting> {
    let bound = 4 * (1 + disc_valuation(spec, p));
    Ok(LocalSplitting { p, degrees: newton_degrees(&spec.poly, p, bound)?, source: SplitSource::NewtonPolygon })
}

pub fn local_degrees(spec: &FieldSpec, p: u64) -> Result<LocalSplitting> {
    if let Some(degrees) = degree_multiset_mod_p(&spec.poly, p) {
        return Ok(LocalSplitting { p, degrees, source: SplitSource::DedekindModP });
    }
    if disc_valuation(spec, p) < 2 {
        return Ok(LocalSplitting { p, degrees: dedekind_degrees(&spec.poly, p), source: SplitSource::DedekindModP });
    }
    if let Some(d) = spec.local_overrides.get(&p) {
        let mut degrees = d.clone();
        degrees.sort_unstable();
        return Ok(LocalSplitting { p, degrees, source: SplitSource::Override });
    }
    local_degrees_newton(spec, p)
}

/// `p` lies in the exceptional set iff every local degree at `p` is even.
pub fn in_al(spec: &FieldSpec, p: u64) -> Result<bool> {
    Ok(local_degrees(spec, p)?.all_even())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub prime: u64,
    pub in_al: bool,
    /// Space-separated local degrees.
    pub degrees: String,
    pub source: SplitSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlScan {
    pub bound: u64,
    pub members: Vec<u64>,
    pub flagged: Vec<(u64, String)>,
    pub rows: Vec<ScanRow>,
    pub prime_count: usize,
}

impl AlScan {
    pub fn density(&self) -> f64 {
        self.members.len() as f64 / self.prime_count.max(1) as f64
    }
}

/// Exact membership for every prime `p <= x`; primes needing an override are reported, not guessed.
pub fn scan_al(spec: &FieldSpec, x: u64) -> AlScan {
    let primes = primes_up_to(x);
    let mut members = Vec::new();
    let mut flagged = Vec::new();
    let mut rows = Vec::with_capacity(primes.len());
    for &p in &primes {
        match local_degrees(spec, p) {
            Ok(ls) => {
                let in_al = ls.all_even();
                if in_al {
                    members.push(p);
                }
                let degrees = ls.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
                rows.push(ScanRow { prime: p, in_al, degrees, source: ls.source });
            }
            Err(e) => flagged.push((p, e.to_string())),
        }
    }
    AlScan { bound: x, members, flagged, rows, prime_count: primes.len() }
}

fn scan_cache_path(dir: &Path, spec: &FieldSpec, x: u64) -> PathBuf {
    dir.join(format!("scan-{}-{x}.csv", &spec.content_hash()[..16]))
}

/// [`scan_al`] through a CSV cache in `dir`, keyed by the fixture hash and the bound.
pub fn scan_al_cached(spec: &FieldSpec, x: u64, dir: &Path) -> Result<AlScan> {
    let path = scan_cache_path(dir, spec, x);
    if path.exists() {
        let mut rdr = csv::Reader::from_path(&path).map_err(|e| StabError::Io(e.to_string()))?;
        let rows: Vec<ScanRow> = rdr
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| StabError::Parse(e.to_string()))?;
        let prime_count = primes_up_to(x).len();
        if rows.len() == prime_count {
            let members = rows.iter().filter(|r| r.in_al).map(|r| r.prime).collect();
            return Ok(AlScan { bound: x, members, flagged: Vec::new(), rows, prime_count });
        }
    }
    let scan = scan_al(spec, x);
    if scan.flagged.is_empty() {
        std::fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(&path).map_err(|e| StabError::Io(e.to_string()))?;
        for r in &scan.rows {
            w.serialize(r).map_err(|e| StabError::Io(e.to_string()))?;
        }
        w.flush()?;
    }
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaHat {
    pub bound: u64,
    /// Sampled primes whose Frobenius cycle type has an odd part.
    pub odd: usize,
    pub sampled: usize,
    /// Primes dividing the discriminant or with non-squarefree reduction.
    pub excluded: usize,
    /// A sampled prime whose cycle type is all even, if any.
    pub even_witness: Option<u64>,
}

impl DeltaHat {
    pub fn value(&self) -> f64 {
        self.odd as f64 / self.sampled.max(1) as f64
    }

    pub fn is_one(&self) -> bool {
        self.sampled > 0 && self.odd == self.sampled
    }
}

pub fn delta_hat(spec: &FieldSpec, x: u64) -> DeltaHat {
    let mut odd = 0;
    let mut sampled = 0;
    let mut excluded = 0;
    let mut even_witness = None;
    for p in primes_up_to(x) {
        if (&spec.disc % BigInt::from(p)).is_zero() {
            excluded += 1;
            continue;
        }
        match degree_multiset_mod_p(&spec.poly, p) {
            Some(d) => {
                sampled += 1;
                if d.iter().any(|x| x % 2 == 1) {
                    odd += 1;
                } else if even_witness.is_none() {
                    even_witness = Some(p);
                }
            }
            None => excluded += 1,
        }
    }
    DeltaHat { bound: x, odd, sampled, excluded, even_witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrichotomyClass {
    REquals1,
    FiniteGreaterThan1,
    PerfectlyUnstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Confidence {
    Exact,
    Empirical,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeltaValue {
    Exact(BigRational),
    Empirical(DeltaHat),
}

impl DeltaValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            DeltaValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            DeltaValue::Empirical(d) => d.value(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            DeltaValue::Exact(r) => r.is_one(),
            DeltaValue::Empirical(d) => d.is_one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrichotomyVerdict {
    pub class: TrichotomyClass,
    pub delta: DeltaValue,
    /// The exact exceptional set when delta is 1.
    pub al_witness: Option<Vec<u64>>,
    pub ramified: Vec<u64>,
    pub splittings: Vec<LocalSplitting>,
    pub confidence: Confidence,
}

/// Exact delta from the Galois generators when present, else the empirical estimate up to `scan_bound`.
pub fn field_delta(spec: &FieldSpec, scan_bound: u64) -> DeltaValue {
    match spec.galois_group() {
        Some(g) => DeltaValue::Exact(delta_of_group(&g)),
        None => DeltaValue::Empirical(delta_hat(spec, scan_bound)),
    }
}

pub fn classify_trichotomy(spec: &FieldSpec, scan_bound: u64) -> Result<TrichotomyVerdict> {
    let delta = field_delta(spec, scan_bound);
    let confidence = match delta {
        DeltaValue::Exact(_) => Confidence::Exact,
        DeltaValue::Empirical(_) => Confidence::Empirical,
    };
    let ramified = disc_primes(spec);
    if !delta.is_one() {
        return Ok(TrichotomyVerdict {
            class: TrichotomyClass::PerfectlyUnstable,
            delta,
            al_witness: None,
            ramified,
            splittings: Vec::new(),
            confidence,
        });
    }
    let mut al = Vec::new();
    let mut splittings = Vec::new();
    for &p in &ramified {
        let ls = local_degrees(spec, p)?;
        if ls.all_even() {
            al.push(p);
        }
        splittings.push(ls);
    }
    let class = if al.len() <= 1 { TrichotomyClass::REquals1 } else { TrichotomyClass::FiniteGreaterThan1 };
    Ok(TrichotomyVerdict { class, delta, al_witness: Some(al), ramified, splittings, confidence })
}
