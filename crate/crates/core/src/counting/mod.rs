//! Exact and sampled counts of soluble and of Diophantine-stable conics in sign quadrants.

mod engine;
mod primeset;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use primeset::{PrimeSet, PrimeSetSpec, Quadrant};

use crate::arith::factorize_u64;
use crate::error::{domain, resource, Result};
use crate::hilbert::hilbert_p;
use crate::numfield::{real_signature, FieldSpec};

/// Default largest bound for exact enumeration.
pub const DEFAULT_EXACT_CEILING: u64 = 1 << 16;
/// Identifier of the Monte-Carlo generator recorded in reports.
pub const MC_RNG: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub bound: u64,
    pub quadrant: String,
    pub primeset: String,
    pub mode: CountMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    pub millis: u128,
}

impl CountReport {
    /// Exact count, or the Monte-Carlo estimate.
    pub fn value(&self) -> f64 {
        self.count.map(|c| c as f64).or(self.estimate).unwrap_or(f64::NAN)
    }
}

/// Exact counts for every bound of a ladder from one enumeration up to the largest bound.
pub fn count_exact_ladder(
    ladder: &[u64],
    q: Quadrant,
    set: &PrimeSet,
    workers: usize,
    ceiling: u64,
) -> Result<Vec<CountReport>> {
    let Some(&bmax) = ladder.iter().max() else {
        return Ok(Vec::new());
    };
    if ladder.contains(&0) {
        return domain("bounds must be positive");
    }
    if bmax > ceiling {
        return resource(format!("bound {bmax} exceeds the exact-enumeration ceiling {ceiling}"));
    }
    if set.limit() < bmax.max(2) {
        return domain(format!("prime set resolved only up to {} < {bmax}", set.limit()));
    }
    let start = Instant::now();
    let tables = engine::Tables::new(bmax, set, ceiling.max(2))?;
    let hist = engine::histogram(&tables, q, workers);
    let millis = start.elapsed().as_millis();
    let mut prefix = vec![0u64; hist.len()];
    let mut acc = 0;
    for (i, h) in hist.iter().enumerate() {
        acc += h;
        prefix[i] = acc;
    }
    Ok(ladder
        .iter()
        .map(|&b| CountReport {
            bound: b,
            quadrant: q.to_string(),
            primeset: set.spec.to_string(),
            mode: CountMode::Exact,
            count: Some(prefix[b as usize]),
            estimate: None,
            stderr: None,
            samples: None,
            seed: None,
            rng: None,
            millis,
        })
        .collect())
}

/// `N(B, P)` restricted to one quadrant.
pub fn count_exact(b: u64, q: Quadrant, set: &PrimeSet, workers: usize) -> Result<CountReport> {
    Ok(count_exact_ladder(&[b], q, set, workers, DEFAULT_EXACT_CEILING)?.remove(0))
}

/// Convenience: resolves the prime set and counts.
pub fn count_exact_spec(b: u64, q: Quadrant, spec: PrimeSetSpec, workers: usize) -> Result<CountReport> {
    let set = PrimeSet::resolve(spec, b.max(2))?;
    count_exact(b, q, &set, workers)
}

/// Reference check of a single pair: trivial symbol at every `p` in the set dividing `2st`.
pub fn pair_soluble_in(s: i64, t: i64, set: &PrimeSet) -> Result<bool> {
    let mut ps: Vec<u64> = factorize_u64(s.unsigned_abs(), None).into_iter().map(|x| x.0).collect();
    ps.extend(factorize_u64(t.unsigned_abs(), None).into_iter().map(|x| x.0));
    ps.push(2);
    ps.sort_unstable();
    ps.dedup();
    for p in ps {
        if set.contains(p)? && hilbert_p(s, t, p)? == -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Uniform pair sampling; the estimate is `B^2` times the hit rate.
pub fn count_montecarlo(b: u64, q: Quadrant, set: &PrimeSet, samples: u64, seed: u64) -> Result<CountReport> {
    if samples < 1000 {
        return domain(format!("Monte Carlo needs at least 1000 samples, got {samples}"));
    }
    if b == 0 || b > i64::MAX as u64 {
        return domain(format!("bound {b} out of range"));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let s = q.a as i64 * rng.gen_range(1..=b) as i64;
        let t = q.b as i64 * rng.gen_range(1..=b) as i64;
        if pair_soluble_in(s, t, set)? {
            hits += 1;
        }
    }
    let area = (b as f64) * (b as f64);
    let phat = hits as f64 / samples as f64;
    Ok(CountReport {
        bound: b,
        quadrant: q.to_string(),
        primeset: set.spec.to_string(),
        mode: CountMode::MonteCarlo,
        count: None,
        estimate: Some(area * phat),
        stderr: Some(area * (phat * (1.0 - phat) / samples as f64).sqrt()),
        samples: Some(samples),
        seed: Some(seed),
        rng: Some(MC_RNG.to_string()),
        millis: start.elapsed().as_millis(),
    })
}

/// Stable and unstable pair counts over a field for one quadrant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableReport {
    pub bound: u64,
    pub quadrant: String,
    pub field: String,
    /// Pairs whose conic has an L-point.
    pub unstable: u64,
    /// Pairs whose conic has no L-point.
    pub stable: u64,
    pub millis: u128,
}

/// The conic has an L-point iff the real condition holds (when L has a real place) and the
/// symbol is trivial at every `p | 2st` outside the exceptional set.
pub fn count_stable_ladder(
    ladder: &[u64],
    q: Quadrant,
    spec: &FieldSpec,
    workers: usize,
    ceiling: u64,
) -> Result<Vec<StableReport>> {
    let bmax = ladder.iter().copied().max().unwrap_or(1);
    let (r1, _) = real_signature(&spec.poly);
    let name = spec.name.clone().unwrap_or_else(|| spec.poly_string());
    let start = Instant::now();
    let unstable: Vec<u64> = if r1 > 0 && q.real_symbol() < 0 {
        vec![0; ladder.len()]
    } else {
        let set = PrimeSet::resolve(PrimeSetSpec::ComplementOfAL(Box::new(spec.clone())), bmax.max(2))?;
        count_exact_ladder(ladder, q, &set, workers, ceiling)?
            .into_iter()
            .map(|r| r.count.unwrap_or(0))
            .collect()
    };
    let millis = start.elapsed().as_millis();
    Ok(ladder
        .iter()
        .zip(unstable)
        .map(|(&b, u)| StableReport {
            bound: b,
            quadrant: q.to_string(),
            field: name.clone(),
            unstable: u,
            stable: b * b - u,
            millis,
        })
        .collect())
}

pub fn count_stable_exact(b: u64, q: Quadrant, spec: &FieldSpec, workers: usize) -> Result<StableReport> {
    Ok(count_stable_ladder(&[b], q, spec, workers, DEFAULT_EXACT_CEILING)?.remove(0))
}

/// Pair-level stability: `true` when the conic has no point over the field.
pub fn pair_is_stable(s: i64, t: i64, spec: &FieldSpec) -> Result<bool> {
    let (r1, _) = real_signature(&spec.poly);
    if r1 > 0 && s < 0 && t < 0 {
        return Ok(true);
    }
    let limit = s.unsigned_abs().max(t.unsigned_abs()).max(2);
    let set = PrimeSet::resolve(PrimeSetSpec::ComplementOfAL(Box::new(spec.clone())), limit.min(1 << 20))?;
    Ok(!pair_soluble_in(s, t, &set)?)
}
