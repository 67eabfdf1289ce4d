//! Leading constants of the pair counts and their predictions.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::primes_up_to;
use crate::counting::{PrimeSetSpec, Quadrant};
use crate::densities::{mu_exact, mu_f64};
use crate::error::{domain, Result, StabError};
use crate::numfield::{classify_trichotomy, field_delta, real_signature, DeltaValue, FieldSpec, TrichotomyClass};

/// Primes used when a field's delta has to be estimated from Frobenius statistics.
pub const DEFAULT_DELTA_SCAN: u64 = 100_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma for real arguments (reflection below 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        let t = x + LANCZOS_G + 0.5;
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// `Gamma(1 - w/2)^(-2)`.
pub fn gamma_reciprocal_sq(varpi: f64) -> f64 {
    let g = gamma(1.0 - varpi / 2.0);
    1.0 / (g * g)
}

/// Density of a prime set among all primes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Varpi {
    pub value: f64,
    /// Present when the density is known exactly.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_ratio")]
    pub exact: Option<BigRational>,
    /// Primes sampled when the value is empirical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<u64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl Varpi {
    fn exact(r: BigRational) -> Self {
        Varpi { value: r.to_f64().unwrap_or(f64::NAN), exact: Some(r), sampled: None }
    }

    pub fn is_one(&self) -> bool {
        match &self.exact {
            Some(r) => r.is_one(),
            None => self.value == 1.0,
        }
    }
}

fn euler_phi(mut q: u64) -> u64 {
    let mut r = q;
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            while q.is_multiple_of(p) {
                q /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if q > 1 {
        r -= r / q;
    }
    r
}

pub fn varpi_of(spec: &PrimeSetSpec) -> Result<Varpi> {
    match spec {
        PrimeSetSpec::AllPrimes | PrimeSetSpec::ComplementOf(_) => Ok(Varpi::exact(BigRational::one())),
        PrimeSetSpec::Progression { q, .. } => {
            Ok(Varpi::exact(BigRational::new(BigInt::one(), BigInt::from(euler_phi(*q)))))
        }
        PrimeSetSpec::ComplementOfAL(f) => Ok(match field_delta(f, DEFAULT_DELTA_SCAN) {
            DeltaValue::Exact(r) => Varpi::exact(r),
            DeltaValue::Empirical(d) => Varpi { value: d.value(), exact: None, sampled: Some(d.sampled as u64) },
        }),
        PrimeSetSpec::ExplicitList(_) => domain("a finite prime list has density zero"),
    }
}

/// Primes outside the set, when the set has density one.
fn finite_complement(spec: &PrimeSetSpec) -> Result<Vec<u64>> {
    match spec {
        PrimeSetSpec::AllPrimes => Ok(Vec::new()),
        PrimeSetSpec::ComplementOf(v) => Ok(v.clone()),
        PrimeSetSpec::Progression { a, q } => Ok(primes_up_to(*q).into_iter().filter(|p| p % q != *a).collect()),
        PrimeSetSpec::ComplementOfAL(f) => {
            let v = classify_trichotomy(f, DEFAULT_DELTA_SCAN)?;
            v.al_witness.ok_or_else(|| StabError::Domain("exceptional set is infinite".into()))
        }
        PrimeSetSpec::ExplicitList(_) => domain("a finite prime list has density zero"),
    }
}

/// `1 + (a,b)_R prod_{p not in P} (2 mu_p - 1)`, exact.
pub fn real_correction(q: Quadrant, outside: &[u64]) -> Result<BigRational> {
    let mut prod = BigRational::one();
    for &p in outside {
        let mu = mu_exact(p)?.exact;
        prod *= &mu * BigInt::from(2) - BigRational::one();
    }
    if q.real_symbol() < 0 {
        prod = -prod;
    }
    Ok(BigRational::one() + prod)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub tail_uncertainty: f64,
    pub z_max: u64,
    pub extrapolation_used: bool,
    pub varpi: Varpi,
}

/// Neumaier-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Least-squares line `y = alpha + beta x`, returning `alpha`.
fn intercept(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    my - sxy / sxx * mx
}

/// Truncated Euler product for `c(P)` with the gamma factor and the real correction.
pub fn leading_constant(spec: &PrimeSetSpec, q: Quadrant, z_max: u64, extrapolate: bool) -> Result<ConstantEstimate> {
    if z_max < 1000 {
        return domain(format!("z_max must be at least 1000, got {z_max}"));
    }
    let varpi = varpi_of(spec)?;
    let correction = if varpi.is_one() {
        real_correction(q, &finite_complement(spec)?)?.to_f64().unwrap_or(f64::NAN)
    } else {
        1.0
    };
    let w = varpi.value;
    let front = gamma_reciprocal_sq(w) * correction;
    if front == 0.0 {
        return Ok(ConstantEstimate { value: 0.0, tail_uncertainty: 0.0, z_max, extrapolation_used: false, varpi });
    }
    // checkpoints z_max / 2^k for the tail diagnostics
    let mut checkpoints: Vec<u64> = (0..10).map(|k| z_max >> k).filter(|&z| z >= 500).collect();
    checkpoints.reverse();
    let mut logs = Vec::with_capacity(checkpoints.len());
    let mut acc = KahanSum::default();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ci = 0;
    for p in primes_up_to(z_max) {
        while ci < checkpoints.len() && p > checkpoints[ci] {
            logs.push(acc.value());
            ci += 1;
        }
        let damp = -w * (-1.0 / p as f64).ln_1p();
        if spec.contains(p)? {
            acc.add(mu_f64(p).ln() + damp);
        } else {
            acc.add(damp);
        }
        if 2 * p > z_max {
            let v = acc.value();
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    while logs.len() < checkpoints.len() {
        logs.push(acc.value());
    }
    let mut log_prod = acc.value();
    let mut tail = front.abs() * log_prod.exp() * ((hi - lo).exp() - 1.0);
    let mut used = false;
    if extrapolate && checkpoints.len() >= 3 {
        let xs: Vec<f64> = checkpoints.iter().map(|&z| 1.0 / (z as f64).ln()).collect();
        let lim = intercept(&xs, &logs);
        tail = tail.max(front.abs() * (lim.exp() - log_prod.exp()).abs());
        log_prod = lim;
        used = true;
    }
    Ok(ConstantEstimate {
        value: front * log_prod.exp(),
        tail_uncertainty: tail,
        z_max,
        extrapolation_used: used,
        varpi,
    })
}

/// `c_L`: the constant of the pairs whose conic has a point over the field.
pub fn stability_constant_cl(spec: &FieldSpec, q: Quadrant, z_max: u64, extrapolate: bool) -> Result<ConstantEstimate> {
    let (r1, _) = real_signature(&spec.poly);
    if r1 > 0 && q.real_symbol() < 0 {
        return Err(StabError::NotApplicable(format!(
            "quadrant {q} has no points over a field with a real embedding"
        )));
    }
    leading_constant(&PrimeSetSpec::ComplementOfAL(Box::new(spec.clone())), q, z_max, extrapolate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RatioValue {
    Finite(f64),
    Infinity,
}

/// Ratio of conics with a point over the field to conics with a rational point.
pub fn ratio_rl(spec: &FieldSpec, z_max: u64) -> Result<RatioValue> {
    let verdict = classify_trichotomy(spec, DEFAULT_DELTA_SCAN)?;
    if verdict.class == TrichotomyClass::PerfectlyUnstable {
        return Ok(RatioValue::Infinity);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for q in Quadrant::ALL {
        den += leading_constant(&PrimeSetSpec::AllPrimes, q, z_max, false)?.value;
        match stability_constant_cl(spec, q, z_max, false) {
            Ok(c) => num += c.value,
            Err(StabError::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(RatioValue::Finite(num / den))
}

/// `c B^2 / (log B)^w`.
pub fn predict_count(b: u64, c: &ConstantEstimate) -> Result<f64> {
    if b < 3 {
        return domain(format!("prediction needs B >= 3, got {b}"));
    }
    let bf = b as f64;
    Ok(c.value * bf * bf / bf.ln().powf(c.varpi.value))
}

/// Predicted number of stable pairs: `B^2 - c_L B^2 / (log B)^delta`.
pub fn predict_stable(b: u64, c_l: &ConstantEstimate) -> Result<f64> {
    let bf = b as f64;
    Ok(bf * bf - predict_count(b, c_l)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub weak: bool,
    pub strict: bool,
    /// `1 + prod(2x - 1) - 2 prod(x)`.
    pub margin: BigRational,
}

/// `2 prod x_i <= 1 + prod (2 x_i - 1)` for `x_i` in `[0, 1]`, exactly.
pub fn mu_product_inequality_check(xs: &[BigRational]) -> Result<InequalityCheck> {
    if xs.is_empty() {
        return domain("need at least one value");
    }
    if xs.iter().any(|x| x.is_negative() || *x > BigRational::one()) {
        return domain("values must lie in [0, 1]");
    }
    let two = BigInt::from(2);
    let prod: BigRational = xs.iter().fold(BigRational::one(), |a, x| a * x);
    let prod2: BigRational = xs.iter().fold(BigRational::one(), |a, x| a * (x * &two - BigRational::one()));
    let margin = BigRational::one() + prod2 - prod * &two;
    Ok(InequalityCheck { weak: !margin.is_negative(), strict: margin.is_positive(), margin })
}

/// Floating-point variant with an absolute tolerance on the weak side.
pub fn mu_product_inequality_f64(xs: &[f64], tol: f64) -> (bool, bool) {
    let prod: f64 = xs.iter().product();
    let prod2: f64 = xs.iter().map(|x| 2.0 * x - 1.0).product();
    let margin = 1.0 + prod2 - 2.0 * prod;
    (margin >= -tol, margin > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::fixtures;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1)) with Stirling's series at x + n.
    fn gamma_stirling(x: f64) -> f64 {
        let n = 20.0;
        let y = x + n;
        let lg = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * y) - 1.0 / (360.0 * y.powi(3))
            + 1.0 / (1260.0 * y.powi(5))
            - 1.0 / (1680.0 * y.powi(7));
        let mut g = lg.exp();
        for k in 0..20 {
            g /= x + k as f64;
        }
        g
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_reciprocal_sq(1.0) - 1.0 / PI).abs() < 1e-13);
        assert!((gamma(1.0) - 1.0).abs() < 1e-13);
        assert!((gamma(0.75) - 1.225_416_702_465_177_6).abs() < 1e-12);
        assert!((gamma_reciprocal_sq(0.5) - 1.225_416_702_4f64.powi(-2)).abs() < 1e-9);
        assert!((gamma_reciprocal_sq(1e-12) - 1.0).abs() < 1e-9);
        for x in [0.5, 0.6, 0.75, 0.9, 1.3, 2.5] {
            let (a, b) = (gamma(x), gamma_stirling(x));
            assert!((a - b).abs() / b < 1e-12, "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn reciprocity_zero_constant() {
        let c = leading_constant(&PrimeSetSpec::AllPrimes, Quadrant::MM, 1000, false).unwrap();
        assert_eq!(c.value, 0.0);
    }

    #[test]
    fn prime_removal() {
        let all = leading_constant(&PrimeSetSpec::AllPrimes, Quadrant::PP, 100_000, false).unwrap();
        let no5 = leading_constant(&PrimeSetSpec::complement_of(vec![5]).unwrap(), Quadrant::PP, 100_000, false).unwrap();
        assert!((all.value - no5.value).abs() < 1e-12);
        let no2 = leading_constant(&PrimeSetSpec::complement_of(vec![2]).unwrap(), Quadrant::PP, 100_000, false).unwrap();
        assert!((all.value - no2.value).abs() < 1e-12);
        let two = leading_constant(&PrimeSetSpec::complement_of(vec![3, 7]).unwrap(), Quadrant::PP, 100_000, false).unwrap();
        assert!(two.value > all.value + 1e-6);
    }

    #[test]
    fn odd_degree_field_matches_all_primes() {
        let c = fixtures::cubic2();
        for q in [Quadrant::PP, Quadrant::PM] {
            let cl = stability_constant_cl(&c, q, 20_000, false).unwrap();
            let all = leading_constant(&PrimeSetSpec::AllPrimes, q, 20_000, false).unwrap();
            assert!((cl.value - all.value).abs() < 1e-12, "{cl:?} {all:?}");
        }
        assert!(matches!(stability_constant_cl(&c, Quadrant::MM, 20_000, false), Err(StabError::NotApplicable(_))));
        match ratio_rl(&c, 20_000).unwrap() {
            RatioValue::Finite(r) => assert!((r - 1.0).abs() < 1e-9),
            RatioValue::Infinity => panic!(),
        }
    }

    #[test]
    fn gaussian_constant() {
        let g = fixtures::gaussian();
        assert_eq!(ratio_rl(&g, 10_000).unwrap(), RatioValue::Infinity);
        let c = stability_constant_cl(&g, Quadrant::MM, 100_000, false).unwrap();
        assert_eq!(c.varpi.exact, Some(rat(1, 2)));
        let pp = stability_constant_cl(&g, Quadrant::PP, 100_000, false).unwrap();
        assert_eq!(c.value, pp.value);
        // direct product with the explicit split rule p = 1 mod 4
        let mut lp = 0.0;
        for p in primes_up_to(100_000) {
            let damp = -0.5 * (1.0 - 1.0 / p as f64).ln();
            lp += if p % 4 == 1 { mu_f64(p).ln() + damp } else { damp };
        }
        let direct = gamma_reciprocal_sq(0.5) * lp.exp();
        assert!((direct - pp.value).abs() < 1e-10);
        let ex = stability_constant_cl(&g, Quadrant::PP, 100_000, true).unwrap();
        assert!(ex.extrapolation_used && ex.tail_uncertainty >= 0.0);
        assert!((ex.value - pp.value).abs() < 0.01);
    }

    #[test]
    fn prediction_algebra() {
        let c = leading_constant(&PrimeSetSpec::AllPrimes, Quadrant::PP, 1000, false).unwrap();
        let b = 1000u64;
        let r = predict_count(2 * b, &c).unwrap() / predict_count(b, &c).unwrap();
        let want = 4.0 * ((b as f64).ln() / (2.0 * b as f64).ln());
        assert!((r - want).abs() < 1e-12);
        let z = leading_constant(&PrimeSetSpec::AllPrimes, Quadrant::MM, 1000, false).unwrap();
        assert_eq!(predict_count(5000, &z).unwrap(), 0.0);
        assert!(predict_count(2, &c).is_err());
    }

    #[test]
    fn inequality_edges() {
        let half = mu_product_inequality_check(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert!(half.weak && half.strict);
        for x in [rat(0, 1), rat(3, 7), rat(1, 1)] {
            let one = mu_product_inequality_check(&[x]).unwrap();
            assert!(one.weak && !one.strict && one.margin.is_zero());
        }
        let edge = mu_product_inequality_check(&[rat(1, 1), rat(0, 1)]).unwrap();
        assert!(edge.weak && !edge.strict);
        assert!(mu_product_inequality_check(&[rat(3, 2)]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn weak_inequality(xs in prop::collection::vec(0.0f64..=1.0, 1..=8)) {
            prop_assert!(mu_product_inequality_f64(&xs, 1e-12).0);
        }

        #[test]
        fn strict_when_all_below_one(xs in prop::collection::vec(0.0f64..0.999_999, 2..=8)) {
            let exact: Vec<BigRational> = xs.iter().map(|&x| BigRational::from_float(x).unwrap()).collect();
            prop_assert!(mu_product_inequality_check(&exact).unwrap().strict);
        }
    }
}
