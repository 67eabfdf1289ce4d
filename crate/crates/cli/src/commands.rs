use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use stab_core::asymptotics::{
    leading_constant, predict_count, predict_stable, ConstantEstimate,
};
use stab_core::counting::{
    count_exact_ladder, count_montecarlo, count_stable_exact, pair_is_stable, CountReport, DEFAULT_EXACT_CEILING,
};
use stab_core::densities::{certify_mu, mu_exact, mu_oracle};
use stab_core::hilbert::{find_rational_point, hilbert_at, is_conic_soluble_q, relevant_places};
use stab_core::numfield::{
    classify_trichotomy, delta_hat, load_fixture, real_signature, scan_al, scan_al_cached, DeltaValue,
};
use stab_core::permgroup::{delta_of_group, generate_closure, odd_order_fraction, Permutation, DEFAULT_GROUP_CAP};
use stab_core::sievelab::{
    gls_exact_count, gls_inclusion_exclusion, gls_ratio_report, large_sieve_bound, omega_oracle, OmegaSpec,
};
use stab_core::{PairST, Place, PrimeSet, PrimeSetSpec, Quadrant, Result, StabError};

use crate::args::{ConstantArgs, CountArgs, Family, FamilyArgs, FieldCommand, Mode, SieveCommand};

/// A command result: the machine-readable body and the lines shown in human mode.
pub struct Output {
    pub result: Value,
    pub human: Vec<String>,
}

pub struct Ctx {
    pub workers: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
}

fn rat(r: &BigRational) -> String {
    r.to_string()
}

fn parse_place(s: &str) -> Result<Place> {
    match s {
        "inf" | "infinity" | "real" => Ok(Place::Real),
        _ => s
            .parse::<u64>()
            .map(Place::Finite)
            .map_err(|_| StabError::Parse(format!("place must be a prime or inf, got {s:?}"))),
    }
}

pub fn symbol(a: i64, b: i64, place: &str) -> Result<Output> {
    let place = parse_place(place)?;
    let v = hilbert_at(a, b, place)?;
    Ok(Output {
        result: json!({"a": a, "b": b, "place": place.to_string(), "symbol": v, "provenance": "exact"}),
        human: vec![format!("local Hilbert symbol ({a}, {b}) at {place}: {v}")],
    })
}

pub fn solvable(s: i64, t: i64, field: Option<&Path>) -> Result<Output> {
    let pair = PairST::new(s, t)?;
    let soluble = is_conic_soluble_q(pair)?;
    let mut obstructions = Vec::new();
    for place in relevant_places(s, t)? {
        if hilbert_at(s, t, place)? == -1 {
            obstructions.push(place.to_string());
        }
    }
    let mut result = json!({
        "s": s, "t": t, "soluble_over_q": soluble, "obstructions": obstructions, "provenance": "exact",
    });
    let mut human = vec![
        format!("rational point on {s} x^2 + {t} y^2 = z^2 (local-global principle): {soluble}"),
        format!("obstructing places: {}", if obstructions.is_empty() { "none".into() } else { obstructions.join(" ") }),
    ];
    if let Some(path) = field {
        let spec = load_fixture(path)?;
        let over = !pair_is_stable(s, t, &spec)?;
        let name = spec.name.clone().unwrap_or_else(|| spec.poly_string());
        result["field"] = json!(name);
        result["soluble_over_field"] = json!(over);
        result["stable"] = json!(!over || soluble);
        human.push(format!("point over {name} (exceptional-set rule): {over}"));
        human.push(format!("Diophantine stable over {name}: {}", !over || soluble));
    }
    Ok(Output { result, human })
}

pub fn point(s: i64, t: i64) -> Result<Output> {
    let pt = find_rational_point(PairST::new(s, t)?)?;
    Ok(match pt {
        Some((x, y, z)) => Output {
            result: json!({"s": s, "t": t, "point": [x, y, z], "provenance": "exact"}),
            human: vec![format!("point (bounded search): ({x} : {y} : {z})")],
        },
        None => Output {
            result: json!({"s": s, "t": t, "point": null, "certified_none": true, "provenance": "exact"}),
            human: vec!["point (bounded search): none (certified)".into()],
        },
    })
}

pub fn density(p: u64, depth: Option<u32>) -> Result<Output> {
    let mu = mu_exact(p)?.exact;
    let (m, iv) = match depth {
        Some(m) => (m, mu_oracle(p, m)?),
        None => certify_mu(p, &BigRational::new(BigInt::from(1), BigInt::from(1000)))?,
    };
    let contained = iv.contains(&mu);
    let width = iv.width();
    Ok(Output {
        result: json!({
            "p": p,
            "mu": {"value": rat(&mu), "approx": stab_core::densities::mu_f64(p), "provenance": "exact"},
            "oracle": {
                "depth": m, "lo": rat(&iv.lo), "hi": rat(&iv.hi), "width": rat(&width),
                "contains_mu": contained, "provenance": "oracle-interval",
            },
        }),
        human: vec![
            format!("local density mu_{p} (closed form): {mu}"),
            format!(
                "oracle interval mod {p}^{m}: [{:.6}, {:.6}] contains mu_{p}: {contained}",
                num_traits::ToPrimitive::to_f64(&iv.lo).unwrap_or(f64::NAN),
                num_traits::ToPrimitive::to_f64(&iv.hi).unwrap_or(f64::NAN)
            ),
        ],
    })
}

/// Reads one permutation per line; blank lines and `#` comments are skipped.
fn read_generators(path: &Path, degree: Option<usize>) -> Result<(Vec<Permutation>, usize)> {
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
    let n = match degree {
        Some(n) => n,
        None => lines
            .iter()
            .flat_map(|l| l.split(|c: char| !c.is_ascii_digit()))
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(1),
    };
    let gens = lines.iter().map(|l| Permutation::parse_cycles(l, n)).collect::<Result<Vec<_>>>()?;
    Ok((gens, n))
}

pub fn group_delta(path: &Path, degree: Option<usize>) -> Result<Output> {
    let (gens, n) = read_generators(path, degree)?;
    let g = generate_closure(&gens, n, DEFAULT_GROUP_CAP)?;
    let delta = delta_of_group(&g);
    let odd = odd_order_fraction(&g);
    Ok(Output {
        result: json!({
            "degree": n, "order": g.order(), "transitive": g.is_transitive(),
            "delta": rat(&delta), "odd_order_fraction": rat(&odd), "provenance": "exact",
        }),
        human: vec![
            format!("group of order {} on {n} points (transitive: {})", g.order(), g.is_transitive()),
            format!("delta, share of elements with an odd orbit: {delta}"),
            format!("share of elements of odd order: {odd}"),
        ],
    })
}

pub fn field(cmd: &FieldCommand, ctx: &Ctx) -> Result<Output> {
    let FieldCommand::Analyze { fixture, scan } = cmd;
    let spec = load_fixture(fixture)?;
    let name = spec.name.clone().unwrap_or_else(|| spec.poly_string());
    let (r1, r2) = real_signature(&spec.poly);
    let verdict = classify_trichotomy(&spec, *scan)?;
    let hat = delta_hat(&spec, *scan);
    let al = match &ctx.cache_dir {
        Some(dir) => scan_al_cached(&spec, *scan, dir)?,
        None => scan_al(&spec, *scan),
    };
    let (delta, provenance) = match &verdict.delta {
        DeltaValue::Exact(r) => (rat(r), "exact"),
        DeltaValue::Empirical(d) => (format!("{:.6}", d.value()), "empirical"),
    };
    let splittings: Vec<Value> = verdict
        .splittings
        .iter()
        .map(|s| json!({"p": s.p, "degrees": s.degrees, "source": s.source.to_string(), "all_even": s.all_even()}))
        .collect();
    let head: Vec<u64> = al.members.iter().copied().take(50).collect();
    let flagged: Vec<Value> = al.flagged.iter().map(|(p, why)| json!({"p": p, "reason": why})).collect();
    let class = format!("{:?}", verdict.class);
    let result = json!({
        "field": name,
        "poly": spec.poly_string(),
        "fixture_hash": spec.content_hash(),
        "discriminant": spec.disc.to_string(),
        "signature": [r1, r2],
        "ramified": verdict.ramified,
        "delta": {"value": delta, "provenance": provenance},
        "delta_hat": {
            "value": hat.value(), "odd": hat.odd, "sampled": hat.sampled, "bound": hat.bound,
            "even_witness": hat.even_witness, "provenance": "empirical",
        },
        "al_scan": {
            "bound": al.bound, "members": al.members.len(), "primes": al.prime_count,
            "density": al.density(), "first_members": head, "needs_override": flagged, "provenance": "exact",
        },
        "local_splittings": splittings,
        "verdict": {
            "class": class,
            "confidence": format!("{:?}", verdict.confidence),
            "al_witness": verdict.al_witness,
        },
    });
    let mut human = vec![
        format!("field {name}: {}", spec.poly_string()),
        format!("discriminant: {}  signature (r1, r2): ({r1}, {r2})", spec.disc),
        format!("delta, odd-orbit density ({provenance}): {delta}"),
        format!("empirical delta over {} primes up to {scan}: {:.4}", hat.sampled, hat.value()),
        format!(
            "exceptional primes up to {scan}: {} of {} ({:.4})",
            al.members.len(),
            al.prime_count,
            al.density()
        ),
    ];
    for s in &verdict.splittings {
        human.push(format!("  p = {}: local degrees {:?} via {}", s.p, s.degrees, s.source));
    }
    if let Some(w) = &verdict.al_witness {
        human.push(format!("exceptional set (exact): {w:?}"));
    }
    human.push(format!("stability class (trichotomy): {class} ({:?})", verdict.confidence));
    Ok(Output { result, human })
}

fn count_json(r: &CountReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["provenance"] = json!(if r.count.is_some() { "exact" } else { "empirical" });
    v
}

fn resolve(args: &CountArgs, limit: u64) -> Result<(Quadrant, PrimeSet)> {
    let q = Quadrant::parse(&args.signs)?;
    let spec = PrimeSetSpec::parse(&args.primes)?;
    Ok((q, PrimeSet::resolve(spec, limit.max(2))?))
}

fn run_count(args: &CountArgs, ladder: &[u64], ctx: &Ctx) -> Result<Vec<CountReport>> {
    let bmax = ladder.iter().copied().max().unwrap_or(args.bound);
    match args.mode {
        Mode::Exact => {
            let (q, set) = resolve(args, bmax)?;
            count_exact_ladder(ladder, q, &set, ctx.workers, DEFAULT_EXACT_CEILING)
        }
        Mode::Mc => {
            let (q, set) = resolve(args, 2)?;
            ladder.iter().map(|&b| count_montecarlo(b, q, &set, args.samples, ctx.seed)).collect()
        }
    }
}

pub fn count(args: &CountArgs, ctx: &Ctx) -> Result<Output> {
    let r = run_count(args, &[args.bound], ctx)?.remove(0);
    let line = match (r.count, r.estimate, r.stderr) {
        (Some(c), _, _) => format!("N(B = {}, {}, {}) exact: {c}", r.bound, r.quadrant, r.primeset),
        (_, Some(e), Some(s)) => format!(
            "N(B = {}, {}, {}) Monte Carlo ({} samples, seed {}): {e:.1} +- {s:.1}",
            r.bound,
            r.quadrant,
            r.primeset,
            args.samples,
            ctx.seed
        ),
        _ => String::new(),
    };
    Ok(Output { result: count_json(&r), human: vec![line] })
}

pub fn stable_count(bound: u64, signs: &str, fixture: &Path, ctx: &Ctx) -> Result<Output> {
    let q = Quadrant::parse(signs)?;
    let spec = load_fixture(fixture)?;
    let r = count_stable_exact(bound, q, &spec, ctx.workers)?;
    let mut v = serde_json::to_value(&r).expect("report serializes");
    v["provenance"] = json!("exact");
    Ok(Output {
        result: v,
        human: vec![
            format!("pairs with a point over {} (B = {bound}, {q}): {}", r.field, r.unstable),
            format!("Diophantine stable pairs: {} of {}", r.stable, bound * bound),
        ],
    })
}

fn constant(args: &CountArgs, c: &ConstantArgs) -> Result<(Quadrant, PrimeSetSpec, ConstantEstimate)> {
    let q = Quadrant::parse(&args.signs)?;
    let spec = PrimeSetSpec::parse(&args.primes)?;
    let est = leading_constant(&spec, q, c.zmax, c.extrapolate)?;
    Ok((q, spec, est))
}

fn constant_provenance(c: &ConstantEstimate) -> &'static str {
    if c.extrapolation_used {
        "extrapolated"
    } else {
        "empirical"
    }
}

pub fn predict(args: &CountArgs, c: &ConstantArgs) -> Result<Output> {
    let (q, spec, est) = constant(args, c)?;
    let pred = predict_count(args.bound, &est)?;
    let mut result = json!({
        "bound": args.bound, "quadrant": q.to_string(), "primeset": spec.to_string(),
        "constant": est, "predicted": pred, "provenance": constant_provenance(&est),
    });
    let mut human = vec![
        format!(
            "leading constant c (truncated Euler product, z <= {}): {:.10} +- {:.2e}",
            c.zmax, est.value, est.tail_uncertainty
        ),
        format!("density varpi: {}", est.varpi.value),
        format!("predicted N(B = {}) = c B^2 / (log B)^varpi: {pred:.1}", args.bound),
    ];
    if matches!(spec, PrimeSetSpec::ComplementOfAL(_)) {
        let st = predict_stable(args.bound, &est)?;
        result["predicted_stable"] = json!(st);
        human.push(format!("predicted Diophantine stable pairs: {st:.1}"));
    }
    Ok(Output { result, human })
}

pub fn compare(ladder: &[u64], args: &CountArgs, c: &ConstantArgs, ctx: &Ctx) -> Result<Output> {
    if ladder.is_empty() {
        return Err(StabError::Domain("the ladder needs at least one bound".into()));
    }
    let (_, _, est) = constant(args, c)?;
    let reports = run_count(args, ladder, ctx)?;
    let mut rows = Vec::new();
    let mut human = vec![format!(
        "{:>8} {:>14} {:>14} {:>8}  (c = {:.8}, varpi = {})",
        "B", "empirical", "predicted", "ratio", est.value, est.varpi.value
    )];
    for r in &reports {
        let emp = r.value();
        let pred = predict_count(r.bound, &est)?;
        let ratio = if pred == 0.0 { if emp == 0.0 { 1.0 } else { f64::INFINITY } } else { emp / pred };
        human.push(format!("{:>8} {:>14.1} {:>14.1} {:>8.4}", r.bound, emp, pred, ratio));
        rows.push(json!({
            "B": r.bound, "empirical": emp, "predicted": pred, "ratio": ratio, "constant": est.value,
            "varpi": est.varpi.value, "tail_uncertainty": est.tail_uncertainty,
        }));
    }
    Ok(Output {
        result: json!({
            "quadrant": args.signs, "primeset": args.primes, "mode": format!("{:?}", args.mode).to_lowercase(),
            "rows": rows, "provenance": constant_provenance(&est),
        }),
        human,
    })
}

fn family(f: &FamilyArgs) -> Result<OmegaSpec> {
    Ok(match f.family {
        Family::Full => OmegaSpec::FullLattice(f.n),
        Family::Solubility => OmegaSpec::SolubilityPairs(PrimeSetSpec::parse(&f.primes)?),
        Family::NotAllDivisible => OmegaSpec::not_all_divisible(f.n),
    })
}

pub fn sieve(cmd: &SieveCommand) -> Result<Output> {
    match cmd {
        SieveCommand::Omega { family: f, l, m } => {
            let spec = family(f)?;
            let w = omega_oracle(&spec, *l, *m)?;
            Ok(Output {
                result: json!({"family": spec.to_string(), "l": l, "m": m, "omega": rat(&w), "provenance": "exact"}),
                human: vec![format!("omega({l}) for {spec} at level {m}: {w}")],
            })
        }
        SieveCommand::Lsbound { family: f, bound, m } => {
            let spec = family(f)?;
            let v = large_sieve_bound(*bound, *m, &spec)?;
            Ok(Output {
                result: json!({"family": spec.to_string(), "bound": bound, "m": m, "large_sieve_bound": v, "provenance": "exact"}),
                human: vec![format!("large-sieve bound (2B)^n / L(B^(1/2m)) for {spec}, B = {bound}: {v:.1}")],
            })
        }
        SieveCommand::Gls { family: f, bound, z } => {
            let spec = family(f)?;
            let c = gls_exact_count(*bound, *z, &spec)?;
            let mut result = json!({"family": spec.to_string(), "bound": bound, "z": z, "count": c, "provenance": "exact"});
            let mut human = vec![format!("pairs in [1, {bound}]^2 of {spec} with a common prime factor > {z}: {c}")];
            if matches!(spec, OmegaSpec::FullLattice(2)) {
                let ie = gls_inclusion_exclusion(*bound, *z)?;
                result["inclusion_exclusion"] = json!(ie);
                human.push(format!("inclusion-exclusion cross-check: {ie}"));
            }
            Ok(Output { result, human })
        }
        SieveCommand::Report { family: f, ladder, zs, m } => {
            let spec = family(f)?;
            let r = gls_ratio_report(ladder, zs, &spec, *m)?;
            let mut human = vec![format!("{:>6} {:>4} {:>10} {:>14} {:>8}", "B", "z", "lhs", "rhs_shape", "ratio")];
            for row in &r.rows {
                human.push(format!("{:>6} {:>4} {:>10} {:>14.1} {:>8.4}", row.b, row.z, row.lhs, row.rhs_shape, row.ratio));
            }
            human.push(format!("empirical implied constant (max ratio): {:.4}", r.max_ratio));
            let mut result = serde_json::to_value(&r).expect("report serializes");
            result["provenance"] = json!("exact");
            Ok(Output { result, human })
        }
    }
}
