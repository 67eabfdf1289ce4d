use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{domain, Result, StabError};
use crate::numfield::{in_al, load_fixture, FieldSpec};

/// A symbolic set of primes.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimeSetSpec {
    AllPrimes,
    ComplementOf(Vec<u64>),
    /// Primes outside the exceptional set of a field: those with some odd local degree.
    ComplementOfAL(Box<FieldSpec>),
    Progression { a: u64, q: u64 },
    ExplicitList(Vec<u64>),
}

fn sorted_primes(mut v: Vec<u64>) -> Result<Vec<u64>> {
    if let Some(&x) = v.iter().find(|&&x| !is_prime(x)) {
        return domain(format!("{x} is not prime"));
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

impl PrimeSetSpec {
    pub fn complement_of(v: Vec<u64>) -> Result<Self> {
        Ok(PrimeSetSpec::ComplementOf(sorted_primes(v)?))
    }

    pub fn explicit(v: Vec<u64>) -> Result<Self> {
        Ok(PrimeSetSpec::ExplicitList(sorted_primes(v)?))
    }

    pub fn progression(a: u64, q: u64) -> Result<Self> {
        if q == 0 || num_integer::gcd(a, q) != 1 {
            return domain(format!("progression {a} mod {q} needs gcd(a, q) = 1"));
        }
        Ok(PrimeSetSpec::Progression { a: a % q, q })
    }

    /// Parses `all`, `complement:2,3`, `list:5,7`, `progression:a,q` or `field:PATH`.
    pub fn parse(s: &str) -> Result<Self> {
        let nums = |body: &str| -> Result<Vec<u64>> {
            body.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|_| StabError::Parse(format!("bad number {t:?} in {s:?}"))))
                .collect()
        };
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "all" => Ok(PrimeSetSpec::AllPrimes),
            "complement" => Self::complement_of(nums(body)?),
            "list" => Self::explicit(nums(body)?),
            "progression" => match nums(body)?.as_slice() {
                [a, q] => Self::progression(*a, *q),
                _ => Err(StabError::Parse(format!("progression needs a,q in {s:?}"))),
            },
            "field" => Ok(PrimeSetSpec::ComplementOfAL(Box::new(load_fixture(Path::new(body))?))),
            _ => Err(StabError::Parse(format!("unknown prime set {s:?}"))),
        }
    }

    /// Membership without any table.
    pub fn contains(&self, p: u64) -> Result<bool> {
        Ok(match self {
            PrimeSetSpec::AllPrimes => true,
            PrimeSetSpec::ComplementOf(v) => v.binary_search(&p).is_err(),
            PrimeSetSpec::ExplicitList(v) => v.binary_search(&p).is_ok(),
            PrimeSetSpec::Progression { a, q } => p % q == *a,
            PrimeSetSpec::ComplementOfAL(spec) => !in_al(spec, p)?,
        })
    }
}

impl fmt::Display for PrimeSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            PrimeSetSpec::AllPrimes => write!(f, "all"),
            PrimeSetSpec::ComplementOf(v) => write!(f, "complement:{}", join(v)),
            PrimeSetSpec::ExplicitList(v) => write!(f, "list:{}", join(v)),
            PrimeSetSpec::Progression { a, q } => write!(f, "progression:{a},{q}"),
            PrimeSetSpec::ComplementOfAL(spec) => {
                write!(f, "field:{}", spec.name.clone().unwrap_or_else(|| spec.poly_string()))
            }
        }
    }
}

/// A prime set with membership resolved for every prime up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeSet {
    pub spec: PrimeSetSpec,
    limit: u64,
    member: Vec<bool>,
}

impl PrimeSet {
    /// Pre-computes membership for all primes `<= limit`; field sets propagate `NeedsOverride`.
    pub fn resolve(spec: PrimeSetSpec, limit: u64) -> Result<Self> {
        let mut member = vec![false; limit as usize + 1];
        for p in primes_up_to(limit) {
            member[p as usize] = spec.contains(p)?;
        }
        Ok(PrimeSet { spec, limit, member })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, p: u64) -> Result<bool> {
        if p <= self.limit {
            Ok(self.member[p as usize])
        } else {
            self.spec.contains(p)
        }
    }

    /// Table lookup; `p` must be `<= limit`.
    #[inline]
    pub fn contains_small(&self, p: u64) -> bool {
        self.member[p as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadrant {
    pub a: i8,
    pub b: i8,
}

impl Quadrant {
    pub const PP: Quadrant = Quadrant { a: 1, b: 1 };
    pub const PM: Quadrant = Quadrant { a: 1, b: -1 };
    pub const MP: Quadrant = Quadrant { a: -1, b: 1 };
    pub const MM: Quadrant = Quadrant { a: -1, b: -1 };
    pub const ALL: [Quadrant; 4] = [Self::PP, Self::PM, Self::MP, Self::MM];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "++" => Ok(Self::PP),
            "+-" => Ok(Self::PM),
            "-+" => Ok(Self::MP),
            "--" => Ok(Self::MM),
            _ => Err(StabError::Parse(format!("signs must be one of ++ +- -+ --, got {s:?}"))),
        }
    }

    /// The real Hilbert symbol of the quadrant.
    pub fn real_symbol(&self) -> i8 {
        if self.a < 0 && self.b < 0 {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |x: i8| if x > 0 { '+' } else { '-' };
        write!(f, "{}{}", c(self.a), c(self.b))
    }
}
