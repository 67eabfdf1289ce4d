//! Field specifications and the fixture format.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::intpoly;
use super::irred::{check_irreducible, Irreducibility};
use crate::error::{domain, Result, StabError};
use crate::permgroup::{generate_closure, PermGroupTable, Permutation, DEFAULT_GROUP_CAP};

/// A number field `Q[x]/(f)` with optional Galois data and local-degree overrides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: Option<String>,
    /// Ascending coefficients, monic.
    pub poly: Vec<i64>,
    pub galois_generators: Option<Vec<Permutation>>,
    pub local_overrides: BTreeMap<u64, Vec<usize>>,
    pub irreducibility: Irreducibility,
    /// Discriminant of `poly`.
    pub disc: BigInt,
}

impl FieldSpec {
    pub fn new(
        poly: Vec<i64>,
        galois_generators: Option<Vec<Permutation>>,
        local_overrides: BTreeMap<u64, Vec<usize>>,
    ) -> Result<Self> {
        if poly.len() < 3 {
            return domain(format!("defining polynomial must have degree >= 2, got {poly:?}"));
        }
        if poly.last() != Some(&1) {
            return domain(format!("defining polynomial must be monic, got {poly:?}"));
        }
        let n = poly.len() - 1;
        let irreducibility = check_irreducible(&poly)?;
        if let Irreducibility::Reducible(h) = &irreducibility {
            return domain(format!("polynomial {poly:?} is reducible, factor {h:?}"));
        }
        if let Some(gens) = &galois_generators {
            let g = generate_closure(gens, n, DEFAULT_GROUP_CAP)?;
            if !g.is_transitive() {
                return domain("Galois generators do not act transitively");
            }
        }
        for (p, degs) in &local_overrides {
            if degs.iter().sum::<usize>() != n || degs.contains(&0) {
                return domain(format!("override at {p} must be positive degrees summing to {n}"));
            }
        }
        let disc = intpoly::discriminant(&intpoly::to_big(&poly));
        Ok(FieldSpec { name: None, poly, galois_generators, local_overrides, irreducibility, disc })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn poly_big(&self) -> Vec<BigInt> {
        intpoly::to_big(&self.poly)
    }

    pub fn galois_group(&self) -> Option<PermGroupTable> {
        self.galois_generators
            .as_ref()
            .map(|g| generate_closure(g, self.degree(), DEFAULT_GROUP_CAP).expect("validated at construction"))
    }

    /// Canonical text form: the hash input for scan caches.
    pub fn canonical(&self) -> String {
        let mut s = format!("poly = {:?}\n", self.poly);
        if let Some(g) = &self.galois_generators {
            let gens: Vec<String> = g.iter().map(|x| format!("{:?}", x.to_string())).collect();
            s.push_str(&format!("generators = [{}]\n", gens.join(", ")));
        }
        for (p, d) in &self.local_overrides {
            s.push_str(&format!("override.{p} = {d:?}\n"));
        }
        s
    }

    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    /// `x^2 + 3x - 1` style rendering.
    pub fn poly_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.poly.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let mag = c.unsigned_abs();
            let body = if mag == 1 && i > 0 { mono } else { format!("{mag}{mono}") };
            let sign = if c < 0 { "-" } else { "+" };
            if terms.is_empty() {
                terms.push(if c < 0 { format!("-{body}") } else { body });
            } else {
                terms.push(format!("{sign} {body}"));
            }
        }
        terms.join(" ")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    name: Option<String>,
    poly: Vec<i64>,
    generators: Option<Vec<String>>,
    #[serde(rename = "override", default)]
    overrides: BTreeMap<String, Vec<usize>>,
}

/// Parses the `key = value` fixture format (a TOML subset).
pub fn parse_fixture(text: &str) -> Result<FieldSpec> {
    let raw: FixtureFile = toml::from_str(text).map_err(|e| StabError::Parse(e.to_string()))?;
    let n = raw.poly.len().saturating_sub(1);
    let gens = match raw.generators {
        Some(list) => Some(
            list.iter()
                .map(|s| Permutation::parse_cycles(s, n))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let mut overrides = BTreeMap::new();
    for (k, v) in raw.overrides {
        let p: u64 = k.parse().map_err(|_| StabError::Parse(format!("override key {k:?} is not a prime")))?;
        if !crate::arith::is_prime(p) {
            return Err(StabError::Parse(format!("override key {p} is not prime")));
        }
        overrides.insert(p, v);
    }
    let mut spec = FieldSpec::new(raw.poly, gens, overrides)?;
    spec.name = raw.name;
    Ok(spec)
}

pub fn load_fixture(path: &Path) -> Result<FieldSpec> {
    let text = std::fs::read_to_string(path)?;
    let spec = parse_fixture(&text)?;
    Ok(match spec.name {
        Some(_) => spec,
        None => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            FieldSpec { name: stem, ..spec }
        }
    })
}

/// The three reference fields.
pub mod fixtures {
    use super::*;

    pub const GAUSSIAN: &str = "name = \"gaussian\"\npoly = [1, 0, 1]\ngenerators = [\"(1 2)\"]\n";
    pub const CUBIC2: &str = "name = \"cubic2\"\npoly = [-2, 0, 0, 1]\n";
    pub const SEXTIC_A4: &str = "name = \"sextic-a4\"\npoly = [-1, 0, -2, 0, 1, 0, 1]\ngenerators = [\"(1 2 3)(4 5 6)\", \"(1 4)(2 5)\", \"(2 5)(3 6)\"]\n";

    pub fn gaussian() -> FieldSpec {
        parse_fixture(GAUSSIAN).expect("valid fixture")
    }
    pub fn cubic2() -> FieldSpec {
        parse_fixture(CUBIC2).expect("valid fixture")
    }
    pub fn sextic_a4() -> FieldSpec {
        parse_fixture(SEXTIC_A4).expect("valid fixture")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reference_fixtures() {
        let g = fixtures::gaussian();
        assert_eq!(g.poly, vec![1, 0, 1]);
        assert_eq!(g.galois_group().unwrap().order(), 2);
        let s = fixtures::sextic_a4();
        assert_eq!(s.galois_group().unwrap().order(), 12);
        assert_eq!(s.poly_string(), "x^6 + x^4 - 2x^2 - 1");
        assert_eq!(fixtures::cubic2().poly_string(), "x^3 - 2");
    }

    #[test]
    fn overrides_and_errors() {
        let s = parse_fixture("poly = [1, 0, 1]\noverride.2 = [2]\n").unwrap();
        assert_eq!(s.local_overrides.get(&2), Some(&vec![2]));
        assert!(parse_fixture("poly = [1, 0, 1]\noverride.2 = [1]\n").is_err());
        assert!(parse_fixture("poly = [1, 0, 1]\noverride.4 = [2]\n").is_err());
        assert!(parse_fixture("poly = [-1, 0, 1]\n").is_err());
        assert!(parse_fixture("poly = [1, 0, 2]\n").is_err());
        assert!(parse_fixture("poly = [1, 0, 0, 1, 1]\ngenerators = [\"(1 2)\"]\n").is_err());
        assert!(parse_fixture("poly = [1, 0, 1]\nbogus = 3\n").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = fixtures::gaussian();
        let b = parse_fixture("poly = [1, 0, 1]\ngenerators = [\"(1 2)\"]\n").unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
        assert_ne!(a.content_hash(), fixtures::cubic2().content_hash());
    }
}
