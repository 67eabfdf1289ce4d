//! Finite permutation groups, cycle types and the odd-orbit density.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{domain, resource, Result, StabError};

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A bijection of `{0, .., n-1}` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return domain(format!("{images:?} is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds from 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return domain(format!("point {x} outside degree {n}"));
                }
                if used[x] {
                    return domain(format!("point {x} repeated across cycles"));
                }
                used[x] = true;
                images[x] = c[(k + 1) % c.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5 6)"`.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(StabError::Parse(format!("expected '(' in {s:?}")));
            };
            let Some(end) = body.find(')') else {
                return Err(StabError::Parse(format!("unclosed cycle in {s:?}")));
            };
            let mut cyc = Vec::new();
            for tok in body[..end].split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let x: usize = tok
                    .parse()
                    .map_err(|_| StabError::Parse(format!("bad point {tok:?} in {s:?}")))?;
                if x == 0 {
                    return Err(StabError::Parse(format!("points are 1-based, got 0 in {s:?}")));
                }
                cyc.push(x - 1);
            }
            cycles.push(cyc);
            rest = body[end + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle lengths, sorted ascending; fixed points count as 1-cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }

    pub fn has_odd_cycle(&self) -> bool {
        self.cycle_type().iter().any(|l| l % 2 == 1)
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation without fixed points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut x = start;
            let mut pts = Vec::new();
            while !seen[x] {
                seen[x] = true;
                pts.push((x + 1).to_string());
                x = self.images[x];
            }
            write!(f, "({})", pts.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A fully enumerated permutation group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroupTable {
    pub n: usize,
    pub elements: Vec<Permutation>,
}

impl PermGroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_transitive(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut orbit = vec![false; self.n];
        for g in &self.elements {
            orbit[g.apply(0)] = true;
        }
        orbit.into_iter().all(|b| b)
    }

    /// The group acting on itself by left multiplication (degree = order).
    pub fn regular_action(&self) -> PermGroupTable {
        let idx: std::collections::HashMap<&Permutation, usize> =
            self.elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let elements = self
            .elements
            .iter()
            .map(|g| Permutation { images: self.elements.iter().map(|h| idx[&g.compose(h)]).collect() })
            .collect();
        PermGroupTable { n: self.elements.len(), elements }
    }
}

/// Breadth-first closure of the generated group, refusing to grow past `cap` elements.
pub fn generate_closure(generators: &[Permutation], n: usize, cap: usize) -> Result<PermGroupTable> {
    if let Some(g) = generators.iter().find(|g| g.degree() != n) {
        return domain(format!("generator {g} has degree {} but expected {n}", g.degree()));
    }
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return resource(format!("group closure exceeds cap {cap}"));
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(PermGroupTable { n, elements })
}

fn fraction(count: usize, total: usize) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(total))
}

/// Fraction of elements having at least one cycle of odd length.
pub fn delta_of_group(g: &PermGroupTable) -> BigRational {
    fraction(g.elements.iter().filter(|x| x.has_odd_cycle()).count(), g.order())
}

/// Fraction of elements of odd order.
pub fn odd_order_fraction(g: &PermGroupTable) -> BigRational {
    fraction(g.elements.iter().filter(|x| x.order() % 2 == 1).count(), g.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, gens: &[&str]) -> PermGroupTable {
        let gens: Vec<_> = gens.iter().map(|s| Permutation::parse_cycles(s, n).unwrap()).collect();
        generate_closure(&gens, n, DEFAULT_GROUP_CAP).unwrap()
    }

    fn r(a: usize, b: usize) -> BigRational {
        fraction(a, b)
    }

    #[test]
    fn closure_examples() {
        assert_eq!(grp(2, &["(1 2)"]).order(), 2);
        assert_eq!(grp(3, &["(1 2 3)", "(1 2)"]).order(), 6);
        let a4 = grp(6, &["(1 2 3)(4 5 6)", "(1 4)(2 5)", "(2 5)(3 6)"]);
        assert_eq!(a4.order(), 12);
        assert!(a4.is_transitive());
        assert_eq!(720 % a4.order(), 0);
    }

    #[test]
    fn closure_is_a_group() {
        let g = grp(5, &["(1 2 3 4 5)", "(1 2)"]);
        assert_eq!(g.order(), 120);
        let set: HashSet<_> = g.elements.iter().cloned().collect();
        for a in &g.elements {
            assert!(set.contains(&a.inverse()));
            for b in g.elements.iter().take(10) {
                assert!(set.contains(&a.compose(b)));
            }
        }
        let err = generate_closure(&[Permutation::parse_cycles("(1 2 3 4 5)", 5).unwrap(), Permutation::parse_cycles("(1 2)", 5).unwrap()], 5, 50);
        assert!(matches!(err, Err(StabError::Resource(_))));
    }

    #[test]
    fn cycle_types() {
        assert_eq!(Permutation::identity(6).cycle_type(), vec![1; 6]);
        assert_eq!(Permutation::parse_cycles("(1 2)(3 4)", 4).unwrap().cycle_type(), vec![2, 2]);
        assert_eq!(Permutation::parse_cycles("(1 2 3)(4 5 6)", 6).unwrap().cycle_type(), vec![3, 3]);
    }

    #[test]
    fn parse_and_display() {
        let p = Permutation::parse_cycles("(1 4)(2 5)", 6).unwrap();
        assert_eq!(p.to_string(), "(1 4)(2 5)");
        assert_eq!(Permutation::parse_cycles("", 3).unwrap().to_string(), "()");
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
    }

    #[test]
    fn delta_examples() {
        let c2 = grp(2, &["(1 2)"]);
        assert_eq!(delta_of_group(&c2), r(1, 2));
        let c4 = grp(4, &["(1 2 3 4)"]);
        assert_eq!(delta_of_group(&c4), r(1, 4));
        let s3 = grp(3, &["(1 2 3)", "(1 2)"]);
        assert_eq!(delta_of_group(&s3), r(1, 1));
        assert_eq!(delta_of_group(&s3.regular_action()), r(1, 2));
        let a4 = grp(6, &["(1 2 3)(4 5 6)", "(1 4)(2 5)", "(2 5)(3 6)"]);
        assert_eq!(delta_of_group(&a4), r(1, 1));
    }

    #[test]
    fn odd_order_examples() {
        assert_eq!(odd_order_fraction(&grp(3, &["(1 2 3)", "(1 2)"])), r(1, 2));
        assert_eq!(odd_order_fraction(&grp(2, &["(1 2)"])), r(1, 2));
        let a4 = grp(6, &["(1 2 3)(4 5 6)", "(1 4)(2 5)", "(2 5)(3 6)"]);
        assert_eq!(odd_order_fraction(&a4), r(3, 4));
    }

    #[test]
    fn regular_actions_match_odd_order() {
        let groups = [
            grp(2, &["(1 2)"]),
            grp(4, &["(1 2 3 4)"]),
            grp(3, &["(1 2 3)", "(1 2)"]),
            grp(6, &["(1 2 3)(4 5 6)", "(1 4)(2 5)", "(2 5)(3 6)"]),
        ];
        for g in &groups {
            let reg = g.regular_action();
            assert_eq!(reg.n, reg.order());
            assert_eq!(delta_of_group(&reg), odd_order_fraction(g));
            assert!(delta_of_group(g) > r(0, 1));
        }
    }
}
