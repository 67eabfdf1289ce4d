//! Local degrees `[L_w : Q_p]` at a prime: Dedekind's criterion where it applies, and a
//! Newton-polygon / residual-polynomial recursion over unramified extensions otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ff::{ExtField, FiniteField, PrimeField};
use super::fpoly;
use crate::error::{Result, StabError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitSource {
    DedekindModP,
    NewtonPolygon,
    Override,
}

impl std::fmt::Display for SplitSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SplitSource::DedekindModP => "dedekind",
            SplitSource::NewtonPolygon => "newton",
            SplitSource::Override => "override",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSplitting {
    pub p: u64,
    /// Sorted ascending.
    pub degrees: Vec<usize>,
    pub source: SplitSource,
}

impl LocalSplitting {
    /// Every local degree even, i.e. the decomposition group has only even orbits.
    pub fn all_even(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }
}

/// Factorization of `f mod p` as `(monic factor, multiplicity)`.
pub fn factor_mod_p(f: &[i64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let k = PrimeField::new(p);
    fpoly::factor(&k, &fpoly::from_i64s(&k, f))
}

/// Dedekind: one entry `e_i * deg(phi_i)` per factor `phi_i^{e_i}` of `f mod p`.
pub fn dedekind_degrees(f: &[i64], p: u64) -> Vec<usize> {
    let mut d: Vec<usize> = factor_mod_p(f, p).iter().map(|(g, e)| (g.len() - 1) * e).collect();
    d.sort_unstable();
    d
}

pub fn valuation_big(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// The unramified order `Z[t]/(phi)` for a monic `phi` irreducible mod p.
struct OrderRing {
    p: u64,
    pb: BigInt,
    phi: Vec<BigInt>,
    residue: ExtField,
}

type Elem = Vec<BigInt>;

impl OrderRing {
    fn new(p: u64, phi_bar: &[u64]) -> Self {
        OrderRing {
            p,
            pb: BigInt::from(p),
            phi: phi_bar.iter().map(|&c| BigInt::from(c)).collect(),
            residue: ExtField::new(p, phi_bar.to_vec()),
        }
    }

    fn d(&self) -> usize {
        self.phi.len() - 1
    }

    fn zero(&self) -> Elem {
        vec![BigInt::zero(); self.d()]
    }

    fn from_int(&self, n: &BigInt) -> Elem {
        let mut e = self.zero();
        e[0] = n.clone();
        e
    }

    fn reduce(&self, mut a: Vec<BigInt>) -> Elem {
        let d = self.d();
        for i in (d..a.len()).rev() {
            if a[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut a[i]);
            for j in 0..d {
                a[i - d + j] -= &c * &self.phi[j];
            }
        }
        a.resize(d, BigInt::zero());
        a
    }

    fn generator(&self) -> Elem {
        self.reduce(vec![BigInt::zero(), BigInt::one()])
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut prod = vec![BigInt::zero(); 2 * self.d()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod)
    }

    fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn valuation(&self, a: &Elem) -> Option<u32> {
        a.iter().filter_map(|c| valuation_big(c, self.p)).min()
    }

    /// Residue class of `a / p^k` in the residue field.
    fn residue_div(&self, a: &Elem, k: u32) -> Vec<u64> {
        let pk = self.pb.pow(k);
        let coeffs: Vec<u64> = a
            .iter()
            .map(|c| (c / &pk).mod_floor(&self.pb).to_u64().expect("residue fits"))
            .collect();
        self.residue.from_poly(&coeffs)
    }

    fn lift(&self, r: &[u64]) -> Elem {
        let mut e: Elem = r.iter().map(|&c| BigInt::from(c)).collect();
        e.resize(self.d(), BigInt::zero());
        e
    }

    /// `f(y + c)` for integer `f`.
    fn taylor_shift(&self, f: &[BigInt], c: &Elem) -> Vec<Elem> {
        let mut g: Vec<Elem> = Vec::new();
        for coef in f.iter().rev() {
            // g <- g * (y + c) + coef
            let mut next = vec![self.zero(); g.len() + 1];
            for (i, gi) in g.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], gi);
                next[i] = self.add(&next[i], &self.mul(gi, c));
            }
            next[0] = self.add(&next[0], &self.from_int(coef));
            g = next;
        }
        g
    }
}

/// A side of the lower Newton polygon from `(i0, y0)` to `(i1, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub i0: usize,
    pub y0: u32,
    pub i1: usize,
    pub y1: u32,
}

impl Side {
    /// Root valuation `h/e` in lowest terms.
    pub fn slope(&self) -> (u32, u32) {
        let num = self.y0 - self.y1;
        let den = (self.i1 - self.i0) as u32;
        let g = num.gcd(&den).max(1);
        (num / g, den / g)
    }

    pub fn length(&self) -> usize {
        self.i1 - self.i0
    }
}

/// Lower convex hull of the points `(i, v_i)` with finite `v_i`; sides have strictly negative slope.
pub fn newton_polygon(vals: &[Option<u32>]) -> Vec<Side> {
    let pts: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v as i64)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            // drop b if it lies on or above segment a-pt
            if (by - ay) * (pt.0 - ax) >= (pt.1 - ay) * (bx - ax) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .map(|w| Side { i0: w[0].0 as usize, y0: w[0].1 as u32, i1: w[1].0 as usize, y1: w[1].1 as u32 })
        .collect()
}

struct Task {
    center: Elem,
    /// Only roots `y = alpha - center` with `v(y) > threshold` are tracked.
    threshold: u32,
    count: usize,
    depth: u32,
}

fn stall<T>(p: u64, reason: impl Into<String>) -> Result<T> {
    Err(StabError::NeedsOverride { prime: p, reason: reason.into() })
}

/// Degrees over `K = Q_p(t)` (unramified of degree `deg phi`) of the factors of `f` whose roots
/// reduce to the class of `t`; they sum to the multiplicity of `phi` in `f mod p`.
fn cluster_degrees(f: &[BigInt], p: u64, phi_bar: &[u64], mult: usize, depth_bound: u32) -> Result<Vec<usize>> {
    let ring = OrderRing::new(p, phi_bar);
    let k = &ring.residue;
    let mut out = Vec::new();
    let mut tasks = vec![Task { center: ring.generator(), threshold: 0, count: mult, depth: 0 }];
    while let Some(task) = tasks.pop() {
        if task.depth > depth_bound {
            return stall(p, format!("Newton polygon recursion exceeded depth {depth_bound}"));
        }
        let mut g = ring.taylor_shift(f, &task.center);
        let mut count = task.count;
        // an exact root at the center is a factor of degree 1
        while count > 0 && g.first().is_some_and(|c| ring.is_zero(c)) {
            g.remove(0);
            out.push(1);
            count -= 1;
        }
        if count == 0 {
            continue;
        }
        let vals: Vec<Option<u32>> = g.iter().map(|c| ring.valuation(c)).collect();
        let sides: Vec<Side> = newton_polygon(&vals)
            .into_iter()
            .filter(|s| {
                let (h, e) = s.slope();
                h > task.threshold * e
            })
            .collect();
        let total: usize = sides.iter().map(Side::length).sum();
        if total != count {
            return stall(p, format!("Newton polygon accounts for {total} of {count} roots"));
        }
        for side in sides {
            let (h, e) = side.slope();
            let steps = side.length() / e as usize;
            let residual: Vec<Vec<u64>> = (0..=steps)
                .map(|j| {
                    let idx = side.i0 + j * e as usize;
                    let expect = side.y0 - j as u32 * h;
                    if vals[idx] == Some(expect) {
                        ring.residue_div(&g[idx], expect)
                    } else {
                        k.zero()
                    }
                })
                .collect();
            let residual = fpoly::trim(k, residual);
            for (r, m) in fpoly::factor(k, &residual) {
                let dr = r.len() - 1;
                if m == 1 {
                    out.push(e as usize * dr);
                } else if e == 1 && dr == 1 {
                    let rho = k.neg(&r[0]);
                    let shift: Elem = ring.lift(&k.coords(&rho)).iter().map(|c| c * ring.pb.pow(h)).collect();
                    tasks.push(Task {
                        center: ring.add(&task.center, &shift),
                        threshold: h,
                        count: m,
                        depth: task.depth + 1,
                    });
                } else {
                    return stall(
                        p,
                        format!("residual polynomial has a repeated factor of degree {dr} on a side of slope {h}/{e}"),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Local degrees by the Newton-polygon route for every factor of `f mod p`, simple ones included.
pub fn newton_degrees(f: &[i64], p: u64, depth_bound: u32) -> Result<Vec<usize>> {
    let fb: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
    let mut out = Vec::new();
    for (phi, mult) in factor_mod_p(f, p) {
        let d = phi.len() - 1;
        let kdeg = cluster_degrees(&fb, p, &phi, mult, depth_bound)?;
        out.extend(kdeg.into_iter().map(|x| x * d));
    }
    out.sort_unstable();
    if out.iter().sum::<usize>() != f.len() - 1 {
        return stall(p, "local degrees do not sum to the degree");
    }
    Ok(out)
}
