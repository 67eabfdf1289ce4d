//! Exact enumeration of `(s, t) = (a S, b T)`, `1 <= S, T <= B`, with trivial Hilbert
//! symbol at every prime of a set. One pass over `[1, B]^2` fills a histogram indexed by
//! `max(S, T)`, so every smaller bound comes for free.

use crate::arith::{build_spf_table_with_ceiling, SpfTable};
use crate::error::Result;
use crate::hilbert::hilbert_two_parts;

use super::primeset::{PrimeSet, Quadrant};

#[derive(Clone, Copy)]
struct Entry {
    pidx: u32,
    odd_exp: bool,
    /// Legendre symbol of the prime-to-p part of n.
    leg: i8,
}

/// Per-bound tables shared by every worker.
pub(crate) struct Tables {
    bmax: usize,
    primes: Vec<u32>,
    pidx_of: Vec<u32>,
    /// (-1 | p) per prime index.
    m1: Vec<i8>,
    in_p: Vec<bool>,
    two_in_p: bool,
    /// Quadratic-residue bit tables, one block of p bits per odd prime.
    qr_bits: Vec<u64>,
    qr_off: Vec<usize>,
    offsets: Vec<u32>,
    entries: Vec<Entry>,
    /// 2-adic class: 4 * (v_2 mod 2) + (odd part mod 8) / 2.
    c2: Vec<u8>,
}

impl Tables {
    pub(crate) fn new(bmax: u64, set: &PrimeSet, ceiling: u64) -> Result<Tables> {
        let spf: SpfTable = build_spf_table_with_ceiling(bmax.max(2), ceiling)?;
        let bmax = bmax as usize;
        let primes: Vec<u32> = spf.primes().into_iter().filter(|&p| p > 2).map(|p| p as u32).collect();
        let mut pidx_of = vec![u32::MAX; bmax + 1];
        for (i, &p) in primes.iter().enumerate() {
            pidx_of[p as usize] = i as u32;
        }
        let m1 = primes.iter().map(|&p| if p % 4 == 1 { 1 } else { -1 }).collect();
        let in_p = primes.iter().map(|&p| set.contains_small(p as u64)).collect();
        let two_in_p = set.contains(2)?;
        let mut qr_off = Vec::with_capacity(primes.len() + 1);
        let mut total = 0usize;
        for &p in &primes {
            qr_off.push(total);
            total += p as usize;
        }
        qr_off.push(total);
        let mut qr_bits = vec![0u64; total / 64 + 1];
        for (i, &p) in primes.iter().enumerate() {
            let p = p as u64;
            for x in 1..=(p - 1) / 2 {
                let r = (x * x % p) as usize + qr_off[i];
                qr_bits[r / 64] |= 1 << (r % 64);
            }
        }
        let mut offsets = Vec::with_capacity(bmax + 2);
        let mut entries = Vec::new();
        let mut c2 = vec![0u8; bmax + 1];
        offsets.push(0);
        offsets.push(0);
        let mut t = Tables {
            bmax,
            primes,
            pidx_of,
            m1,
            in_p,
            two_in_p,
            qr_bits,
            qr_off,
            offsets: Vec::new(),
            entries: Vec::new(),
            c2: Vec::new(),
        };
        for n in 1..=bmax {
            let mut m = n;
            let v2 = m.trailing_zeros();
            m >>= v2;
            c2[n] = (4 * (v2 % 2) + ((m % 8) as u32 >> 1)) as u8;
            for (p, e) in spf.factor(m as u64) {
                let pi = t.pidx_of[p as usize];
                let rest = n as u64 / p.pow(e);
                let leg = t.legendre(rest % p, pi as usize);
                entries.push(Entry { pidx: pi, odd_exp: e % 2 == 1, leg });
            }
            offsets.push(entries.len() as u32);
        }
        t.offsets = offsets;
        t.entries = entries;
        t.c2 = c2;
        Ok(t)
    }

    /// `(r | p)` for `0 < r < p` given the prime index.
    #[inline]
    fn legendre(&self, r: u64, pi: usize) -> i8 {
        if r == 0 {
            return 0;
        }
        let bit = self.qr_off[pi] + r as usize;
        if self.qr_bits[bit / 64] >> (bit % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    #[inline]
    fn entries_of(&self, n: usize) -> &[Entry] {
        &self.entries[self.offsets[n] as usize..self.offsets[n + 1] as usize]
    }

    /// Representative odd unit and valuation parity of a 2-adic class.
    fn class_rep(code: u8) -> (u32, i64) {
        ((code / 4) as u32, (2 * (code % 4) + 1) as i64)
    }

    fn sym2(q: Quadrant) -> [[bool; 8]; 8] {
        let mut t = [[false; 8]; 8];
        for cs in 0..8u8 {
            for ct in 0..8u8 {
                let (al, u) = Self::class_rep(cs);
                let (be, v) = Self::class_rep(ct);
                t[cs as usize][ct as usize] = hilbert_two_parts(al, q.a as i64 * u, be, q.b as i64 * v) == 1;
            }
        }
        t
    }
}

/// Histogram `h[m]` = number of good pairs with `max(S, T) = m`.
pub(crate) fn histogram(tables: &Tables, q: Quadrant, workers: usize) -> Vec<u64> {
    let workers = workers.max(1);
    let bmax = tables.bmax;
    let sym2 = Tables::sym2(q);
    let mut hist = vec![0u64; bmax + 1];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let sym2 = &sym2;
                scope.spawn(move || worker(tables, q, sym2, w, workers))
            })
            .collect();
        for h in handles {
            let part = h.join().expect("counting worker panicked");
            for (acc, x) in hist.iter_mut().zip(part) {
                *acc += x;
            }
        }
    });
    hist
}

const CHI_ZERO: u8 = 0;
const CHI_RES: u8 = 1;
const CHI_NON: u8 = 2;
const CHI_SKIP: u8 = 3;

fn worker(t: &Tables, q: Quadrant, sym2: &[[bool; 8]; 8], w: usize, workers: usize) -> Vec<u64> {
    let bmax = t.bmax;
    let np = t.primes.len();
    let mut hist = vec![0u64; bmax + 1];
    let mut chi = vec![CHI_SKIP; np];
    let mut alpha_odd = vec![false; np];
    let mut uleg = vec![0i8; np];
    let mut ok = vec![1u8; bmax + 1];
    let mut pattern: Vec<u8> = Vec::new();
    // (b | p) as a multiplier
    let bleg: Vec<i8> = t.m1.iter().map(|&m| if q.b < 0 { m } else { 1 }).collect();
    let aleg: Vec<i8> = t.m1.iter().map(|&m| if q.a < 0 { m } else { 1 }).collect();
    let mut s = w + 1;
    while s <= bmax {
        let s_entries = t.entries_of(s);
        let s_v2_odd = s.trailing_zeros() % 2 == 1;
        // chi[q] encodes (aS | q) for q not dividing S
        for (qi, &qp) in t.primes.iter().enumerate() {
            if !t.in_p[qi] {
                chi[qi] = CHI_SKIP;
                continue;
            }
            let mut sign = aleg[qi];
            if s_v2_odd && !matches!(qp % 8, 1 | 7) {
                sign = -sign;
            }
            for e in s_entries {
                if e.odd_exp {
                    let pp = t.primes[e.pidx as usize] as u64;
                    sign *= t.legendre(pp % qp as u64, qi);
                }
            }
            chi[qi] = if sign > 0 { CHI_RES } else { CHI_NON };
        }
        // primes of S: full formula when they also divide T, periodic mask otherwise
        let mut masked = false;
        for e in s_entries {
            let pi = e.pidx as usize;
            if !t.in_p[pi] {
                continue;
            }
            chi[pi] = CHI_ZERO;
            alpha_odd[pi] = e.odd_exp;
            uleg[pi] = aleg[pi] * e.leg;
            if e.odd_exp {
                let p = t.primes[pi] as usize;
                if !masked {
                    ok.fill(1);
                    masked = true;
                }
                pattern.clear();
                pattern.push(1);
                for r in 1..p {
                    pattern.push((bleg[pi] * t.legendre(r as u64, pi) > 0) as u8);
                }
                let mut start = 0;
                while start <= bmax {
                    let len = p.min(bmax + 1 - start);
                    for (o, &pt) in ok[start..start + len].iter_mut().zip(&pattern[..len]) {
                        *o &= pt;
                    }
                    start += p;
                }
            }
        }
        let cs = t.c2[s] as usize;
        let row2 = &sym2[cs];
        for tt in 1..=bmax {
            if masked && ok[tt] == 0 {
                continue;
            }
            if t.two_in_p && !row2[t.c2[tt] as usize] {
                continue;
            }
            let mut good = true;
            for e in t.entries_of(tt) {
                let pi = e.pidx as usize;
                match chi[pi] {
                    CHI_SKIP | CHI_RES => {}
                    CHI_NON => {
                        if e.odd_exp {
                            good = false;
                            break;
                        }
                    }
                    _ => {
                        let a_odd = alpha_odd[pi];
                        let b_odd = e.odd_exp;
                        let mut sym = 1i8;
                        if a_odd && b_odd && t.m1[pi] < 0 {
                            sym = -sym;
                        }
                        if b_odd {
                            sym *= uleg[pi];
                        }
                        if a_odd {
                            sym *= bleg[pi] * e.leg;
                        }
                        if sym < 0 {
                            good = false;
                            break;
                        }
                    }
                }
            }
            if good {
                hist[s.max(tt)] += 1;
            }
        }
        s += workers;
    }
    hist
}
