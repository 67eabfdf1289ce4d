use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::primes_up_to;
use crate::error::{domain, resource, Result};

/// The modulus `W = 2^{3+k_2} prod_{2<l<=z} l^{1+k_l}` with `k_l = floor(log z / log l)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WTrickParams {
    pub z: f64,
    pub k: BTreeMap<u64, u32>,
    pub w: u128,
}

pub fn w_trick_modulus(z: f64) -> Result<WTrickParams> {
    if !(z >= 2.0) || !z.is_finite() {
        return domain(format!("z must be at least 2, got {z}"));
    }
    let zf = z.floor() as u64;
    let mut k = BTreeMap::new();
    let mut w: u128 = 1;
    let overflow = || resource(format!("W overflows 128 bits at z = {z}"));
    for l in primes_up_to(zf) {
        // largest k with l^k <= floor(z), computed in integers
        let mut kl = 0u32;
        let mut pow = 1u64;
        while let Some(next) = pow.checked_mul(l) {
            if next > zf {
                break;
            }
            pow = next;
            kl += 1;
        }
        let e = if l == 2 { 3 + kl } else { 1 + kl };
        for _ in 0..e {
            w = match w.checked_mul(l as u128) {
                Some(v) => v,
                None => return overflow(),
            };
        }
        k.insert(l, kl);
    }
    Ok(WTrickParams { z, k, w })
}
