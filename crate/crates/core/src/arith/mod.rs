//! Integer arithmetic shared by every other module.

pub mod factor;
pub mod primes;
pub mod spf;
pub mod symbols;

pub use factor::{factorize, factorize_u64, squarefree_part, valuation_split, Factorization};
pub use primes::{is_prime, is_prime_i64, isqrt_u128, mulmod, powmod, primes_up_to};
pub use spf::{
    build_spf_table, build_spf_table_with_ceiling, cache_dir, load_or_build, load_or_build_in, SpfTable, DEFAULT_SPF_CEILING,
};
pub use symbols::{kronecker, legendre_euler};
