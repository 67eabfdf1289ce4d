//! Number fields given by a defining polynomial: discriminant, Frobenius cycle types,
//! local degrees at every prime, and the stability trichotomy.

pub mod analysis;
pub mod ff;
pub mod field;
pub mod fpoly;
pub mod intpoly;
pub mod irred;
pub mod local;

pub use analysis::{
    classify_trichotomy, degree_multiset_mod_p, delta_hat, disc_primes, discriminant, field_delta, in_al,
    local_degrees, local_degrees_newton, real_signature, scan_al, scan_al_cached, AlScan, Confidence, DeltaHat,
    DeltaValue, ScanRow, TrichotomyClass, TrichotomyVerdict,
};
pub use field::{fixtures, load_fixture, parse_fixture, FieldSpec};
pub use irred::{check_irreducible, Irreducibility};
pub use local::{LocalSplitting, SplitSource};
