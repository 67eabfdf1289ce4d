//! Hilbert symbols, local densities, Galois cycle statistics and exact conic counts
//! for questions of Diophantine stability of `s x0^2 + t x1^2 = x2^2`.

pub mod arith;
pub mod asymptotics;
pub mod counting;
pub mod densities;
pub mod error;
pub mod hilbert;
pub mod numfield;
pub mod permgroup;
pub mod sievelab;

pub use counting::{PrimeSet, PrimeSetSpec, Quadrant};
pub use error::{Result, StabError};
pub use hilbert::{PairST, Place};
pub use numfield::FieldSpec;
