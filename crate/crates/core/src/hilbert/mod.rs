//! Hilbert symbols over Q_p and R, conic solubility and a rational-point oracle.

mod local;
mod point;
mod wtrick;

pub use local::{
    hilbert_at, hilbert_p, hilbert_real, is_conic_soluble_at, is_conic_soluble_q, product_over_places,
    relevant_places, PairST, Place,
};
pub(crate) use local::hilbert_two_parts;
pub use point::{find_rational_point, holzer_search, legendre_reduce, LegendreForm, POINT_SEARCH_CAP};
pub use wtrick::{w_trick_modulus, WTrickParams};
